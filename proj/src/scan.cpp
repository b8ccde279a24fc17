#include "fermigraph/scan.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fermigraph/ent.hpp"
#include "fermigraph/error.hpp"
#include "fermigraph/gsfid.hpp"
#include "fermigraph/solver.hpp"

namespace fermigraph {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct QuantityName {
  Quantity q;
  std::string_view name;
};

constexpr QuantityName kQuantityNames[] = {
    {Quantity::FMin, "F_min"}, {Quantity::HCrit, "h_crit"}, {Quantity::Log10H, "log10_h"},
    {Quantity::DetZ, "detZ"},  {Quantity::Gap, "gap"},      {Quantity::E0, "E0"},
    {Quantity::N, "n"},        {Quantity::Si, "Si"},        {Quantity::Parity, "parity"},
};

constexpr std::string_view kStatusNames[] = {
    "degenerate", "parity_change", "stencil_crosses", "singular",
    "cyclic_only", "trivial_line", "failed",
};

unsigned status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateEndpoint:
    case ErrorCode::DegeneratePoint:
      return kDegenerate;
    case ErrorCode::StencilCrossesTransition:
      return kStencilCrosses;
    case ErrorCode::SingularPoint:
      return kSingular;
    default:
      return kFailed;
  }
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parameter, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

// Everything a grid point needs from a single factorization.
struct PointState {
  StateAt state;
  double e0 = kNaN;
  double gap = kNaN;
  double tii = kNaN;
  bool cyclic = false;
};

PointState prepare_point(const ScanSpec& spec, const ModelParams& p) {
  PointState ps;
  ps.cyclic = p.boundary == Boundary::Cyclic;
  const bool circulant = spec.path == StatePath::Circulant ||
                         (spec.path == StatePath::Auto && ps.cyclic);
  if (circulant) {
    ps.state = prepare_state(p, StatePath::Circulant);
    const CirculantSummary sum = summarize_circulant(p, ps.state.spectrum);
    ps.e0 = sum.e0;
    ps.gap = sum.gap;
    if (ps.state.well_defined) ps.tii = single_site(ps.state.spectrum).tii;
    return ps;
  }
  const CouplingModel model = build_model(p);
  const CanonicalSpectrum cs = canonical_decompose(model);
  ps.state.params = p;
  ps.state.polar = polar_T(cs, model);
  ps.state.parity = ps.state.polar.parity;
  ps.state.well_defined = ps.state.polar.well_defined;
  const EnergyGap eg = ground_energy_and_gap(model, cs);
  ps.e0 = eg.e0;
  ps.gap = eg.gap;
  // A circulant T has a constant diagonal.
  if (ps.cyclic && ps.state.well_defined) ps.tii = ps.state.polar.T.trace() / p.L;
  return ps;
}

double axis_spacing(const Axis& a) {
  return a.count > 1 ? std::abs(a.to - a.from) / (a.count - 1) : 0.0;
}

}  // namespace

std::string_view quantity_name(Quantity q) {
  for (const auto& e : kQuantityNames) {
    if (e.q == q) return e.name;
  }
  return "?";
}

Quantity parse_quantity(std::string_view name) {
  for (const auto& e : kQuantityNames) {
    if (e.name == name) return e.q;
  }
  throw Error(ErrorCode::Parameter, "unknown quantity '" + std::string(name) + "'");
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    v[i] = (i == 0) ? from : (i == count - 1 ? to : from + (to - from) * i / (count - 1));
  }
  return v;
}

Axis parse_axis(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) {
    const double a = parse_double(parts[0]);
    return Axis{a, a, 1};
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::Parameter, "axis must be 'a' or 'a:b:n', got '" + std::string(text) + "'");
  }
  Axis a{parse_double(parts[0]), parse_double(parts[1]), 0};
  const double n = parse_double(parts[2]);
  if (n < 1 || n != std::floor(n) || n > 1e7) {
    throw Error(ErrorCode::Parameter, "axis count must be a positive integer");
  }
  a.count = static_cast<int>(n);
  if (a.count == 1 && a.from != a.to) {
    throw Error(ErrorCode::Parameter, "a one-point axis needs from == to");
  }
  return a;
}

std::string status_string(unsigned bits) {
  if (bits == 0) return "ok";
  std::string out;
  for (std::size_t i = 0; i < std::size(kStatusNames); ++i) {
    if (bits & (1u << i)) {
      if (!out.empty()) out += '|';
      out += kStatusNames[i];
    }
  }
  return out;
}

void ScanSpec::validate() const {
  if (sizes.empty()) throw Error(ErrorCode::Parameter, "scan needs at least one L");
  if (quantities.empty()) throw Error(ErrorCode::Parameter, "scan needs at least one quantity");
  if (mu.count < 1 || gamma.count < 1) {
    throw Error(ErrorCode::Parameter, "axis counts must be positive");
  }
  for (const Quantity q : quantities) {
    if (q == Quantity::FMin && !(dmu > 0.0 && dgamma > 0.0)) {
      throw Error(ErrorCode::Parameter, "F_min needs positive dmu and dgamma");
    }
  }
  if (path == StatePath::Circulant && model.boundary != Boundary::Cyclic) {
    throw Error(ErrorCode::Parameter, "the circulant path needs a cyclic model");
  }
  for (const int L : sizes) fermigraph::validate(model.at(L, 0.0, 0.0));
}

ScanRow evaluate_point(const ScanSpec& spec, int L, double mu, double gamma) {
  ScanRow row;
  row.L = L;
  row.mu = mu;
  row.gamma = gamma;
  row.values.assign(spec.quantities.size(), kNaN);
  const ModelParams p = spec.model.at(L, mu, gamma);

  PointState ps;
  try {
    ps = prepare_point(spec, p);
  } catch (const Error& e) {
    row.status |= status_for(e.code()) | kFailed;
    return row;
  }
  const bool ok = ps.state.well_defined;

  std::optional<double> h_cache;
  unsigned h_status = 0;
  auto h_crit = [&]() -> double {
    if (h_cache) return *h_cache;
    h_cache = kNaN;
    const bool near_trivial = ps.cyclic && is_fully_connected(p) &&
                              std::abs(mu - (1.0 - L)) <= 0.5 * axis_spacing(spec.mu);
    if (spec.exclude_trivial_line && near_trivial) {
      h_status = kTrivialLine;
      return *h_cache;
    }
    try {
      if (spec.hessian == HessianMethod::Analytic) {
        h_cache = ps.state.circulant ? hessian_circulant(p).h_crit : hessian_polar(p).h_crit;
      } else {
        FdOptions fd = spec.fd;
        fd.path = ps.state.circulant ? StatePath::Circulant : StatePath::Dense;
        h_cache = hessian_fd(p, fd).h_crit;
      }
    } catch (const Error& e) {
      h_status = status_for(e.code());
    }
    return *h_cache;
  };

  for (std::size_t k = 0; k < spec.quantities.size(); ++k) {
    double& out = row.values[k];
    try {
      switch (spec.quantities[k]) {
        case Quantity::DetZ:
          out = ps.state.parity;
          if (ps.state.parity == 0) row.status |= kDegenerate;
          break;
        case Quantity::Parity:
          if (ok) {
            out = ps.state.parity;
          } else {
            row.status |= kDegenerate;
          }
          break;
        case Quantity::Gap:
          out = ps.gap;
          break;
        case Quantity::E0:
          out = ps.e0;
          break;
        case Quantity::N:
        case Quantity::Si:
          if (!ps.cyclic) {
            row.status |= kCyclicOnly;
          } else if (!ok) {
            row.status |= kDegenerate;
          } else {
            const SingleSiteRecord r = record_from_tii(ps.tii);
            out = spec.quantities[k] == Quantity::N ? r.n : r.si;
          }
          break;
        case Quantity::FMin: {
          if (!ok) {
            row.status |= kDegenerate;
            break;
          }
          const StatePath path = ps.state.circulant ? StatePath::Circulant : StatePath::Dense;
          const StateAt a = prepare_state(spec.model.at(L, mu + spec.dmu, gamma), path);
          const StateAt b = prepare_state(spec.model.at(L, mu, gamma + spec.dgamma), path);
          if (!a.well_defined || !b.well_defined) {
            row.status |= kDegenerate;
            break;
          }
          const FidelityValue fa = fidelity_between(ps.state, a);
          const FidelityValue fb = fidelity_between(ps.state, b);
          if (fa.parity_mismatch || fb.parity_mismatch) row.status |= kParityChange;
          out = std::min(fa.F, fb.F);
          break;
        }
        case Quantity::HCrit:
          out = h_crit();
          row.status |= h_status;
          break;
        case Quantity::Log10H:
          out = std::log10(std::abs(h_crit()));
          row.status |= h_status;
          break;
      }
    } catch (const Error& e) {
      out = kNaN;
      row.status |= status_for(e.code());
    }
  }
  return row;
}

namespace {

struct GridPoint {
  int L;
  double mu;
  double gamma;
};

std::vector<GridPoint> grid_points(const ScanSpec& spec) {
  std::vector<GridPoint> pts;
  const auto mus = spec.mu.values();
  const auto gammas = spec.gamma.values();
  pts.reserve(spec.sizes.size() * mus.size() * gammas.size());
  for (const int L : spec.sizes) {
    for (const double g : gammas) {
      for (const double m : mus) pts.push_back({L, m, g});
    }
  }
  return pts;
}

}  // namespace

std::vector<ScanRow> run_scan(const ScanSpec& spec, int threads) {
  spec.validate();
  const std::vector<GridPoint> pts = grid_points(spec);
  std::vector<ScanRow> rows(pts.size());
  const auto n = static_cast<long>(pts.size());
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (long i = 0; i < n; ++i) {
    const GridPoint& g = pts[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = evaluate_point(spec, g.L, g.mu, g.gamma);
  }
  return rows;
}

std::vector<ScanRow> run_scan_serial(const ScanSpec& spec) {
  spec.validate();
  std::vector<ScanRow> rows;
  for (const GridPoint& g : grid_points(spec)) {
    rows.push_back(evaluate_point(spec, g.L, g.mu, g.gamma));
  }
  return rows;
}

Table scan_table(const ScanSpec& spec, const std::vector<ScanRow>& rows) {
  Table t;
  t.columns = {"L", "mu", "gamma"};
  for (const Quantity q : spec.quantities) t.columns.emplace_back(quantity_name(q));
  for (const ScanRow& r : rows) {
    std::vector<double> v{static_cast<double>(r.L), r.mu, r.gamma};
    v.insert(v.end(), r.values.begin(), r.values.end());
    t.add_row(std::move(v), status_string(r.status));
  }
  auto axis_text = [](const Axis& a) {
    return format_number(a.from) + ":" + format_number(a.to) + ":" + std::to_string(a.count);
  };
  t.metadata["mu"] = axis_text(spec.mu);
  t.metadata["gamma"] = axis_text(spec.gamma);
  t.metadata["dmu"] = format_number(spec.dmu);
  t.metadata["dgamma"] = format_number(spec.dgamma);
  t.metadata["boundary"] = spec.model.boundary == Boundary::Cyclic ? "cyclic" : "free";
  t.metadata["range"] = spec.model.range ? std::to_string(*spec.model.range) : "full";
  t.metadata["sign"] = spec.model.sign == SignConvention::Positive ? "s4" : "s3";
  t.metadata["hessian"] = spec.hessian == HessianMethod::Analytic ? "analytic" : "fd";
  t.metadata["seed"] = std::to_string(spec.seed);
  return t;
}

std::vector<std::pair<int, std::vector<std::array<double, 2>>>> collapse_table(
    const Table& t) {
  const std::size_t cl = t.column_index("L");
  const std::size_t cm = t.column_index("mu");
  const std::size_t ch = t.column_index("h_crit");
  std::vector<std::pair<int, std::vector<std::array<double, 2>>>> out;
  for (const auto& row : t.rows) {
    const int L = static_cast<int>(row[cl]);
    if (!std::isfinite(row[ch])) continue;
    if (out.empty() || out.back().first != L) out.emplace_back(L, std::vector<std::array<double, 2>>{});
    const double l = L;
    out.back().second.push_back({(row[cm] - 1.0) * l, row[ch] / (l * l)});
  }
  return out;
}

ScanSpec preset_fidelity_map() {
  ScanSpec s;
  s.model = ModelTemplate{Boundary::Cyclic, std::nullopt, SignConvention::Positive};
  s.sizes = {1001};
  s.mu = Axis{-1.0, 3.0, 201};
  s.gamma = Axis{-2.0, 2.0, 201};
  s.dmu = 0.1;
  s.dgamma = 0.1;
  s.quantities = {Quantity::FMin};
  return s;
}

ScanSpec preset_h_map() {
  ScanSpec s = preset_fidelity_map();
  s.quantities = {Quantity::Log10H};
  return s;
}

PeakOptions preset_scaling() {
  PeakOptions o;
  for (int L = 101; L <= 1001; L += 100) o.sizes.push_back(L);
  o.gamma = 1.5;
  o.lo = -20.0;
  o.hi = 20.0;
  o.scale_window = true;
  o.grid_points = 201;
  return o;
}

}  // namespace fermigraph
