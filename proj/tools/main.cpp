#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "fermigraph/crit.hpp"
#include "fermigraph/ent.hpp"
#include "fermigraph/error.hpp"
#include "fermigraph/gsfid.hpp"
#include "fermigraph/oracle.hpp"
#include "fermigraph/scan.hpp"
#include "fermigraph/solver.hpp"
#include "json_config.hpp"

namespace fg = fermigraph;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
  std::vector<int> sizes{101};
  std::string range = "full";
  std::string boundary = "cyclic";
  std::string sign = "s4";
  std::string mu = "1.5";
  std::string gamma = "1";
  double dmu = 0.1;
  double dgamma = 0.1;
  double fd_step = 0.0;
  std::string out;
  std::string format = "csv";
  int threads = 0;
  std::uint64_t seed = 0;
  std::string hessian = "analytic";
};

fg::ModelTemplate model_template(const Common& c) {
  fg::ModelTemplate t;
  t.boundary = c.boundary == "free" ? fg::Boundary::FreeEnds : fg::Boundary::Cyclic;
  t.sign = c.sign == "s3" ? fg::SignConvention::Negative : fg::SignConvention::Positive;
  if (c.range != "full") {
    try {
      std::size_t used = 0;
      t.range = std::stoi(c.range, &used);
      if (used != c.range.size()) throw std::invalid_argument(c.range);
    } catch (const std::exception&) {
      throw fg::Error(fg::ErrorCode::Parameter, "--range must be an integer or 'full'");
    }
  }
  return t;
}

fg::HessianMethod hessian_method(const Common& c) {
  return c.hessian == "fd" ? fg::HessianMethod::FiniteDifference : fg::HessianMethod::Analytic;
}

void write(const Common& c, const fg::Table& t) {
  const fg::Format f = fg::parse_format(c.format);
  if (c.out.empty()) {
    fg::emit(t, f, std::cout);
  } else {
    fg::emit(t, f, c.out);
    // Gnuplot carries metadata as comments; the other formats get a sidecar.
    if (f != fg::Format::Gnuplot && !t.metadata.empty()) {
      fg::emit_metadata(t, c.out + ".meta.json");
    }
  }
}

double single_value(const std::string& text, const char* flag) {
  const fg::Axis a = fg::parse_axis(text);
  if (a.count != 1) {
    throw fg::Error(fg::ErrorCode::Parameter, std::string(flag) + " must be a single value here");
  }
  return a.from;
}

int cmd_spectrum(const Common& c, bool dense) {
  const fg::ModelTemplate mt = model_template(c);
  fg::Table t;
  t.columns = {"L", "mu", "gamma", "index", "lambda", "zeta_re", "zeta_im"};
  for (const int L : c.sizes) {
    for (const double g : fg::parse_axis(c.gamma).values()) {
      for (const double m : fg::parse_axis(c.mu).values()) {
        const fg::ModelParams p = mt.at(L, m, g);
        if (p.boundary == fg::Boundary::Cyclic && !dense) {
          fg::validate(p);
          const fg::SpectralList s = fg::zeta_variable_range(p);
          for (int j = 0; j < s.size(); ++j) {
            t.add_row({double(L), m, g, double(j + 1), s.moduli(j), s.zeta(j).real(),
                       s.zeta(j).imag()},
                      "ok");
          }
        } else {
          const fg::CanonicalSpectrum cs = fg::canonical_decompose(fg::build_model(p));
          for (int j = 0; j < L; ++j) {
            t.add_row({double(L), m, g, double(j + 1), cs.lambda(j), kNaN, kNaN}, "ok");
          }
        }
      }
    }
  }
  write(c, t);
  return 0;
}

struct MapOptions {
  std::vector<std::string> quantities{"F_min"};
  std::string preset;
  bool dense = false;
  bool richardson = false;
  bool include_trivial_line = false;
};

int cmd_map(const Common& c, const MapOptions& o) {
  fg::ScanSpec spec;
  if (o.preset == "fidelity") {
    spec = fg::preset_fidelity_map();
  } else if (o.preset == "hcrit") {
    spec = fg::preset_h_map();
  } else if (!o.preset.empty()) {
    throw fg::Error(fg::ErrorCode::Parameter, "unknown preset '" + o.preset + "'");
  } else {
    spec.model = model_template(c);
    spec.sizes = c.sizes;
    spec.mu = fg::parse_axis(c.mu);
    spec.gamma = fg::parse_axis(c.gamma);
    spec.dmu = c.dmu;
    spec.dgamma = c.dgamma;
    spec.quantities.clear();
    for (const auto& q : o.quantities) spec.quantities.push_back(fg::parse_quantity(q));
  }
  spec.hessian = hessian_method(c);
  spec.fd.step = c.fd_step;
  spec.fd.richardson = o.richardson;
  spec.path = o.dense ? fg::StatePath::Dense : fg::StatePath::Auto;
  spec.exclude_trivial_line = !o.include_trivial_line;
  spec.seed = c.seed;
  const auto rows = fg::run_scan(spec, c.threads);
  fg::Table t = fg::scan_table(spec, rows);
  if (!o.preset.empty()) t.metadata["preset"] = o.preset;
  write(c, t);
  return 0;
}

int cmd_boundary(const Common& c, const std::string& sweep_axis, int count) {
  const fg::ModelTemplate mt = model_template(c);
  const bool along_mu = sweep_axis != "gamma";
  const fg::Axis swept = fg::parse_axis(along_mu ? c.mu : c.gamma);
  const fg::Axis fixed = fg::parse_axis(along_mu ? c.gamma : c.mu);
  fg::Table t;
  t.columns = {"L", "mu", "gamma", "parity_below", "parity_above"};
  t.block_column = along_mu ? "gamma" : "mu";
  for (const int L : c.sizes) {
    for (const double f : fixed.values()) {
      fg::Sweep s;
      s.axis = along_mu ? fg::SweepAxis::Mu : fg::SweepAxis::Gamma;
      s.fixed = f;
      s.from = swept.from;
      s.to = swept.to;
      s.count = count > 0 ? count : std::max(swept.count, 2);
      for (const auto& b : fg::first_order_boundary(mt, L, s)) {
        t.add_row({double(L), b.mu, b.gamma, double(b.parity_below), double(b.parity_above)},
                  b.exact_zero ? "exact" : "ok");
      }
    }
  }
  write(c, t);
  return 0;
}

struct ScalingOptions {
  std::string window = "-20:20";
  bool scale_window = true;
  int grid = 201;
  double tolerance = 1e-8;
  bool preset = false;
  std::string x = "-20:20:81";
};

fg::PeakOptions peak_options(const Common& c, const ScalingOptions& o) {
  if (o.preset) return fg::preset_scaling();
  fg::PeakOptions p;
  p.sizes = c.sizes;
  p.gamma = single_value(c.gamma, "--gamma");
  const fg::Axis w = fg::parse_axis(o.window + ":2");
  p.lo = w.from;
  p.hi = w.to;
  p.scale_window = o.scale_window;
  p.grid_points = o.grid;
  p.tolerance = o.tolerance;
  p.method = hessian_method(c);
  return p;
}

int cmd_scaling(const Common& c, const ScalingOptions& o) {
  const fg::ModelTemplate mt = o.preset ? fg::ModelTemplate{} : model_template(c);
  const fg::PeakOptions p = peak_options(c, o);
  const fg::ScalingSeries s = fg::peak_scan(mt, p);
  fg::Table t;
  t.columns = {"L", "mu", "gamma", "h_crit"};
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < s.sizes.size(); ++k) {
    const std::string status = s.flagged[k].empty() ? "ok" : "flagged_points";
    t.add_row({double(s.sizes[k]), s.peak_positions[k], p.gamma, s.peak_depths[k]}, status);
    lx.push_back(std::log(double(s.sizes[k])));
    ly.push_back(std::log(std::abs(s.peak_depths[k])));
  }
  if (lx.size() >= 2) {
    const fg::LineFit f = fg::fit_line(lx, ly);
    t.metadata["loglog_slope"] = fg::format_number(f.slope);
    t.metadata["loglog_r2"] = fg::format_number(f.r2);
  }
  t.metadata["grid_points"] = std::to_string(p.grid_points);
  write(c, t);
  return 0;
}

int cmd_collapse(const Common& c, const ScalingOptions& o) {
  const fg::ModelTemplate mt = o.preset ? fg::ModelTemplate{} : model_template(c);
  const std::vector<int> sizes = o.preset ? fg::preset_scaling().sizes : c.sizes;
  const double gamma = o.preset ? fg::preset_scaling().gamma : single_value(c.gamma, "--gamma");
  const std::vector<double> xs = fg::parse_axis(o.x).values();
  fg::Table t;
  t.columns = {"L", "mu", "gamma", "h_crit", "x", "y"};
  t.block_column = "L";
  for (const int L : sizes) {
    const std::vector<double> y = fg::collapsed_curve(mt, L, gamma, xs, hessian_method(c));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double l = L;
      t.add_row({l, 1.0 + xs[i] / l, gamma, y[i] * l * l, xs[i], y[i]},
                std::isfinite(y[i]) ? "ok" : "failed");
    }
  }
  write(c, t);
  return 0;
}

int cmd_oracle_check(const Common& c, int samples, bool sizes_given) {
  const fg::ModelTemplate mt = model_template(c);
  std::vector<int> sizes = c.sizes;
  if (!sizes_given) sizes = {2, 3, 4, 5, 6, 7, 8};
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> mu_dist(-2.0, 3.0);
  std::uniform_real_distribution<double> gamma_dist(-2.0, 2.0);
  fg::Table t;
  t.columns = {"L", "mu", "gamma", "e0_error", "parity_match", "fidelity_error"};
  bool all_ok = true;
  for (const int L : sizes) {
    for (int k = 0; k < samples; ++k) {
      const fg::ModelParams p = mt.at(L, mu_dist(rng), gamma_dist(rng));
      const fg::ModelParams q = mt.at(L, p.mu + 0.05, p.gamma + 0.05);
      const fg::CouplingModel m = fg::build_model(p);
      const fg::CouplingModel mq = fg::build_model(q);
      const fg::CanonicalSpectrum cs = fg::canonical_decompose(m);
      const fg::PolarForm pf = fg::polar_T(cs, m);
      const fg::PolarForm pq = fg::polar_T(mq);
      const fg::OracleResult o = fg::fock_hamiltonian_gs(m);
      const fg::OracleResult oq = fg::fock_hamiltonian_gs(mq);
      if (o.degenerate || oq.degenerate || !pf.well_defined || !pq.well_defined) {
        t.add_row({double(L), p.mu, p.gamma, kNaN, kNaN, kNaN}, "degenerate");
        continue;
      }
      const double e0_err = std::abs(fg::ground_energy_and_gap(m, cs).e0 - o.e0);
      const bool parity_ok = pf.parity == o.parity;
      const double f_err =
          std::abs(fg::fidelity(pf, pq).F - fg::overlap(o.gs, oq.gs));
      const bool ok = e0_err < 1e-9 && parity_ok && f_err < 1e-9;
      all_ok = all_ok && ok;
      t.add_row({double(L), p.mu, p.gamma, e0_err, parity_ok ? 1.0 : 0.0, f_err},
                ok ? "ok" : "mismatch");
    }
  }
  t.metadata["seed"] = std::to_string(c.seed);
  write(c, t);
  return all_ok ? 0 : fg::exit_status(fg::ErrorCode::Consistency);
}

int cmd_tdl(const Common& c) {
  fg::Table t;
  t.columns = {"L", "mu", "gamma", "h_asymptotic", "h_exact", "tii_tdl", "tii_L"};
  for (const int L : c.sizes) {
    for (const double g : fg::parse_axis(c.gamma).values()) {
      for (const double m : fg::parse_axis(c.mu).values()) {
        unsigned status = 0;
        auto guarded = [&](auto&& f) {
          try {
            return static_cast<double>(f());
          } catch (const fg::Error&) {
            status |= fg::kSingular;
            return kNaN;
          }
        };
        const double ha = guarded([&] { return fg::h_asymptotic(L, m, g); });
        const double he = guarded([&] { return fg::h_analytic_cyclic(L, m, g).h_crit; });
        const double tt = guarded([&] { return fg::tii_tdl(m, g); });
        const double tl = guarded([&] {
          fg::ModelTemplate ring;
          return fg::single_site(fg::zeta_variable_range(ring.at(L, m, g))).tii;
        });
        t.add_row({double(L), m, g, ha, he, tt, tl}, fg::status_string(status));
      }
    }
  }
  write(c, t);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Fidelity, criticality and entanglement of quadratic fermion graphs"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<fg::cli::JsonConfig>());
  app.set_config("--config", "", "JSON file with option values (flags override it)");

  Common c;
  app.add_option("--L", c.sizes, "Number of modes (repeat or comma-separate)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--range", c.range, "Coupling range r, or 'full'");
  app.add_option("--boundary", c.boundary, "cyclic | free")
      ->check(CLI::IsMember({"cyclic", "free"}));
  app.add_option("--sign", c.sign, "s3 (chain sign) | s4 (flipped, default)")
      ->check(CLI::IsMember({"s3", "s4"}));
  app.add_option("--mu", c.mu, "mu axis: a or a:b:n");
  app.add_option("--gamma", c.gamma, "gamma axis: a or a:b:n");
  app.add_option("--dmu", c.dmu, "mu displacement for F_min");
  app.add_option("--dgamma", c.dgamma, "gamma displacement for F_min");
  app.add_option("--fd-step", c.fd_step, "Finite-difference step (0 = automatic)");
  app.add_option("--out", c.out, "Output path (default stdout)");
  app.add_option("--format", c.format, "csv | jsonl | gnuplot")
      ->check(CLI::IsMember({"csv", "jsonl", "gnuplot"}));
  app.add_option("--threads", c.threads, "Worker threads (0 = OpenMP default)");
  app.add_option("--seed", c.seed, "Seed for randomized checks");
  app.add_option("--hessian", c.hessian, "analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}));

  auto* spectrum = app.add_subcommand("spectrum", "Single-particle spectrum");
  bool spectrum_dense = false;
  spectrum->add_flag("--dense", spectrum_dense, "Use the SVD even for cyclic models");

  auto* map = app.add_subcommand("map", "Grid of fidelity, h_crit and entanglement values");
  MapOptions mo;
  map->add_option("--quantities", mo.quantities,
                  "F_min,h_crit,log10_h,detZ,gap,E0,n,Si,parity")
      ->delimiter(',');
  map->add_option("--preset", mo.preset, "fidelity | hcrit (L=1001, 201x201 plane)");
  map->add_flag("--dense", mo.dense, "Force the dense path for cyclic models");
  map->add_flag("--richardson", mo.richardson, "Richardson-extrapolate the fd Hessian");
  map->add_flag("--include-trivial-line", mo.include_trivial_line,
                "Keep h_crit next to mu = 1 - L");

  auto* boundary = app.add_subcommand("boundary", "First-order lines (det Z = 0)");
  std::string sweep_axis = "mu";
  int sweep_count = 0;
  boundary->add_option("--sweep", sweep_axis, "Swept parameter: mu | gamma")
      ->check(CLI::IsMember({"mu", "gamma"}));
  boundary->add_option("--count", sweep_count, "Bracketing points (default: axis count)");

  ScalingOptions so;
  auto* scaling = app.add_subcommand("scaling", "Peak of h_crit versus L");
  auto* collapse = app.add_subcommand("collapse", "Collapsed curves ((mu-1)L, h/L^2)");
  for (auto* sub : {scaling, collapse}) {
    sub->add_flag("--preset", so.preset, "gamma = 1.5, L = 101..1001 on the ring");
  }
  scaling->add_option("--window", so.window, "mu window lo:hi");
  scaling->add_flag("--scale-window,!--absolute-window", so.scale_window,
                    "Interpret the window as 1 + [lo, hi] / L");
  scaling->add_option("--grid", so.grid, "Bracketing grid points")->check(CLI::Range(3, 100000));
  scaling->add_option("--tolerance", so.tolerance, "Golden-section tolerance");
  collapse->add_option("--x", so.x, "Scaled axis (mu-1)L as a:b:n");

  auto* oracle = app.add_subcommand("oracle-check", "Compare against exact diagonalization");
  int samples = 20;
  oracle->add_option("--samples", samples, "Random points per L")->check(CLI::PositiveNumber);

  auto* tdl = app.add_subcommand("tdl", "Asymptotic and thermodynamic-limit formulas");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

  if (spectrum->parsed()) return cmd_spectrum(c, spectrum_dense);
  if (map->parsed()) return cmd_map(c, mo);
  if (boundary->parsed()) return cmd_boundary(c, sweep_axis, sweep_count);
  if (scaling->parsed()) return cmd_scaling(c, so);
  if (collapse->parsed()) return cmd_collapse(c, so);
  if (oracle->parsed()) return cmd_oracle_check(c, samples, app.count("--L") > 0);
  if (tdl->parsed()) return cmd_tdl(c);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fg::Error& e) {
    std::cerr << "error[" << fg::to_string(e.code()) << "]: " << e.what() << '\n';
    return fg::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
