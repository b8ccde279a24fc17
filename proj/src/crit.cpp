#include "fermigraph/crit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "fermigraph/error.hpp"

namespace fermigraph {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

ModelParams shifted(const ModelParams& p, double dmu, double dgamma) {
  ModelParams q = p;
  q.mu += dmu;
  q.gamma += dgamma;
  return q;
}

ModelParams fully_connected_ring(int L, double mu, double gamma) {
  ModelTemplate t;
  t.boundary = Boundary::Cyclic;
  t.sign = SignConvention::Positive;
  return t.at(L, mu, gamma);
}

struct RawHessian {
  double mm = 0.0;
  double gg = 0.0;
  double mg = 0.0;
};

RawHessian fd_once(const ModelParams& p, const StateAt& center, double d,
                   StatePath path) {
  auto deficit = [&](double a, double b) {
    const StateAt s = prepare_state(shifted(p, a, b), path);
    if (!s.well_defined) {
      throw Error(ErrorCode::DegenerateEndpoint,
                  "finite-difference stencil touches a point with det Z = 0");
    }
    if (s.parity != center.parity) {
      throw Error(ErrorCode::StencilCrossesTransition,
                  "finite-difference stencil crosses a first-order line");
    }
    return fidelity_between(center, s).deficit();
  };
  RawHessian h;
  // F(0) = 1 exactly, so the deficits F - 1 carry the whole stencil.
  h.mm = (deficit(d, 0.0) + deficit(-d, 0.0)) / (d * d);
  h.gg = (deficit(0.0, d) + deficit(0.0, -d)) / (d * d);
  h.mg = mixed_second_difference(deficit(d, d), deficit(-d, -d), deficit(d, -d),
                                 deficit(-d, d), d);
  return h;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol, double& fmin) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    fmin = fc;
    return c;
  }
  fmin = fd;
  return d;
}

double safe_h(const ModelParams& p, HessianMethod method) {
  try {
    return hessian(p, method).h_crit;
  } catch (const Error&) {
    return kNaN;
  }
}

std::vector<double> evaluate_h(const ModelTemplate& model, int L, double gamma,
                               const std::vector<double>& mus, HessianMethod method,
                               bool parallel) {
  std::vector<double> h(mus.size(), kNaN);
  const auto n = static_cast<long>(mus.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    h[static_cast<std::size_t>(i)] =
        safe_h(model.at(L, mus[static_cast<std::size_t>(i)], gamma), method);
  }
  return h;
}

}  // namespace

HessianAtZero hessian_from_entries(double d2_mumu, double d2_gammagamma,
                                   double d2_mugamma) {
  HessianAtZero h;
  h.d2_mumu = d2_mumu;
  h.d2_gammagamma = d2_gammagamma;
  h.d2_mugamma = d2_mugamma;
  const double tr = d2_mumu + d2_gammagamma;
  const double disc = std::hypot(d2_mumu - d2_gammagamma, 2.0 * d2_mugamma);
  h.h_crit = 0.5 * (tr - disc);
  h.h_other = 0.5 * (tr + disc);

  std::array<double, 2> v{1.0, 0.0};
  if (d2_mugamma != 0.0) {
    const std::array<double, 2> a{d2_mugamma, h.h_other - d2_mumu};
    const std::array<double, 2> b{h.h_other - d2_gammagamma, d2_mugamma};
    v = std::hypot(a[0], a[1]) >= std::hypot(b[0], b[1]) ? a : b;
  } else if (d2_gammagamma > d2_mumu) {
    v = {0.0, 1.0};
  }
  const double norm = std::hypot(v[0], v[1]);
  v[0] /= norm;
  v[1] /= norm;
  if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) {
    v[0] = -v[0];
    v[1] = -v[1];
  }
  h.zero_eigvec = v;
  return h;
}

double mixed_second_difference(double pp, double mm, double pm, double mp,
                               double delta) {
  return ((pp + mm) - (pm + mp)) / (4.0 * delta * delta);
}

StateAt prepare_state(const ModelParams& p, StatePath path) {
  StateAt s;
  s.params = p;
  const bool circulant = path == StatePath::Circulant ||
                         (path == StatePath::Auto && p.boundary == Boundary::Cyclic);
  if (circulant) {
    if (p.boundary != Boundary::Cyclic) {
      throw Error(ErrorCode::Parameter, "the circulant path needs a cyclic model");
    }
    validate(p);
    s.circulant = true;
    s.spectrum = zeta_variable_range(p);
    const CirculantSummary sum = summarize_circulant(p, s.spectrum);
    s.parity = sum.det_sign;
    s.well_defined = sum.well_defined;
  } else {
    s.polar = polar_T(build_model(p));
    s.parity = s.polar.parity;
    s.well_defined = s.polar.well_defined;
  }
  return s;
}

FidelityValue fidelity_between(const StateAt& a, const StateAt& b) {
  if (!a.well_defined || !b.well_defined) {
    throw Error(ErrorCode::DegenerateEndpoint,
                "fidelity at a level crossing (det Z = 0) is ill-posed");
  }
  if (a.circulant != b.circulant) {
    throw Error(ErrorCode::Parameter, "fidelity between states on different paths");
  }
  if (a.circulant) return fidelity_circulant(a.spectrum, b.spectrum);
  return fidelity(a.polar, b.polar);
}

double default_fd_step(double mu, double gamma) {
  return 1e-4 * std::max(1.0, std::abs(mu) + std::abs(gamma));
}

HessianAtZero hessian_fd(const ModelParams& p, const FdOptions& opt) {
  const double d = opt.step > 0.0 ? opt.step : default_fd_step(p.mu, p.gamma);
  const StateAt center = prepare_state(p, opt.path);
  if (!center.well_defined) {
    throw Error(ErrorCode::DegenerateEndpoint, "det Z = 0 at the expansion point");
  }
  RawHessian h = fd_once(p, center, d, opt.path);
  if (opt.richardson) {
    const RawHessian fine = fd_once(p, center, 0.5 * d, opt.path);
    h.mm = (4.0 * fine.mm - h.mm) / 3.0;
    h.gg = (4.0 * fine.gg - h.gg) / 3.0;
    h.mg = (4.0 * fine.mg - h.mg) / 3.0;
  }
  return hessian_from_entries(h.mm, h.gg, h.mg);
}

HessianAtZero hessian_polar(const ModelParams& p) {
  const CouplingModel model = build_model(p);
  const CanonicalSpectrum spec = canonical_decompose(model);
  const int L = p.L;
  if (spec.lambda.minCoeff() <= singular_threshold(L, spec.lambda.maxCoeff())) {
    throw Error(ErrorCode::DegeneratePoint, "det Z = 0: the polar factor is undefined");
  }
  // phi = U^T and psi = V^T for Z = U diag(lambda) V^T.
  auto rotation_generator = [&](const Matrix& dz) {
    const Matrix f = spec.phi * dz * spec.psi.transpose();
    Matrix x(L, L);
    for (int j = 0; j < L; ++j) {
      for (int i = 0; i < L; ++i) {
        x(i, j) = (f(i, j) - f(j, i)) / (spec.lambda(i) + spec.lambda(j));
      }
    }
    return x;
  };
  const Matrix x_mu = rotation_generator(dz_dmu(p));
  const Matrix x_gamma = rotation_generator(dz_dgamma(p));
  // H_ab = (1/8) Tr(X_a X_b) = -(1/8) sum_ij X_a(i,j) X_b(i,j) for antisymmetric X.
  const double mm = -0.125 * x_mu.squaredNorm();
  const double gg = -0.125 * x_gamma.squaredNorm();
  const double mg = -0.125 * x_mu.cwiseProduct(x_gamma).sum();
  return hessian_from_entries(mm, gg, mg);
}

HessianAtZero hessian_circulant(const ModelParams& p) {
  if (p.boundary != Boundary::Cyclic) {
    throw Error(ErrorCode::Parameter, "hessian_circulant needs a cyclic model");
  }
  validate(p);
  const SpectralList s = zeta_variable_range(p);
  if (!summarize_circulant(p, s).well_defined) {
    throw Error(ErrorCode::DegeneratePoint, "det Z = 0: the polar factor is undefined");
  }
  const SpectralDerivatives d = zeta_derivatives(p);
  double mm = 0.0;
  double gg = 0.0;
  double mg = 0.0;
  const int pairs = (p.L - 1) / 2;
  for (int j = 1; j <= pairs; ++j) {
    const double tm = (d.d_mu(j) / s.zeta(j)).imag();
    const double tg = (d.d_gamma(j) / s.zeta(j)).imag();
    mm += tm * tm;
    gg += tg * tg;
    mg += tm * tg;
  }
  return hessian_from_entries(-0.25 * mm, -0.25 * gg, -0.25 * mg);
}

HessianAtZero hessian_analytic(const ModelParams& p) {
  return p.boundary == Boundary::Cyclic ? hessian_circulant(p) : hessian_polar(p);
}

HessianAtZero hessian(const ModelParams& p, HessianMethod method, const FdOptions& opt) {
  return method == HessianMethod::Analytic ? hessian_analytic(p) : hessian_fd(p, opt);
}

CyclicAnalytic h_analytic_cyclic(int L, double mu, double gamma) {
  if (mu == 1.0 && gamma == 0.0) {
    throw Error(ErrorCode::SingularPoint, "h_crit is not defined at (mu, gamma) = (1, 0)");
  }
  const ModelParams p = fully_connected_ring(L, mu, gamma);
  validate(p);
  const SpectralList z = zeta_fully_connected(p);
  // zeta_j is affine in gamma, so the unit-gamma imaginary parts are the slopes.
  const SpectralList unit = zeta_fully_connected(fully_connected_ring(L, mu, 1.0));
  const int M = (L - 1) / 2;
  double S = 0.0;
  for (int j = 1; j <= M; ++j) {
    const double mod2 = std::norm(z.zeta(j));
    if (mod2 == 0.0) {
      throw Error(ErrorCode::SingularPoint, "a paired eigenvalue of Z vanishes");
    }
    const double c = unit.zeta(j).imag();
    S += c * c / (mod2 * mod2);
  }
  const double m = mu - 1.0;
  CyclicAnalytic out;
  out.S = S;
  out.h_crit = -0.25 * (m * m + gamma * gamma) * S;
  out.hessian = hessian_from_entries(-0.25 * S * gamma * gamma, -0.25 * S * m * m,
                                     0.25 * S * gamma * m);
  out.hessian.h_crit = out.h_crit;
  return out;
}

AsymptoticRegime classify_regime(double mu, double gamma) {
  if (mu == 1.0 && gamma == 0.0) {
    throw Error(ErrorCode::SingularPoint, "no asymptotic form at (mu, gamma) = (1, 0)");
  }
  if (mu == 1.0) return AsymptoticRegime::CriticalMu;
  if (gamma == 0.0) return AsymptoticRegime::CriticalGamma;
  return AsymptoticRegime::Generic;
}

double h_asymptotic(int L, double mu, double gamma) {
  const double l = L;
  const double m = std::abs(mu - 1.0);
  const double g = std::abs(gamma);
  switch (classify_regime(mu, gamma)) {
    case AsymptoticRegime::CriticalMu:
      return -(1.0 / 24.0) * (l / g) * (l / g);
    case AsymptoticRegime::CriticalGamma:
      return -(1.0 / 8.0) * (l / m) * (l / m);
    case AsymptoticRegime::Generic:
      break;
  }
  return -(l / 16.0) * (m * m + g * g) / (m * g * (m + g) * (m + g));
}

int det_z_sign(const ModelParams& p) {
  if (p.boundary == Boundary::Cyclic) {
    validate(p);
    return summarize_circulant(p, zeta_variable_range(p)).det_sign;
  }
  return det_sign(build_model(p).Z);
}

std::vector<BoundaryPoint> first_order_boundary(const ModelTemplate& model, int L,
                                                const Sweep& sweep) {
  if (sweep.count < 2) {
    throw Error(ErrorCode::Parameter, "a boundary sweep needs at least two points");
  }
  auto point = [&](double x) {
    return sweep.axis == SweepAxis::Mu ? model.at(L, x, sweep.fixed)
                                       : model.at(L, sweep.fixed, x);
  };
  auto sign_at = [&](double x) { return det_z_sign(point(x)); };
  auto record = [&](double x, int below, int above, bool exact) {
    const ModelParams p = point(x);
    return BoundaryPoint{p.mu, p.gamma, below, above, exact};
  };

  const double lo = std::min(sweep.from, sweep.to);
  const double hi = std::max(sweep.from, sweep.to);
  const int n = sweep.count;
  std::vector<double> xs(n);
  std::vector<int> signs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
    signs[i] = sign_at(xs[i]);
  }

  std::vector<BoundaryPoint> out;
  for (int i = 0; i < n; ++i) {
    if (signs[i] == 0) {
      const int below = i > 0 ? signs[i - 1] : 0;
      const int above = i + 1 < n ? signs[i + 1] : 0;
      out.push_back(record(xs[i], below, above, true));
      continue;
    }
    if (i + 1 >= n || signs[i + 1] == 0 || signs[i] == signs[i + 1]) continue;
    double a = xs[i];
    double b = xs[i + 1];
    bool exact = false;
    while (b - a > kBoundaryTolerance) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const int s = sign_at(mid);
      if (s == 0) {
        a = b = mid;
        exact = true;
        break;
      }
      (s == signs[i] ? a : b) = mid;
    }
    out.push_back(record(0.5 * (a + b), signs[i], signs[i + 1], exact));
  }
  return out;
}

ScalingSeries peak_scan(const ModelTemplate& model, const PeakOptions& opt) {
  if (opt.grid_points < 3) {
    throw Error(ErrorCode::Parameter, "peak_scan needs at least three grid points");
  }
  if (!(opt.hi > opt.lo)) {
    throw Error(ErrorCode::Parameter, "peak_scan window is empty");
  }
  for (std::size_t k = 1; k < opt.sizes.size(); ++k) {
    if (opt.sizes[k] <= opt.sizes[k - 1]) {
      throw Error(ErrorCode::Parameter, "peak_scan sizes must be strictly increasing");
    }
  }

  ScalingSeries series;
  for (const int L : opt.sizes) {
    const double lo = opt.scale_window ? 1.0 + opt.lo / L : opt.lo;
    const double hi = opt.scale_window ? 1.0 + opt.hi / L : opt.hi;
    const int n = opt.grid_points;
    std::vector<double> mus(n);
    for (int i = 0; i < n; ++i) mus[i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
    const std::vector<double> h = evaluate_h(model, L, opt.gamma, mus, opt.method,
                                             opt.parallel);

    std::vector<std::array<double, 2>> curve;
    std::vector<double> flagged;
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(h[i])) {
        flagged.push_back(mus[i]);
        continue;
      }
      curve.push_back({(mus[i] - 1.0) * L, h[i] / (static_cast<double>(L) * L)});
      if (best < 0 || h[i] < h[best]) best = i;
    }
    if (best <= 0 || best >= n - 1) {
      throw Error(ErrorCode::WindowError,
                  "no interior minimum of h_crit in the window for L=" + std::to_string(L));
    }

    auto f = [&](double mu) {
      const double v = safe_h(model.at(L, mu, opt.gamma), opt.method);
      return std::isfinite(v) ? v : kInf;
    };
    double fmin = kInf;
    double mu_min = golden_minimize(f, mus[best - 1], mus[best + 1], opt.tolerance, fmin);
    if (!(fmin < h[best])) {
      mu_min = mus[best];
      fmin = h[best];
    }

    series.sizes.push_back(L);
    series.peak_positions.push_back(mu_min);
    series.peak_depths.push_back(fmin);
    series.collapsed.push_back(std::move(curve));
    series.flagged.push_back(std::move(flagged));
  }
  return series;
}

std::vector<double> collapsed_curve(const ModelTemplate& model, int L, double gamma,
                                    std::span<const double> xs, HessianMethod method) {
  std::vector<double> mus(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) mus[i] = 1.0 + xs[i] / L;
  std::vector<double> h = evaluate_h(model, L, gamma, mus, method, true);
  const double scale = static_cast<double>(L) * L;
  for (double& v : h) v /= scale;
  return h;
}

double energy_density(const ModelParams& p) {
  if (p.boundary == Boundary::Cyclic) {
    validate(p);
    return summarize_circulant(p, zeta_variable_range(p)).e0 / p.L;
  }
  const CouplingModel model = build_model(p);
  return ground_energy_and_gap(model, canonical_decompose(model)).e0 / p.L;
}

EnergyDerivatives energy_derivatives(const ModelParams& p, double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::Parameter, "energy_derivatives needs a positive step");
  }
  const int center_sign = det_z_sign(p);
  auto e = [&](double a, double b) {
    const ModelParams q = shifted(p, a, b);
    if (center_sign == 0 || det_z_sign(q) != center_sign) {
      throw Error(ErrorCode::StencilCrossesTransition,
                  "energy stencil crosses a first-order line");
    }
    return energy_density(q);
  };
  const double h = step;
  const double e0 = e(0.0, 0.0);
  const double ep0 = e(h, 0.0);
  const double em0 = e(-h, 0.0);
  const double e0p = e(0.0, h);
  const double e0m = e(0.0, -h);
  EnergyDerivatives d;
  d.d_mu = (ep0 - em0) / (2.0 * h);
  d.d_gamma = (e0p - e0m) / (2.0 * h);
  d.d2_mumu = (ep0 + em0 - 2.0 * e0) / (h * h);
  d.d2_gammagamma = (e0p + e0m - 2.0 * e0) / (h * h);
  d.d2_mugamma = mixed_second_difference(e(h, h), e(-h, -h), e(h, -h), e(-h, h), h);
  return d;
}

TPrimeZero t_prime_zero(int L, double mu) {
  if (L < 2) throw Error(ErrorCode::Parameter, "t_prime_zero needs L >= 2");
  if (!(mu > 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "the closed form for T'(0) holds only for mu > 1");
  }
  const double m = mu - 1.0;
  const double denom = 0.5 * L + m;
  TPrimeZero out;
  out.t_prime.resize(L, L);
  for (int k = 0; k < L; ++k) {
    for (int j = 0; j < L; ++j) {
      const int d = k - j;
      const double sgn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
      out.t_prime(j, k) = (d / denom - sgn) / m;
    }
  }
  out.trace_matrix = (out.t_prime * out.t_prime).trace();
  const double l = L;
  out.trace_closed = -(1.0 / (m * m)) * (l * (l - 1.0) / (3.0 * (l + 2.0 * m) * (l + 2.0 * m))) *
                     (l * l + 2.0 * l * (2.0 * mu - 3.0) + 4.0 * m * (3.0 * mu - 5.0));
  out.h_crit = out.trace_closed / 8.0;
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::Parameter, "fit_line needs two equal-length series of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::Parameter, "fit_line needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

InverseLawFit fit_inverse_law(std::span<const int> sizes, std::span<const double> y) {
  if (sizes.size() != y.size() || sizes.empty()) {
    throw Error(ErrorCode::Parameter, "fit_inverse_law needs equal-length, nonempty series");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double inv = 1.0 / sizes[i];
    num += y[i] * inv;
    den += inv * inv;
  }
  InverseLawFit f;
  f.c = num / den;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double model = f.c / sizes[i];
    f.max_relative_residual =
        std::max(f.max_relative_residual, std::abs(y[i] - model) / std::abs(model));
  }
  return f;
}

}  // namespace fermigraph
