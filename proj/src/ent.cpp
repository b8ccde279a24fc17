#include "fermigraph/ent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fermigraph/error.hpp"

namespace fermigraph {
namespace {

double entropy_tdl(double mu, double gamma) {
  return record_from_tii(tii_tdl(mu, gamma)).si;
}

}  // namespace

double binary_entropy(double n) {
  if (!(n > 0.0) || !(n < 1.0)) return 0.0;
  return -n * std::log2(n) - (1.0 - n) * std::log2(1.0 - n);
}

SingleSiteRecord record_from_tii(double tii) {
  SingleSiteRecord r;
  r.tii = tii;
  r.n = std::clamp(0.5 * (1.0 - tii), 0.0, 1.0);
  r.si = binary_entropy(r.n);
  return r;
}

SingleSiteRecord single_site(const SpectralList& spectrum) {
  const int L = spectrum.size();
  const double eps = singular_threshold(L, spectrum.moduli.maxCoeff());
  if (spectrum.moduli.minCoeff() <= eps) {
    throw Error(ErrorCode::DegeneratePoint, "T_ii is undefined where det Z = 0");
  }
  double sum = 0.0;
  for (int j = 0; j < L; ++j) sum += spectrum.zeta(j).real() / spectrum.moduli(j);
  return record_from_tii(std::clamp(sum / L, -1.0, 1.0));
}

double tii_tdl(double mu, double gamma) {
  const double m = mu - 1.0;
  const double am = std::abs(m);
  const double g = std::abs(gamma);
  if (m == 0.0 && g == 0.0) {
    throw Error(ErrorCode::SingularPoint, "T_ii has no limit at (mu, gamma) = (1, 0)");
  }
  if (m == 0.0) return 0.0;
  const double two_over_pi = 2.0 / std::numbers::pi;
  if (g == am) return two_over_pi * (m > 0.0 ? 1.0 : -1.0);
  if (g > am) {
    const double q = std::sqrt((g - am) * (g + am));
    // ln((q + g) / |m|) written as log1p to stay accurate near the seam.
    return two_over_pi * (m / q) * std::log1p((q + (g - am)) / am);
  }
  const double q = std::sqrt((am - g) * (am + g));
  return two_over_pi * (m / q) * std::asin(q / am);
}

EntropyDerivatives entropy_derivative_diag(double mu, double gamma, double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::Parameter, "entropy_derivative_diag needs a positive step");
  }
  const double h = step;
  const double s0 = entropy_tdl(mu, gamma);
  const double sp = entropy_tdl(mu + h, gamma);
  const double sm = entropy_tdl(mu - h, gamma);
  EntropyDerivatives d;
  d.dsi_dmu = (sp - sm) / (2.0 * h);
  d.d2si_dmu2 = (sp + sm - 2.0 * s0) / (h * h);
  d.dsi_dgamma = (entropy_tdl(mu, gamma + h) - entropy_tdl(mu, gamma - h)) / (2.0 * h);
  d.dtii_dgamma = (tii_tdl(mu, gamma + h) - tii_tdl(mu, gamma - h)) / (2.0 * h);
  const double am = std::abs(mu - 1.0);
  const double lm = std::log(am);
  d.mu_law = -lm * lm;
  const double sg = gamma > 0.0 ? 1.0 : (gamma < 0.0 ? -1.0 : 0.0);
  d.gamma_law = -sg * std::log(std::abs(gamma) / (std::numbers::pi * am)) / am;
  d.nat_to_bits = 1.0 / std::numbers::ln2;
  return d;
}

}  // namespace fermigraph
