#pragma once

#include "fermigraph/solver.hpp"

namespace fermigraph {

/// One-site reduced state of a translation-invariant ground state.
struct SingleSiteRecord {
  double tii = 1.0;  // T_ii in [-1, 1]
  double n = 0.0;    // (1 - T_ii) / 2
  double si = 0.0;   // binary entropy of n, base 2
};

/// -n log2 n - (1-n) log2 (1-n), with 0 log 0 = 0.
double binary_entropy(double n);

SingleSiteRecord record_from_tii(double tii);

/// T_ii = (1/L) sum_j Re zeta_j / |zeta_j| for a circulant Z.
/// Throws DegeneratePoint when some |zeta_j| is below the rank threshold.
SingleSiteRecord single_site(const SpectralList& spectrum);

/// Large-L limit of T_ii on the fully-connected ring (odd L).
/// Throws SingularPoint at (1, 0).
double tii_tdl(double mu, double gamma);

/// Finite-difference derivatives of the large-L entropy, with the
/// divergence shapes they are compared against. The shapes use natural
/// logarithms; `nat_to_bits` converts a natural-log entropy to bits.
struct EntropyDerivatives {
  double dsi_dmu = 0.0;
  double d2si_dmu2 = 0.0;
  double dsi_dgamma = 0.0;
  double dtii_dgamma = 0.0;
  double mu_law = 0.0;     // -ln^2 |mu - 1|
  double gamma_law = 0.0;  // -sign(gamma) ln(|gamma| / (pi |mu - 1|)) / |mu - 1|
  double nat_to_bits = 0.0;
};

/// Throws SingularPoint when a stencil point lands on (1, 0).
EntropyDerivatives entropy_derivative_diag(double mu, double gamma, double step);

}  // namespace fermigraph
