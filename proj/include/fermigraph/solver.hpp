#pragma once

#include <complex>
#include <span>

#include "fermigraph/model.hpp"

namespace fermigraph {

/// Real singular-value form Phi Z Psi^T = diag(lambda) with Phi, Psi
/// orthogonal. The Bogoliubov modes are eta = g c + h_pair c^dagger.
struct CanonicalSpectrum {
  Vector lambda;  // descending, nonnegative
  Matrix phi;
  Matrix psi;

  Matrix g() const { return 0.5 * (phi + psi); }
  Matrix h_pair() const { return 0.5 * (phi - psi); }
};

/// Orthogonal factor of the polar decomposition Z = |Z| T.
struct PolarForm {
  Matrix T;
  int parity = 0;  // sign(det Z); 0 only for an exactly singular Z
  double gap = 0.0;
  bool well_defined = false;
};

/// Eigenvalues of a real circulant matrix in DFT order
/// (zeta_j for kappa_j = 2 pi (j-1) / L, j = 1..L).
struct SpectralList {
  CVector zeta;
  Vector theta;   // arg(zeta_j) in (-pi, pi]
  Vector moduli;  // |zeta_j|

  int size() const { return static_cast<int>(zeta.size()); }
  /// Moduli in descending order, matching the dense path ordering.
  Vector sorted_moduli() const;
};

SpectralList make_spectral_list(CVector zeta);

/// Rank threshold L * eps * max(lambda).
double singular_threshold(int L, double max_lambda);

/// Orthogonality / reconstruction tolerance 1e-10 * max(1, |Z|_max * L).
double matrix_tolerance(const Matrix& Z);

/// Singular values in descending order. Divide and conquer, checked against
/// the second and fourth moments of the spectrum and redone with one-sided
/// Jacobi when either check fails.
Vector singular_values(const Matrix& M);

CanonicalSpectrum canonical_decompose(const Matrix& Z);
CanonicalSpectrum canonical_decompose(const CouplingModel& model);

/// Sign of det(M) from a partial-pivot LU: permutation sign times the
/// signs of the pivots. Never forms the determinant itself.
int det_sign(const Matrix& M);

/// log |det(M)| from the same LU, -inf for an exactly singular matrix.
double log_abs_det(const Matrix& M);

PolarForm polar_T(const CanonicalSpectrum& spec, const CouplingModel& model);
PolarForm polar_T(const CouplingModel& model);

struct EnergyGap {
  double e0 = 0.0;
  double gap = 0.0;
};

/// E0 = (tr A - sum lambda) / 2 and the smallest single-particle energy.
EnergyGap ground_energy_and_gap(const CouplingModel& model,
                                const CanonicalSpectrum& spec);

/// Discrete Fourier transform of a circulant first row.
SpectralList circulant_eigvals(std::span<const double> first_row);

/// Closed-form spectrum of the cyclic model at any legal range, O(L).
SpectralList zeta_variable_range(const ModelParams& p);

/// Closed-form spectrum of the fully-connected ring in the positive sign
/// convention, with the even/odd-L cotangent/tangent forms.
SpectralList zeta_fully_connected(const ModelParams& p);

/// Partial derivatives of the cyclic spectrum with respect to mu and gamma
/// (zeta is affine in both parameters).
struct SpectralDerivatives {
  CVector d_mu;
  CVector d_gamma;
};
SpectralDerivatives zeta_derivatives(const ModelParams& p);

/// Quantities a cyclic model exposes in O(L) from its spectrum.
struct CirculantSummary {
  int det_sign = 0;
  double gap = 0.0;
  double e0 = 0.0;
  bool well_defined = false;
};
CirculantSummary summarize_circulant(const ModelParams& p, const SpectralList& s);

}  // namespace fermigraph
