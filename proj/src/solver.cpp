#include "fermigraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "fermigraph/error.hpp"

namespace fermigraph {

Vector SpectralList::sorted_moduli() const {
  Vector out = moduli;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SpectralList make_spectral_list(CVector zeta) {
  SpectralList s;
  const auto n = zeta.size();
  s.theta.resize(n);
  s.moduli.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s.theta(j) = std::atan2(zeta(j).imag(), zeta(j).real());
    s.moduli(j) = std::abs(zeta(j));
  }
  s.zeta = std::move(zeta);
  return s;
}

double singular_threshold(int L, double max_lambda) {
  return L * std::numeric_limits<double>::epsilon() * max_lambda;
}

double matrix_tolerance(const Matrix& Z) {
  const double zmax = Z.size() ? Z.cwiseAbs().maxCoeff() : 0.0;
  return 1e-10 * std::max(1.0, zmax * static_cast<double>(Z.rows()));
}

Vector singular_values(const Matrix& M) {
  Eigen::BDCSVD<Matrix> svd(M);
  const Vector& s = svd.singularValues();
  // Second and fourth moments of the spectrum: |M|_F^2 and |M^T M|_F^2.
  const double n = static_cast<double>(std::max<Eigen::Index>(1, M.rows()));
  const double m2 = M.squaredNorm();
  const double m4 = (M.transpose() * M).squaredNorm();
  const double s2 = s.squaredNorm();
  const double s4 = s.array().square().square().sum();
  if (std::abs(s2 - m2) <= 1e-12 * n * m2 && std::abs(s4 - m4) <= 1e-12 * n * m4) return s;
  return Eigen::JacobiSVD<Matrix>(M).singularValues();
}

CanonicalSpectrum canonical_decompose(const Matrix& Z) {
  // One joint factorization: U and V come out of the same bidiagonalization,
  // so rows of Phi and Psi stay paired even across degenerate or zero
  // singular values (the null-space rows of Psi are the SVD's orthonormal
  // completion of ker Z).
  Eigen::BDCSVD<Matrix> svd(Z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CanonicalSpectrum out;
  out.lambda = svd.singularValues();
  out.phi = svd.matrixU().transpose();
  out.psi = svd.matrixV().transpose();
  // Divide and conquer can return a wrong factor on heavily degenerate
  // spectra (even fully-connected rings); Jacobi is slower but robust.
  const Matrix residual = out.phi.transpose() * out.lambda.asDiagonal() * out.psi - Z;
  if (!(residual.cwiseAbs().maxCoeff() <= matrix_tolerance(Z))) {
    Eigen::JacobiSVD<Matrix> jac(Z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.lambda = jac.singularValues();
    out.phi = jac.matrixU().transpose();
    out.psi = jac.matrixV().transpose();
  }
  return out;
}

CanonicalSpectrum canonical_decompose(const CouplingModel& model) {
  return canonical_decompose(model.Z);
}

int det_sign(const Matrix& M) {
  Eigen::PartialPivLU<Matrix> lu(M);
  int sign = static_cast<int>(std::lround(lu.permutationP().determinant()));
  const auto& f = lu.matrixLU();
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double d = f(i, i);
    if (d == 0.0 || !std::isfinite(d)) return 0;
    if (d < 0) sign = -sign;
  }
  return sign;
}

double log_abs_det(const Matrix& M) {
  Eigen::PartialPivLU<Matrix> lu(M);
  const auto& f = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double d = std::abs(f(i, i));
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(d);
  }
  return acc;
}

PolarForm polar_T(const CanonicalSpectrum& spec, const CouplingModel& model) {
  PolarForm out;
  out.T = spec.phi.transpose() * spec.psi;
  out.parity = det_sign(model.Z);
  const auto L = static_cast<int>(spec.lambda.size());
  out.gap = spec.lambda.minCoeff();
  out.well_defined = out.gap > singular_threshold(L, spec.lambda.maxCoeff());
  // Rounding can leave nonzero LU pivots on a singular Z; the SVD decides.
  if (!out.well_defined) out.parity = 0;
  return out;
}

PolarForm polar_T(const CouplingModel& model) {
  return polar_T(canonical_decompose(model), model);
}

EnergyGap ground_energy_and_gap(const CouplingModel& model,
                                const CanonicalSpectrum& spec) {
  return {0.5 * (model.A.trace() - spec.lambda.sum()), spec.lambda.minCoeff()};
}

SpectralList circulant_eigvals(std::span<const double> first_row) {
  const auto L = static_cast<long>(first_row.size());
  CVector zeta(L);
  for (long j = 0; j < L; ++j) {
    std::complex<double> acc{0.0, 0.0};
    for (long k = 0; k < L; ++k) {
      if (first_row[k] == 0.0) continue;
      // Reduce the phase index mod L so large L keeps full angle accuracy.
      const long idx = (j * k) % L;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / L;
      acc += first_row[k] * std::polar(1.0, angle);
    }
    zeta(j) = acc;
  }
  return make_spectral_list(std::move(zeta));
}

namespace {

void require_cyclic(const ModelParams& p) {
  validate(p);
  if (p.boundary != Boundary::Cyclic) {
    throw Error(ErrorCode::Parameter, "closed-form spectrum needs a cyclic model");
  }
}

double convention_factor(SignConvention s) {
  return s == SignConvention::Positive ? 1.0 : -1.0;
}

// sin(r k / 2) / sin(k / 2) with its k -> 0 limit r.
double dirichlet_ratio(int r, double kappa, int j) {
  if (j == 1) return static_cast<double>(r);
  return std::sin(r * kappa / 2.0) / std::sin(kappa / 2.0);
}

}  // namespace

SpectralList zeta_variable_range(const ModelParams& p) {
  require_cyclic(p);
  const int L = p.L;
  const int r = p.range;
  const double antipodal = (L % 2 == 0 && r == L / 2) ? 1.0 : 0.0;
  const double s = convention_factor(p.sign);
  CVector zeta(L);
  for (int j = 1; j <= L; ++j) {
    const double kappa = 2.0 * std::numbers::pi * (j - 1) / L;
    const double ratio = dirichlet_ratio(r, kappa, j);
    const double half = 0.5 * (1 + r) * kappa;
    const double alt = (j % 2 == 0) ? 1.0 : -1.0;
    const double re = p.mu + alt * antipodal + 2.0 * ratio * std::cos(half);
    const double im = 2.0 * ratio * p.gamma * std::sin(half);
    // Negative convention: -zeta equals the bracket.
    zeta(j - 1) = std::complex<double>(s * re, s * im);
  }
  return make_spectral_list(std::move(zeta));
}

SpectralList zeta_fully_connected(const ModelParams& p) {
  require_cyclic(p);
  if (!is_fully_connected(p) || p.sign != SignConvention::Positive) {
    throw Error(ErrorCode::Parameter,
                "zeta_fully_connected needs the fully-connected ring in the "
                "positive sign convention");
  }
  const int L = p.L;
  CVector zeta(L);
  zeta(0) = p.mu + L - 1.0;
  for (int j = 2; j <= L; ++j) {
    const double kappa = 2.0 * std::numbers::pi * (j - 1) / L;
    double coeff = 0.0;
    if (L % 2 == 0) {
      coeff = (j % 2 == 0) ? 2.0 / std::tan(kappa / 2.0) : 0.0;
    } else {
      coeff = (j % 2 == 0) ? 1.0 / std::tan(kappa / 4.0) : -std::tan(kappa / 4.0);
    }
    zeta(j - 1) = std::complex<double>(p.mu - 1.0, p.gamma * coeff);
  }
  return make_spectral_list(std::move(zeta));
}

SpectralDerivatives zeta_derivatives(const ModelParams& p) {
  require_cyclic(p);
  const int L = p.L;
  const int r = p.range;
  const double s = convention_factor(p.sign);
  SpectralDerivatives d;
  d.d_mu = CVector::Constant(L, std::complex<double>(s, 0.0));
  d.d_gamma.resize(L);
  for (int j = 1; j <= L; ++j) {
    const double kappa = 2.0 * std::numbers::pi * (j - 1) / L;
    const double ratio = dirichlet_ratio(r, kappa, j);
    const double half = 0.5 * (1 + r) * kappa;
    d.d_gamma(j - 1) = std::complex<double>(0.0, s * 2.0 * ratio * std::sin(half));
  }
  return d;
}

CirculantSummary summarize_circulant(const ModelParams& p, const SpectralList& s) {
  const int L = s.size();
  CirculantSummary out;
  out.gap = s.moduli.minCoeff();
  out.well_defined = out.gap > singular_threshold(L, s.moduli.maxCoeff());
  out.e0 = 0.5 * (L * diagonal_hopping(p) - s.moduli.sum());

  // Conjugate pairs contribute |zeta|^2 > 0; only the real unpaired
  // eigenvalues (j = 1, and j = L/2 + 1 for even L) carry a sign.
  // A modulus below the rank threshold counts as a zero of det Z, the same
  // criterion the dense path applies to singular values.
  int sign = out.well_defined ? 1 : 0;
  if (sign != 0) {
    auto real_sign = [&](int idx) { return s.zeta(idx).real() < 0 ? -1 : 1; };
    sign = real_sign(0);
    if (L % 2 == 0) sign *= real_sign(L / 2);
  }
  out.det_sign = sign;
  return out;
}

}  // namespace fermigraph
