#include "fermigraph/gsfid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fermigraph/error.hpp"

namespace fermigraph {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Smallest singular value of T + 1 below which -1 counts as an eigenvalue.
constexpr double kCayleyTolerance = 1e-8;

// Imaginary parts below this are treated as real eigenvalues of T.
constexpr double kRealEigenTolerance = 1e-7;

FidelityValue from_log(double log_f) {
  FidelityValue v;
  v.log_f = std::min(log_f, 0.0);
  v.F = std::clamp(std::exp(v.log_f), 0.0, 1.0);
  return v;
}

FidelityValue vanishing(bool parity_mismatch) {
  FidelityValue v;
  v.F = 0.0;
  v.log_f = kNegInf;
  v.parity_mismatch = parity_mismatch;
  return v;
}

// arg(b / a) in (-pi, pi] without forming the quotient.
double phase_difference(std::complex<double> a, std::complex<double> b) {
  return std::arg(b * std::conj(a));
}

}  // namespace

double FidelityValue::deficit() const {
  if (!std::isfinite(log_f)) return -1.0;
  return std::expm1(log_f);
}

Matrix cayley_G(const Matrix& T) {
  const auto L = T.rows();
  const Matrix I = Matrix::Identity(L, L);
  if (det_sign(T) < 0) {
    throw Error(ErrorCode::OddParity, "det T = -1: odd ground state has no Cayley form");
  }
  const Matrix plus = T + I;
  Eigen::JacobiSVD<Matrix> sv(plus);
  if (sv.singularValues().minCoeff() <= kCayleyTolerance) {
    throw Error(ErrorCode::NotCayleyRepresentable,
                "-1 is an eigenvalue of T; the pair-condensate form exists only as a limit");
  }
  // T - 1 and (T + 1)^{-1} commute, so either order of the product is fine.
  Matrix G = plus.partialPivLu().solve(T - I);
  return 0.5 * (G - G.transpose());
}

Matrix inverse_cayley(const Matrix& G) {
  const auto L = G.rows();
  const Matrix I = Matrix::Identity(L, L);
  return (I - G).partialPivLu().solve(I + G);
}

GroundStateForm state_angles(const Matrix& T) {
  Eigen::EigenSolver<Matrix> es(T, false);
  const auto& ev = es.eigenvalues();

  GroundStateForm out;
  int plus_ones = 0;
  int minus_ones = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const auto z = ev(i);
    if (std::abs(z.imag()) > kRealEigenTolerance) {
      if (z.imag() > 0) out.angles.push_back(std::atan2(z.imag(), z.real()));
    } else if (z.real() < 0) {
      ++minus_ones;
    } else {
      ++plus_ones;
    }
  }
  // Real eigenvalues of equal sign combine into pairs at theta = 0 or pi.
  for (int k = 0; k < minus_ones / 2; ++k) out.angles.push_back(std::numbers::pi);
  for (int k = 0; k < plus_ones / 2; ++k) out.angles.push_back(0.0);
  if (minus_ones % 2) out.unpaired.push_back(-1.0);
  if (plus_ones % 2) out.unpaired.push_back(1.0);
  std::sort(out.angles.begin(), out.angles.end());
  out.parity = (minus_ones % 2) ? -1 : 1;

  if (out.parity == 1) {
    try {
      out.G = cayley_G(T);
    } catch (const Error&) {
      out.G.reset();
    }
  }
  return out;
}

FidelityValue fidelity(const Matrix& T, const Matrix& T_tilde) {
  if (T.rows() != T_tilde.rows()) {
    throw Error(ErrorCode::Parameter, "fidelity needs matrices of equal size");
  }
  if (det_sign(T) != det_sign(T_tilde)) return vanishing(true);

  // (T + T~)/2 = T (1 + W)/2 with W = T^T T~ normal; its singular values are
  // |cos(Theta_k / 2)|, the complements of the singular values
  // |sin(Theta_k / 2)| of (T~ - T)/2. Small angles are read from the
  // difference and large ones from the sum, so each factor keeps full
  // relative accuracy. Descending sines pair with ascending cosines.
  const Vector sines = singular_values(0.5 * (T_tilde - T));
  const auto n = sines.size();
  Vector cosines;
  double log_f = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::min(1.0, sines(k));
    if (s * s <= 0.5) {
      log_f += 0.25 * std::log1p(-s * s);
      continue;
    }
    if (cosines.size() == 0) cosines = singular_values(0.5 * (T_tilde + T));
    const double c = cosines(n - 1 - k);
    if (c <= 0.0) return vanishing(false);
    log_f += 0.5 * std::log(c);
  }
  return from_log(log_f);
}

FidelityValue fidelity(const PolarForm& a, const PolarForm& b) {
  if (!a.well_defined || !b.well_defined) {
    throw Error(ErrorCode::DegenerateEndpoint,
                "fidelity at a level crossing (det Z = 0) is ill-posed");
  }
  if (a.parity != b.parity) return vanishing(true);
  return fidelity(a.T, b.T);
}

FidelityValue fidelity_circulant(const SpectralList& s1, const SpectralList& s2) {
  const int L = s1.size();
  if (s2.size() != L) {
    throw Error(ErrorCode::Parameter, "fidelity_circulant needs spectra of equal length");
  }
  const double eps = singular_threshold(
      L, std::max(s1.moduli.maxCoeff(), s2.moduli.maxCoeff()));
  if (s1.moduli.minCoeff() <= eps || s2.moduli.minCoeff() <= eps) {
    throw Error(ErrorCode::DegenerateEndpoint, "circulant endpoint has a zero mode");
  }

  bool mismatch = false;
  auto classify_unpaired = [&](int idx) {
    const double d = std::abs(phase_difference(s1.zeta(idx), s2.zeta(idx)));
    if (d < kAngleTolerance) return;
    if (std::numbers::pi - d < kAngleTolerance) {
      mismatch = true;
      return;
    }
    throw Error(ErrorCode::Consistency,
                "unpaired eigenvalue phase difference is neither 0 nor pi");
  };
  classify_unpaired(0);
  if (L % 2 == 0) classify_unpaired(L / 2);
  if (mismatch) return vanishing(true);

  const int pairs = (L - 1) / 2;
  double log_f = 0.0;
  for (int j = 1; j <= pairs; ++j) {
    const double half = 0.5 * phase_difference(s1.zeta(j), s2.zeta(j));
    const double sn = std::sin(half);
    if (std::abs(sn) >= 1.0) return vanishing(false);
    log_f += 0.5 * std::log1p(-sn * sn);
  }
  return from_log(log_f);
}

FidelityValue fidelity_from_G(const Matrix& G, const Matrix& G_tilde) {
  const auto L = G.rows();
  const Matrix I = Matrix::Identity(L, L);
  const double cross = log_abs_det(I + G.transpose() * G_tilde);
  const double self = log_abs_det(I + G.transpose() * G);
  const double other = log_abs_det(I + G_tilde.transpose() * G_tilde);
  if (!std::isfinite(cross)) return vanishing(false);
  return from_log(0.5 * cross - 0.25 * self - 0.25 * other);
}

}  // namespace fermigraph
