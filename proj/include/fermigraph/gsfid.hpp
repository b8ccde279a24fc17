#pragma once

#include <optional>
#include <vector>

#include "fermigraph/solver.hpp"

namespace fermigraph {

/// Pair-angle form of a ground state: Sp T = {exp(+-i theta_nu)} plus the
/// unpaired real eigenvalues (+1 / -1).
struct GroundStateForm {
  std::optional<Matrix> G;  // absent when -1 is in Sp T or det T = -1
  std::vector<double> angles;
  std::vector<double> unpaired;
  int parity = 1;
};

/// Ground-state fidelity |<Psi_Z|Psi_Z~>|. `log_f` is kept separately
/// because F itself underflows for large L.
struct FidelityValue {
  double F = 0.0;
  double log_f = 0.0;
  bool parity_mismatch = false;
  bool degenerate = false;

  /// F - 1 without cancellation (uses expm1 on log_f).
  double deficit() const;
};

/// Unpaired-phase tolerance for the 0-vs-pi classification.
inline constexpr double kAngleTolerance = 1e-6;

/// G = (T - 1)(T + 1)^{-1}, antisymmetrized.
/// Throws OddParity when det T = -1 and NotCayleyRepresentable when
/// -1 is (numerically) an eigenvalue of T.
Matrix cayley_G(const Matrix& T);

/// T = (1 + G)(1 - G)^{-1}.
Matrix inverse_cayley(const Matrix& G);

GroundStateForm state_angles(const Matrix& T);

/// sqrt|det((T + T~)/2)|, evaluated from singular values in log space.
FidelityValue fidelity(const Matrix& T, const Matrix& T_tilde);

/// Same, but checks both endpoints; throws DegenerateEndpoint otherwise.
FidelityValue fidelity(const PolarForm& a, const PolarForm& b);

/// Product-of-cosines fidelity for two circulant spectra of equal length.
FidelityValue fidelity_circulant(const SpectralList& s1, const SpectralList& s2);

/// Coherent-state overlap formula in terms of two Cayley matrices.
FidelityValue fidelity_from_G(const Matrix& G, const Matrix& G_tilde);

}  // namespace fermigraph
