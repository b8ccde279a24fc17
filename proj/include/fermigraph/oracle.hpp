#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fermigraph/model.hpp"
#include "fermigraph/solver.hpp"

namespace fermigraph {

/// Brute-force reference in the 2^L occupation basis.
///
/// Basis index = occupation bitmask, bit j set <=> mode j occupied. Mode j
/// acts with the sign (-1)^(number of occupied modes with index < j). Every
/// cross-check in the test suite relies on this ordering.
namespace fock {

inline constexpr int kMaxOracleModes = 12;

struct Action {
  int sign;
  std::uint32_t mask;
};

std::optional<Action> create(int mode, std::uint32_t mask);
std::optional<Action> annihilate(int mode, std::uint32_t mask);
int parity_of(std::uint32_t mask);

}  // namespace fock

/// Real amplitudes suffice: every operator here has real matrix elements.
struct FockState {
  int L = 0;
  Vector amplitudes;
};

struct OracleResult {
  double e0 = 0.0;
  FockState gs;
  int parity = 1;
  bool degenerate = false;
  Vector densities;  // <n_i>
  Vector spectrum;   // all 2^L eigenvalues, ascending
};

/// H = sum_ij c_i^+ A_ij c_j + (1/2) sum_ij (c_i^+ B_ij c_j^+ + h.c.)
Matrix fock_hamiltonian(const Matrix& A, const Matrix& B);

/// Lowest eigenpair of the Fock Hamiltonian. Throws SizeGuard for L > 12.
OracleResult fock_hamiltonian_gs(const CouplingModel& model);

double overlap(const FockState& a, const FockState& b);

/// Normalized exp((1/2) sum G_jk c_j^+ c_k^+)|0>.
FockState gs_from_G(const Matrix& G);

/// eta_j |state> with eta_j = sum_k (g_jk c_k + h_jk c_k^+).
FockState apply_eta(const CanonicalSpectrum& spec, int j, const FockState& state);

/// max_j || eta_j |state> ||.
double annihilation_residual(const CanonicalSpectrum& spec, const FockState& state);

}  // namespace fermigraph
