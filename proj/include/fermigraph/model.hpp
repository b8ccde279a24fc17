#pragma once

#include <optional>

#include <Eigen/Dense>

namespace fermigraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

#ifndef FERMIGRAPH_MAX_L
#define FERMIGRAPH_MAX_L 4096
#endif
inline constexpr int kMaxModes = FERMIGRAPH_MAX_L;

enum class Boundary { FreeEnds, Cyclic };

/// Overall sign of the Hamiltonian. `Negative` is the chain form where the
/// hopping and pairing terms enter with a minus sign (A = -[...]); `Positive`
/// flips both A and B, which is the fully-connected graph convention.
enum class SignConvention { Negative, Positive };

struct ModelParams {
  int L = 2;
  int range = 1;
  double mu = 0.0;
  double gamma = 0.0;
  Boundary boundary = Boundary::FreeEnds;
  SignConvention sign = SignConvention::Positive;
};

/// Largest legal coupling range: L-1 with free ends, floor(L/2) on the ring.
int full_range(int L, Boundary boundary);

bool is_fully_connected(const ModelParams& p);

/// Throws Error{Parameter} for L < 2, L above kMaxModes or an illegal range.
void validate(const ModelParams& p);

/// Coupling matrices of H = c^T A c + (1/2)(c^T B c^T + h.c.).
/// A is symmetric, B antisymmetric, Z = A - B; all entries are exact
/// small-integer multiples of (mu - 1), 1 and gamma.
struct CouplingModel {
  ModelParams params;
  Matrix A;
  Matrix B;
  Matrix Z;
};

CouplingModel build_free_ends(const ModelParams& p);
CouplingModel build_cyclic(const ModelParams& p);
CouplingModel build_model(const ModelParams& p);

/// A family of models differing only in (L, mu, gamma). An empty range
/// means the fully-connected range for each L.
struct ModelTemplate {
  Boundary boundary = Boundary::Cyclic;
  std::optional<int> range;
  SignConvention sign = SignConvention::Positive;

  ModelParams at(int L, double mu, double gamma) const;
};

/// Diagonal entry of A (the same on every site for both boundaries).
double diagonal_hopping(const ModelParams& p);

/// dZ/dmu and dZ/dgamma. Z is affine in (mu, gamma), so these are exact.
Matrix dz_dmu(const ModelParams& p);
Matrix dz_dgamma(const ModelParams& p);

}  // namespace fermigraph
