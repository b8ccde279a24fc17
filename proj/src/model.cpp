#include "fermigraph/model.hpp"

#include <cstdlib>
#include <string>

#include "fermigraph/error.hpp"

namespace fermigraph {
namespace {

// Discrete step with step(0) = 1.
double step(int x) { return x >= 0 ? 1.0 : 0.0; }

double sign_of(int x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

double overall_sign(SignConvention s) {
  return s == SignConvention::Positive ? -1.0 : 1.0;
}

// Unit-coupling pattern of A (without the mu term) and of B/gamma, in the
// negative-sign convention. Writes into a and b.
void free_ends_pattern(int L, int r, Matrix& a, Matrix& b) {
  a.setZero(L, L);
  b.setZero(L, L);
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < L; ++k) {
      const int d = std::abs(j - k);
      a(j, k) = -step(r - d);
      b(j, k) = -sign_of(k - j) * step(r - d);
    }
  }
}

void cyclic_pattern(int L, int r, Matrix& a, Matrix& b) {
  a.setZero(L, L);
  b.setZero(L, L);
  const bool antipodal = (L % 2 == 0) && (r == L / 2);
  // The antipodal pair term cancels in the Hamiltonian, so B falls back to
  // the next-shorter range while A couples every pair once.
  const int rb = antipodal ? r - 1 : r;
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < L; ++k) {
      const int d = std::abs(j - k);
      if (antipodal) {
        a(j, k) = -1.0;
      } else {
        a(j, k) = -(step(r - d) + step(d - L + r));
      }
      b(j, k) = -sign_of(k - j) * (step(rb - d) - step(d - L + rb));
    }
  }
}

CouplingModel assemble(const ModelParams& p, const Matrix& a_unit,
                       const Matrix& b_unit) {
  const double s = overall_sign(p.sign);
  CouplingModel m;
  m.params = p;
  m.A = a_unit;
  m.A.diagonal().array() -= (p.mu - 1.0);
  m.A *= s;
  m.B = (s * p.gamma) * b_unit;
  m.Z = m.A - m.B;
  return m;
}

}  // namespace

int full_range(int L, Boundary boundary) {
  return boundary == Boundary::FreeEnds ? L - 1 : L / 2;
}

bool is_fully_connected(const ModelParams& p) {
  return p.range == full_range(p.L, p.boundary);
}

void validate(const ModelParams& p) {
  if (p.L < 2) {
    throw Error(ErrorCode::Parameter, "L must be at least 2");
  }
  if (p.L > kMaxModes) {
    throw Error(ErrorCode::Parameter,
                "L=" + std::to_string(p.L) + " exceeds the configured cap of " +
                    std::to_string(kMaxModes));
  }
  const int rmax = full_range(p.L, p.boundary);
  if (p.range < 0 || p.range > rmax) {
    throw Error(ErrorCode::Parameter,
                "range " + std::to_string(p.range) + " outside [0, " +
                    std::to_string(rmax) + "] for L=" + std::to_string(p.L));
  }
}

CouplingModel build_free_ends(const ModelParams& p) {
  if (p.boundary != Boundary::FreeEnds) {
    throw Error(ErrorCode::Parameter, "build_free_ends needs a free-ends model");
  }
  validate(p);
  Matrix a, b;
  free_ends_pattern(p.L, p.range, a, b);
  return assemble(p, a, b);
}

CouplingModel build_cyclic(const ModelParams& p) {
  if (p.boundary != Boundary::Cyclic) {
    throw Error(ErrorCode::Parameter, "build_cyclic needs a cyclic model");
  }
  validate(p);
  Matrix a, b;
  cyclic_pattern(p.L, p.range, a, b);
  return assemble(p, a, b);
}

CouplingModel build_model(const ModelParams& p) {
  return p.boundary == Boundary::FreeEnds ? build_free_ends(p) : build_cyclic(p);
}

ModelParams ModelTemplate::at(int L, double mu, double gamma) const {
  ModelParams p;
  p.L = L;
  p.range = range ? *range : full_range(L, boundary);
  p.mu = mu;
  p.gamma = gamma;
  p.boundary = boundary;
  p.sign = sign;
  return p;
}

double diagonal_hopping(const ModelParams& p) {
  return p.sign == SignConvention::Positive ? p.mu : -p.mu;
}

Matrix dz_dmu(const ModelParams& p) {
  validate(p);
  const double s = overall_sign(p.sign);
  return Matrix::Identity(p.L, p.L) * (-s);
}

Matrix dz_dgamma(const ModelParams& p) {
  validate(p);
  Matrix a, b;
  if (p.boundary == Boundary::FreeEnds) {
    free_ends_pattern(p.L, p.range, a, b);
  } else {
    cyclic_pattern(p.L, p.range, a, b);
  }
  return -overall_sign(p.sign) * b;
}

}  // namespace fermigraph
