#include "fermigraph/oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fermigraph/error.hpp"

namespace fermigraph {
namespace fock {

namespace {
int sign_below(int mode, std::uint32_t mask) {
  const std::uint32_t below = mask & ((std::uint32_t{1} << mode) - 1u);
  return (std::popcount(below) % 2) ? -1 : 1;
}
}  // namespace

std::optional<Action> create(int mode, std::uint32_t mask) {
  const std::uint32_t bit = std::uint32_t{1} << mode;
  if (mask & bit) return std::nullopt;
  return Action{sign_below(mode, mask), mask | bit};
}

std::optional<Action> annihilate(int mode, std::uint32_t mask) {
  const std::uint32_t bit = std::uint32_t{1} << mode;
  if (!(mask & bit)) return std::nullopt;
  return Action{sign_below(mode, mask), mask & ~bit};
}

int parity_of(std::uint32_t mask) { return (std::popcount(mask) % 2) ? -1 : 1; }

}  // namespace fock

namespace {

void guard_size(int L) {
  if (L > fock::kMaxOracleModes) {
    throw Error(ErrorCode::SizeGuard,
                "oracle limited to L <= " + std::to_string(fock::kMaxOracleModes));
  }
}

// target += coeff * c_i^+ c_j^+ |source>, applied to every basis state.
void add_pair_creation(const Matrix& coeff, const Vector& source, Vector& target) {
  const auto L = static_cast<int>(coeff.rows());
  const auto dim = static_cast<std::uint32_t>(source.size());
  for (std::uint32_t s = 0; s < dim; ++s) {
    const double amp = source(s);
    if (amp == 0.0) continue;
    for (int j = 0; j < L; ++j) {
      const auto first = fock::create(j, s);
      if (!first) continue;
      for (int i = 0; i < L; ++i) {
        const double c = coeff(i, j);
        if (c == 0.0) continue;
        const auto second = fock::create(i, first->mask);
        if (!second) continue;
        target(second->mask) += c * first->sign * second->sign * amp;
      }
    }
  }
}

}  // namespace

Matrix fock_hamiltonian(const Matrix& A, const Matrix& B) {
  const auto L = static_cast<int>(A.rows());
  guard_size(L);
  const std::uint32_t dim = std::uint32_t{1} << L;
  Matrix H = Matrix::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    for (int j = 0; j < L; ++j) {
      // Hopping c_i^+ A_ij c_j.
      if (const auto a = fock::annihilate(j, s)) {
        for (int i = 0; i < L; ++i) {
          if (A(i, j) == 0.0) continue;
          if (const auto b = fock::create(i, a->mask)) {
            H(b->mask, s) += A(i, j) * a->sign * b->sign;
          }
        }
      }
      // Pairing (1/2) B_ij c_i^+ c_j^+ and its conjugate (1/2) B_ij c_j c_i.
      if (const auto a = fock::create(j, s)) {
        for (int i = 0; i < L; ++i) {
          if (B(i, j) == 0.0) continue;
          if (const auto b = fock::create(i, a->mask)) {
            H(b->mask, s) += 0.5 * B(i, j) * a->sign * b->sign;
          }
        }
      }
      for (int i = 0; i < L; ++i) {
        if (B(i, j) == 0.0) continue;
        const auto a = fock::annihilate(i, s);
        if (!a) continue;
        if (const auto b = fock::annihilate(j, a->mask)) {
          H(b->mask, s) += 0.5 * B(i, j) * a->sign * b->sign;
        }
      }
    }
  }
  return H;
}

OracleResult fock_hamiltonian_gs(const CouplingModel& model) {
  const auto L = static_cast<int>(model.A.rows());
  guard_size(L);
  const Matrix H = fock_hamiltonian(model.A, model.B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::Consistency, "Fock-space eigensolver failed");
  }

  OracleResult out;
  out.spectrum = es.eigenvalues();
  out.e0 = out.spectrum(0);
  out.degenerate = out.spectrum.size() > 1 && (out.spectrum(1) - out.spectrum(0)) < 1e-10;
  out.gs.L = L;
  out.gs.amplitudes = es.eigenvectors().col(0);

  double even_weight = 0.0;
  out.densities = Vector::Zero(L);
  for (Eigen::Index s = 0; s < out.gs.amplitudes.size(); ++s) {
    const double w = out.gs.amplitudes(s) * out.gs.amplitudes(s);
    const auto mask = static_cast<std::uint32_t>(s);
    if (fock::parity_of(mask) == 1) even_weight += w;
    for (int i = 0; i < L; ++i) {
      if (mask & (std::uint32_t{1} << i)) out.densities(i) += w;
    }
  }
  out.parity = even_weight >= 0.5 ? 1 : -1;
  return out;
}

double overlap(const FockState& a, const FockState& b) {
  if (a.L != b.L) {
    throw Error(ErrorCode::Parameter, "overlap needs states with the same mode count");
  }
  return std::abs(a.amplitudes.dot(b.amplitudes));
}

FockState gs_from_G(const Matrix& G) {
  const auto L = static_cast<int>(G.rows());
  guard_size(L);
  const Eigen::Index dim = Eigen::Index{1} << L;
  Vector term = Vector::Zero(dim);
  term(0) = 1.0;
  Vector total = term;
  const Matrix half = 0.5 * G;
  // exp(X)|0> with X the pair creator; X^n|0> vanishes for n > L/2.
  for (int n = 1; n <= L / 2; ++n) {
    Vector next = Vector::Zero(dim);
    add_pair_creation(half, term, next);
    term = next / static_cast<double>(n);
    total += term;
  }
  FockState out;
  out.L = L;
  out.amplitudes = total / total.norm();
  return out;
}

FockState apply_eta(const CanonicalSpectrum& spec, int j, const FockState& state) {
  const int L = state.L;
  const Matrix g = spec.g();
  const Matrix h = spec.h_pair();
  FockState out;
  out.L = L;
  out.amplitudes = Vector::Zero(state.amplitudes.size());
  for (Eigen::Index s = 0; s < state.amplitudes.size(); ++s) {
    const double amp = state.amplitudes(s);
    if (amp == 0.0) continue;
    const auto mask = static_cast<std::uint32_t>(s);
    for (int k = 0; k < L; ++k) {
      if (const auto a = fock::annihilate(k, mask)) {
        out.amplitudes(a->mask) += g(j, k) * a->sign * amp;
      }
      if (const auto c = fock::create(k, mask)) {
        out.amplitudes(c->mask) += h(j, k) * c->sign * amp;
      }
    }
  }
  return out;
}

double annihilation_residual(const CanonicalSpectrum& spec, const FockState& state) {
  double worst = 0.0;
  for (int j = 0; j < state.L; ++j) {
    worst = std::max(worst, apply_eta(spec, j, state).amplitudes.norm());
  }
  return worst;
}

}  // namespace fermigraph
