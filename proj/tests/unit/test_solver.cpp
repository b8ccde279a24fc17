#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fermigraph/model.hpp"
#include "fermigraph/oracle.hpp"
#include "fermigraph/solver.hpp"
#include "generators.hpp"

using namespace fermigraph;
using testgen::sorted;
using testgen::to_vector;

namespace {

ModelParams make(int L, int r, double mu, double gamma, Boundary b,
                 SignConvention s = SignConvention::Positive) {
  ModelParams p;
  p.L = L;
  p.range = r;
  p.mu = mu;
  p.gamma = gamma;
  p.boundary = b;
  p.sign = s;
  return p;
}

std::vector<double> first_row(const Matrix& m) { return to_vector(Eigen::VectorXd(m.row(0).transpose())); }

std::vector<double> dense_moduli(const Matrix& Z) {
  Eigen::EigenSolver<Matrix> es(Z, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()(i)));
  return sorted(out);
}

}  // namespace

TEST_CASE("nearest-neighbour ring reproduces the XY spectrum") {
  for (int L : {4, 5, 9, 16}) {
    const double mu = 0.7;
    const double g = 0.4;
    const auto spec = canonical_decompose(build_cyclic(make(L, 1, mu, g, Boundary::Cyclic)));
    std::vector<double> expected;
    for (int j = 1; j <= L; ++j) {
      const double k = 2.0 * std::numbers::pi * (j - 1) / L;
      expected.push_back(2.0 * std::hypot(std::cos(k) + mu / 2.0, g * std::sin(k)));
    }
    CHECK(testgen::max_abs_diff(sorted(to_vector(spec.lambda)), sorted(expected)) < 1e-12);
  }
}

TEST_CASE("gamma = 0 gives a symmetric Z and a polar factor with eigenvalues +-1") {
  const auto m = build_free_ends(make(7, 3, 0.4, 0.0, Boundary::FreeEnds));
  const PolarForm pf = polar_T(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pf.T + pf.T.transpose()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    CHECK(std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-12);
  }
}

TEST_CASE("fully-connected free ends, L = 4, mu = 0, gamma = 1: Lambda^2 = {0, 1 + tan^2(j pi / 7)}") {
  const auto spec = canonical_decompose(build_free_ends(make(4, 3, 0.0, 1.0, Boundary::FreeEnds)));
  std::vector<double> l2;
  for (int i = 0; i < 4; ++i) l2.push_back(spec.lambda(i) * spec.lambda(i));
  std::vector<double> expected{0.0};
  for (int j = 1; j <= 3; ++j) expected.push_back(1.0 + std::pow(std::tan(j * std::numbers::pi / 7.0), 2));
  CHECK(testgen::max_abs_diff(sorted(l2), sorted(expected)) < 1e-12);
}

TEST_CASE("positive multiple of the identity has T = 1 and even parity") {
  CouplingModel m;
  m.A = 2.5 * Matrix::Identity(4, 4);
  m.B = Matrix::Zero(4, 4);
  m.Z = m.A;
  const PolarForm pf = polar_T(m);
  CHECK((pf.T - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(pf.parity == 1);
  CHECK(pf.well_defined);
}

TEST_CASE("even fully-connected ring flips parity across mu = 1") {
  ModelTemplate ring;
  const int L = 10;
  const PolarForm below = polar_T(build_model(ring.at(L, 0.9, 0.8)));
  const PolarForm above = polar_T(build_model(ring.at(L, 1.1, 0.8)));
  CHECK(below.parity == -above.parity);
  const PolarForm at = polar_T(build_model(ring.at(L, 1.0, 0.8)));
  CHECK_FALSE(at.well_defined);
}

TEST_CASE("free ends L = 6 at (0.5, 0.5): parity is even and matches the oracle") {
  const auto m = build_free_ends(make(6, 1, 0.5, 0.5, Boundary::FreeEnds));
  CHECK(polar_T(m).parity == 1);
  CHECK(fock_hamiltonian_gs(m).parity == 1);
}

TEST_CASE("ground energy of the fully-connected ring at gamma = 0") {
  ModelTemplate ring;
  for (int L : {7, 8, 21}) {
    for (double mu : {1.0, 1.5, 4.0}) {
      const auto m = build_model(ring.at(L, mu, 0.0));
      CHECK(std::abs(ground_energy_and_gap(m, canonical_decompose(m)).e0) < 1e-11 * L);
    }
    for (double mu : {-0.5, 0.2, 0.9}) {
      const auto m = build_model(ring.at(L, mu, 0.0));
      CHECK(ground_energy_and_gap(m, canonical_decompose(m)).e0 ==
            doctest::Approx((L - 1) * (mu - 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("ground energy of a small ring agrees with exact diagonalization") {
  const auto m = build_cyclic(make(6, 1, 1.3, 0.7, Boundary::Cyclic));
  const double e0 = ground_energy_and_gap(m, canonical_decompose(m)).e0;
  // Frozen from an independent dense diagonalization of the 64-dimensional Fock matrix.
  CHECK(e0 == doctest::Approx(-1.9489995996796787).epsilon(1e-12));
  CHECK(std::abs(e0 - fock_hamiltonian_gs(m).e0) < 1e-9);
}

TEST_CASE("circulant eigenvalues") {
  const std::vector<double> row{2.5, 0, 0, 0, 0};
  const SpectralList s = circulant_eigvals(row);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(s.zeta(j) - std::complex<double>(2.5, 0.0)) < 1e-15);

  ModelTemplate ring;
  const int L = 9;
  const double mu = 0.3;
  const SpectralList a = circulant_eigvals(first_row(build_model(ring.at(L, mu, 0.0)).A));
  CHECK(a.zeta(0).real() == doctest::Approx(L + mu - 1.0));
  for (int j = 1; j < L; ++j) CHECK(std::abs(a.zeta(j) - std::complex<double>(mu - 1.0, 0.0)) < 1e-12);

  const Matrix z = build_cyclic(make(8, 2, 0.6, 0.9, Boundary::Cyclic)).Z;
  const SpectralList zs = circulant_eigvals(first_row(z));
  CHECK(testgen::max_abs_diff(sorted(to_vector(zs.moduli)), dense_moduli(z)) < 1e-12);
}

TEST_CASE("variable-range closed form") {
  // r = 1, chain sign: -zeta_j = mu + 2 cos k + 2 i gamma sin k.
  const ModelParams p = make(9, 1, 0.8, 0.35, Boundary::Cyclic, SignConvention::Negative);
  const SpectralList s = zeta_variable_range(p);
  for (int j = 1; j <= 9; ++j) {
    const double k = 2.0 * std::numbers::pi * (j - 1) / 9;
    const std::complex<double> expected(p.mu + 2 * std::cos(k), 2 * p.gamma * std::sin(k));
    CHECK(std::abs(-s.zeta(j - 1) - expected) < 1e-13);
  }
  for (int r = 0; r <= 4; ++r) {
    const SpectralList t = zeta_variable_range(make(9, r, 0.8, 0.35, Boundary::Cyclic, SignConvention::Negative));
    CHECK(-t.zeta(0).real() == doctest::Approx(0.8 + 2.0 * r));
  }
  const ModelParams q = make(7, 3, 0.4, 1.1, Boundary::Cyclic);
  const SpectralList dft = circulant_eigvals(first_row(build_model(q).Z));
  const SpectralList cf = zeta_variable_range(q);
  for (int j = 0; j < 7; ++j) CHECK(std::abs(dft.zeta(j) - cf.zeta(j)) < 1e-12);
}

TEST_CASE("fully-connected closed form") {
  ModelTemplate ring;
  const int L = 11;
  const double g = 0.7;
  const SpectralList s = zeta_fully_connected(ring.at(L, 1.4, g));
  for (int k = 1; 2 * k <= L; ++k) {
    CHECK(s.zeta(2 * k - 1).imag() == doctest::Approx(g / std::tan(std::numbers::pi * (2 * k - 1) / (2.0 * L))));
    if (k >= 2) {
      CHECK(s.zeta(2 * k - 2).imag() ==
            doctest::Approx(-g * std::tan(std::numbers::pi * (2 * k - 2) / (2.0 * L))));
    }
  }
  const SpectralList zero = zeta_fully_connected(ring.at(L, 1.4, 0.0));
  CHECK(zero.zeta(0).real() == doctest::Approx(L + 0.4));
  for (int j = 1; j < L; ++j) CHECK(std::abs(zero.zeta(j) - std::complex<double>(0.4, 0.0)) < 1e-15);

  const auto m = build_model(ring.at(5, 2.0, 1.0));
  const auto spec = canonical_decompose(m);
  const SpectralList fc = zeta_fully_connected(ring.at(5, 2.0, 1.0));
  CHECK(testgen::max_abs_diff(sorted(to_vector(fc.moduli)), sorted(to_vector(spec.lambda))) < 1e-12);

  for (int n : {6, 7, 12, 13}) {
    const ModelParams p = ring.at(n, 0.3, 1.2);
    const SpectralList a = zeta_fully_connected(p);
    const SpectralList b = zeta_variable_range(p);
    for (int j = 0; j < n; ++j) CHECK(std::abs(a.zeta(j) - b.zeta(j)) < 1e-11);
  }
  CHECK_THROWS(zeta_fully_connected(make(7, 2, 1.0, 1.0, Boundary::Cyclic)));
}

TEST_CASE("determinant sign and log magnitude") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  CHECK(det_sign(m) == -1);
  CHECK(log_abs_det(m) == doctest::Approx(0.0));
  CHECK(det_sign(Matrix::Identity(3, 3) * -1.0) == -1);
  CHECK(det_sign(Matrix::Zero(3, 3)) == 0);
  // |det| = 1e600 overflows a double but its sign and log do not.
  const Matrix big = Matrix::Identity(300, 300) * 100.0;
  CHECK(det_sign(big) == 1);
  CHECK(log_abs_det(big) == doctest::Approx(300 * std::log(100.0)));
}

TEST_CASE("property: reconstruction, canonical conditions and polar consistency") {
  testgen::Gen gen(21);
  for (int trial = 0; trial < 40; ++trial) {
    const ModelParams p = gen.params(2, trial < 36 ? 40 : 256);
    const auto m = build_model(p);
    const auto spec = canonical_decompose(m);
    const double tol = matrix_tolerance(m.Z);
    const int L = p.L;
    const Matrix I = Matrix::Identity(L, L);
    CAPTURE(L);
    CHECK((spec.phi * spec.phi.transpose() - I).cwiseAbs().maxCoeff() <= tol);
    CHECK((spec.psi * spec.psi.transpose() - I).cwiseAbs().maxCoeff() <= tol);
    const Matrix d = spec.phi * m.Z * spec.psi.transpose();
    Matrix diag = spec.lambda.asDiagonal();
    CHECK((d - diag).cwiseAbs().maxCoeff() <= tol);
    CHECK(spec.lambda.minCoeff() >= 0.0);
    const Matrix g = spec.g();
    const Matrix h = spec.h_pair();
    CHECK((g * g.transpose() + h * h.transpose() - I).cwiseAbs().maxCoeff() <= tol);
    const PolarForm pf = polar_T(spec, m);
    CHECK((pf.T.transpose() * pf.T - I).cwiseAbs().maxCoeff() <= tol);
    if (pf.well_defined) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(m.Z * m.Z.transpose());
      const Matrix absz = es.operatorSqrt();
      CHECK((m.Z - absz * pf.T).cwiseAbs().maxCoeff() <= tol);
      CHECK(pf.parity == det_sign(pf.T));
    }
  }
}

TEST_CASE("property: gamma -> -gamma on free ends transposes T") {
  testgen::Gen gen(22);
  for (int trial = 0; trial < 40; ++trial) {
    ModelParams p = gen.params(2, 30);
    p.boundary = Boundary::FreeEnds;
    p.range = gen.integer(0, p.L - 1);
    const auto plus = build_model(p);
    p.gamma = -p.gamma;
    const auto minus = build_model(p);
    const auto sp = canonical_decompose(plus);
    const auto sm = canonical_decompose(minus);
    const double tol = matrix_tolerance(plus.Z);
    CHECK((sp.lambda - sm.lambda).cwiseAbs().maxCoeff() <= tol);
    const PolarForm tp = polar_T(sp, plus);
    const PolarForm tm = polar_T(sm, minus);
    if (tp.well_defined && tp.gap > 1e-6) {
      CHECK((tp.T - tm.T.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("property: circulant fast path equals the dense spectrum") {
  testgen::Gen gen(23);
  for (int trial = 0; trial < 40; ++trial) {
    ModelParams p = gen.params(2, trial < 30 ? 40 : 200);
    p.boundary = Boundary::Cyclic;
    p.range = gen.integer(0, p.L / 2);
    const SpectralList s = zeta_variable_range(p);
    const auto m = build_model(p);
    const auto spec = canonical_decompose(m);
    CHECK(testgen::max_abs_diff(sorted(to_vector(s.moduli)), sorted(to_vector(spec.lambda))) <= 1e-10);
    const CirculantSummary sum = summarize_circulant(p, s);
    CHECK(sum.e0 == doctest::Approx(ground_energy_and_gap(m, spec).e0).epsilon(1e-10));
    if (sum.well_defined) CHECK(sum.det_sign == det_sign(m.Z));
    // Conjugate pairing of a real circulant spectrum.
    CHECK(std::abs(s.zeta(0).imag()) < 1e-12);
    for (int j = 1; j < p.L; ++j) CHECK(std::abs(s.zeta(j) - std::conj(s.zeta(p.L - j))) < 1e-10);
  }
}

TEST_CASE("property: total energy of the fully-connected ring grows like L ln L") {
  ModelTemplate ring;
  std::vector<double> ratio;
  for (int L : {101, 201, 401, 801}) {
    const SpectralList s = zeta_variable_range(ring.at(L, 1.5, 1.0));
    ratio.push_back(s.moduli.sum() / (L * std::log(L)));
  }
  for (double r : ratio) {
    CHECK(r > 0.1);
    CHECK(r < 10.0);
  }
  CHECK(std::abs(ratio.back() - ratio[2]) < std::abs(ratio[1] - ratio[0]) + 1e-12);
}

TEST_CASE("heavily degenerate spectrum still reconstructs Z") {
  // Even fully-connected rings have |zeta| = |mu - 1| on every odd index.
  ModelTemplate ring;
  for (int L : {16, 24, 48}) {
    const auto m = build_model(ring.at(L, -1.9, -1.3));
    const auto spec = canonical_decompose(m);
    const Matrix rec = spec.phi.transpose() * spec.lambda.asDiagonal() * spec.psi;
    CHECK((rec - m.Z).cwiseAbs().maxCoeff() < 1e-12 * L);
    CHECK(spec.lambda.minCoeff() == doctest::Approx(2.9));
  }
}

TEST_CASE("checked singular values agree with Jacobi on degenerate rings") {
  ModelTemplate ring;
  for (int L : {16, 32}) {
    for (double mu : {-1.9, 0.3, 2.5}) {
      const Matrix Z = build_model(ring.at(L, mu, -1.3)).Z;
      const Vector s = singular_values(Z);
      const Vector j = Eigen::JacobiSVD<Matrix>(Z).singularValues();
      CHECK((s - j).cwiseAbs().maxCoeff() < 1e-12 * L);
    }
  }
}
