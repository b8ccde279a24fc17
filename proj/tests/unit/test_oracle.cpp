#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fermigraph/error.hpp"
#include "fermigraph/gsfid.hpp"
#include "fermigraph/oracle.hpp"
#include "generators.hpp"

using namespace fermigraph;

TEST_CASE("fermionic sign rule on bitmasks") {
  const auto a = fock::create(2, 0b0011u);
  REQUIRE(a);
  CHECK(a->mask == 0b0111u);
  CHECK(a->sign == 1);
  const auto b = fock::create(1, 0b0101u);
  REQUIRE(b);
  CHECK(b->sign == -1);
  CHECK_FALSE(fock::create(0, 0b1u));
  CHECK_FALSE(fock::annihilate(3, 0b0111u));
  const auto c = fock::annihilate(2, 0b0111u);
  REQUIRE(c);
  CHECK(c->mask == 0b0011u);
  CHECK(c->sign == 1);
  CHECK(fock::parity_of(0b1011u) == -1);
}

TEST_CASE("decoupled modes fill completely for positive mu") {
  for (int L : {2, 3, 5}) {
    CouplingModel m;
    const double mu = 0.8;
    m.A = -mu * Matrix::Identity(L, L);
    m.B = Matrix::Zero(L, L);
    m.Z = m.A;
    const OracleResult o = fock_hamiltonian_gs(m);
    CHECK(o.e0 == doctest::Approx(-mu * L));
    CHECK(o.parity == (L % 2 ? -1 : 1));
    for (int i = 0; i < L; ++i) CHECK(o.densities(i) == doctest::Approx(1.0));
  }
}

TEST_CASE("size guard") {
  ModelParams p;
  p.L = 13;
  p.range = 1;
  try {
    fock_hamiltonian_gs(build_model(p));
    FAIL("expected SizeGuard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeGuard);
  }
}

TEST_CASE("overlaps") {
  ModelParams p;
  p.L = 5;
  p.range = 2;
  p.mu = 0.3;
  p.gamma = 0.9;
  const OracleResult o = fock_hamiltonian_gs(build_model(p));
  CHECK(overlap(o.gs, o.gs) == doctest::Approx(1.0));
  FockState even{2, Vector::Zero(4)};
  FockState odd{2, Vector::Zero(4)};
  even.amplitudes(0) = 1.0;
  odd.amplitudes(1) = 1.0;
  CHECK(overlap(even, odd) == 0.0);
}

TEST_CASE("coherent-state construction") {
  const FockState vac = gs_from_G(Matrix::Zero(4, 4));
  CHECK(vac.amplitudes(0) == 1.0);
  CHECK(vac.amplitudes.norm() == doctest::Approx(1.0));

  const double g = 0.7;
  Matrix G(2, 2);
  G << 0, g, -g, 0;
  const FockState s = gs_from_G(G);
  const double n = std::sqrt(1.0 + g * g);
  CHECK(s.amplitudes(0) == doctest::Approx(1.0 / n));
  CHECK(s.amplitudes(3) == doctest::Approx(g / n));
  CHECK(s.amplitudes(1) == 0.0);
  CHECK(s.amplitudes(2) == 0.0);
}

TEST_CASE("property: exact energy, parity, Ansatz and annihilation condition") {
  testgen::Gen gen(41);
  int ansatz_checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const ModelParams p = gen.params(2, 8);
    const auto m = build_model(p);
    const auto spec = canonical_decompose(m);
    const PolarForm pf = polar_T(spec, m);
    const OracleResult o = fock_hamiltonian_gs(m);
    if (o.degenerate || !pf.well_defined || pf.gap < 1e-6) continue;
    CAPTURE(p.L);
    CHECK(std::abs(ground_energy_and_gap(m, spec).e0 - o.e0) < 1e-9);
    CHECK(pf.parity == o.parity);
    CHECK(o.gs.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(annihilation_residual(spec, o.gs) < 1e-9);
    if (pf.parity == 1) {
      try {
        const FockState a = gs_from_G(cayley_G(pf.T));
        CHECK(overlap(a, o.gs) > 1.0 - 1e-10);
        ++ansatz_checked;
      } catch (const Error&) {
      }
    }
  }
  CHECK(ansatz_checked > 30);
}

TEST_CASE("property: many-body spectrum is E0 plus sums of single-particle energies") {
  testgen::Gen gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p = gen.params(2, 7);
    const auto m = build_model(p);
    const auto spec = canonical_decompose(m);
    const double e0 = ground_energy_and_gap(m, spec).e0;
    const int L = p.L;
    std::vector<double> expected;
    for (unsigned b = 0; b < (1u << L); ++b) {
      double e = e0;
      for (int j = 0; j < L; ++j) {
        if (b & (1u << j)) e += spec.lambda(j);
      }
      expected.push_back(e);
    }
    const OracleResult o = fock_hamiltonian_gs(m);
    CHECK(testgen::max_abs_diff(testgen::sorted(expected), testgen::to_vector(o.spectrum)) < 1e-8);
  }
}

TEST_CASE("exact densities on small fully-connected rings") {
  ModelTemplate ring;
  // Frozen from an independent exact diagonalization.
  const OracleResult o7 = fock_hamiltonian_gs(build_model(ring.at(7, 2.0, 1.0)));
  const OracleResult o5 = fock_hamiltonian_gs(build_model(ring.at(5, 2.0, 1.0)));
  for (int i = 0; i < 7; ++i) CHECK(o7.densities(i) == doctest::Approx(0.17900291375464736).epsilon(1e-10));
  for (int i = 0; i < 5; ++i) CHECK(o5.densities(i) == doctest::Approx(0.17639320225002106).epsilon(1e-10));
}
