#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fermigraph/ent.hpp"
#include "fermigraph/error.hpp"
#include "fermigraph/oracle.hpp"
#include "generators.hpp"

using namespace fermigraph;

namespace {

SingleSiteRecord ring_site(int L, double mu, double gamma) {
  ModelTemplate ring;
  return single_site(zeta_fully_connected(ring.at(L, mu, gamma)));
}

double sum_lambda(int L, double mu, double gamma) {
  ModelTemplate ring;
  return zeta_fully_connected(ring.at(L, mu, gamma)).moduli.sum();
}

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  testgen::Gen gen(3);
  for (int i = 0; i < 500; ++i) {
    const double n = gen.uniform(0.0, 1.0);
    CHECK(binary_entropy(n) == doctest::Approx(binary_entropy(1.0 - n)));
    CHECK(binary_entropy(n) >= 0.0);
    CHECK(binary_entropy(n) <= 1.0);
  }
}

TEST_CASE("no pairing above mu = 1: product state with zero entropy") {
  for (double mu : {1.01, 1.5, 4.0}) {
    const SingleSiteRecord r = ring_site(101, mu, 0.0);
    CHECK(r.si == 0.0);
    CHECK((r.n == 0.0 || r.n == 1.0));
  }
}

TEST_CASE("half filling on the critical line") {
  double previous = 1.0;
  for (int L : {101, 401, 1601}) {
    const double dev = std::abs(ring_site(L, 1.0, 1.0).n - 0.5);
    CHECK(dev <= previous);
    previous = dev;
  }
  CHECK(previous < 1e-3);
  CHECK(tii_tdl(1.0, 0.7) == 0.0);
}

TEST_CASE("densities agree with exact diagonalization") {
  ModelTemplate ring;
  for (int L : {5, 7}) {
    const OracleResult o = fock_hamiltonian_gs(build_model(ring.at(L, 2.0, 1.0)));
    const SingleSiteRecord r = ring_site(L, 2.0, 1.0);
    for (int i = 0; i < L; ++i) CHECK(r.n == doctest::Approx(o.densities(i)).epsilon(1e-10));
  }
  CHECK(ring_site(7, 2.0, 1.0).n == doctest::Approx(0.17900291375464736).epsilon(1e-10));
}

TEST_CASE("densities agree with exact diagonalization at random points") {
  testgen::Gen gen(77);
  ModelTemplate ring;
  for (int i = 0; i < 20; ++i) {
    const int L = 2 * gen.integer(1, 3) + 1;
    const double mu = gen.uniform(-3, 3), g = gen.uniform(-2, 2);
    const OracleResult o = fock_hamiltonian_gs(build_model(ring.at(L, mu, g)));
    if (o.degenerate) continue;
    CHECK(ring_site(L, mu, g).n == doctest::Approx(o.densities(0)).epsilon(1e-9));
  }
}

TEST_CASE("large ring approaches the closed form") {
  CHECK(std::abs(ring_site(4001, 2.0, 3.0).tii - tii_tdl(2.0, 3.0)) < 1e-2);
  double previous = 1.0;
  for (int L : {501, 1001, 2001, 4001}) {
    const double err = std::abs(ring_site(L, 2.0, 3.0).tii - tii_tdl(2.0, 3.0));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("closed form is continuous across |gamma| = |mu - 1|") {
  for (double m : {-0.8, 0.3, 2.0}) {
    const double seam = tii_tdl(1.0 + m, std::abs(m));
    CHECK(seam == doctest::Approx(2.0 / std::numbers::pi * (m > 0 ? 1 : -1)));
    CHECK(std::abs(tii_tdl(1.0 + m, std::abs(m) * (1 + 1e-9)) - seam) < 1e-8);
    CHECK(std::abs(tii_tdl(1.0 + m, std::abs(m) * (1 - 1e-9)) - seam) < 1e-8);
  }
  CHECK_THROWS_AS(tii_tdl(1.0, 0.0), Error);
  CHECK(tii_tdl(-5.0, 0.0) == doctest::Approx(-1.0));
  CHECK(tii_tdl(5.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("T_ii is the mu derivative of the summed spectrum") {
  testgen::Gen gen(91);
  for (int i = 0; i < 30; ++i) {
    const int L = 2 * gen.integer(5, 100) + 1;
    const double mu = gen.uniform(-2, 3), g = gen.uniform(0.2, 2);
    const double d = 1e-5;
    const double deriv = (sum_lambda(L, mu + d, g) - sum_lambda(L, mu - d, g)) / (2 * d) / L;
    CHECK(std::abs(ring_site(L, mu, g).tii - deriv) < 1e-8);
  }
}

TEST_CASE("degenerate point is rejected") {
  ModelTemplate ring;
  CHECK_THROWS_AS(single_site(zeta_fully_connected(ring.at(10, 1.0, 0.5))), Error);
}

TEST_CASE("entropy derivative shapes") {
  // Symmetric about mu = 1 at gamma = 0.
  const EntropyDerivatives at_crit = entropy_derivative_diag(1.0, 0.5, 1e-5);
  CHECK(std::abs(at_crit.dsi_dmu) < 1e-8);
  CHECK(at_crit.nat_to_bits == doctest::Approx(1.0 / std::log(2.0)));

  // dT_ii/dgamma at small gamma tends to -2 / (pi (mu - 1)) and dSi/dgamma
  // follows the logarithmic law up to a constant factor.
  for (double mu : {2.0, 3.0}) {
    const double m = mu - 1.0;
    double previous = 1.0;
    double last_ratio = 0.0;
    for (double g : {1e-2, 1e-3, 1e-4}) {
      const EntropyDerivatives d = entropy_derivative_diag(mu, g, g * 1e-2);
      const double err = std::abs(d.dtii_dgamma * std::numbers::pi * m / -2.0 - 1.0);
      CHECK(err < previous);
      previous = err;
      const double ratio = d.dsi_dgamma / (d.gamma_law * d.nat_to_bits);
      if (last_ratio != 0.0) CHECK(std::abs(ratio * std::numbers::pi - 1.0) < std::abs(last_ratio * std::numbers::pi - 1.0));
      last_ratio = ratio;
    }
    CHECK(previous < 1e-3);
  }
}
