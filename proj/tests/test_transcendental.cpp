#include <doctest.h>

#include <cmath>
#include <random>

#include "qgraph/errors.hpp"
#include "qgraph/transcendental.hpp"

using namespace qgraph;

namespace {

// Independent residuals of the defining equations.
double eta_defect(double kappa, double l, double a) { return kappa_coth(kappa, a) - 2.0 / a - l; }
double nu_defect(double kappa, double m, double a) { return kappa_tanh(kappa, a) - m; }

}  // namespace

TEST_CASE("eta inverts a forward-evaluated point") {
  // kappa = 1, a = 2 gives l = 1/tanh(1) - 1; eta must take it back.
  const double l = 1.0 / std::tanh(1.0) - 1.0;
  CHECK(l == doctest::Approx(0.3130352854993312).epsilon(1e-12));
  const RootResult r = eta(l, 2.0);
  CHECK(std::abs(r.root - 1.0) <= 1e-10);
  CHECK(std::abs(r.residual) <= 1e-12 * (1.0 + l));
}

TEST_CASE("nu inverts a forward-evaluated point") {
  const double m = std::tanh(1.0);
  CHECK(m == doctest::Approx(0.7615941559557649).epsilon(1e-12));
  const RootResult r = nu(m, 2.0);
  CHECK(std::abs(r.root - 1.0) <= 1e-10);
  CHECK(std::abs(r.residual) <= 1e-12 * (1.0 + m));
}

TEST_CASE("large-a limits collapse to the identity") {
  CHECK(std::abs(eta(0.7, 1e8).root - 0.7) <= 3e-8);
  CHECK(std::abs(nu(0.7, 1e8).root - 0.7) <= 3e-8);
  // The sentinel skips iteration entirely.
  CHECK(eta(0.7, kNoInternalEdges).root == 0.7);
  CHECK(nu(0.7, kNoInternalEdges).root == 0.7);
  CHECK(eta(0.7, kNoInternalEdges).iterations == 0);
}

TEST_CASE("xi closed form") {
  CHECK(xi(1.0, 1.0) == 4.0);
  CHECK(xi(0.125, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // continuity at the breakpoint m = 1/(2a)
  for (double a : {0.5, 1.0, 3.7}) {
    const double m = 1.0 / (2.0 * a);
    CHECK(std::sqrt(8.0 * m / a) == doctest::Approx(4.0 * m).epsilon(1e-14));
    CHECK(xi(m, a) == doctest::Approx(2.0 / a).epsilon(1e-14));
  }
}

TEST_CASE("residuals stay below tolerance over random inputs") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, expo(rng));
    const double a = std::pow(10.0, expo(rng));
    const RootResult re = eta(x, a);
    CHECK(std::abs(eta_defect(re.root, x, a)) <= 1e-12 * (1.0 + x));
    CHECK(re.root >= x);
    CHECK(re.root <= x + 2.0 / a + 1e-12);
    const RootResult rn = nu(x, a);
    CHECK(std::abs(nu_defect(rn.root, x, a)) <= 1e-12 * (1.0 + x));
    CHECK(rn.root >= x);
    CHECK(rn.root <= x + 2.0 / a + 1e-12);
  }
}

TEST_CASE("monotonicity in the spectral datum") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(0.05, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double a = unif(rng);
    const double lo = unif(rng);
    const double hi = lo + unif(rng);
    CHECK(eta(lo, a).root < eta(hi, a).root);
    CHECK(nu(lo, a).root < nu(hi, a).root);
    // strict excess over the datum for finite a
    CHECK(eta(lo, a).root > lo);
    CHECK(nu(lo, a).root >= lo);
  }
}

TEST_CASE("xi dominates nu") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unif(0.05, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double m = unif(rng);
    const double a = unif(rng);
    CHECK(xi(m, a) >= nu(m, a).root - 1e-12);
  }
}

TEST_CASE("interval coupling root satisfies the original equation") {
  // With c - 2/a > 0 the negative eigenvalue is -eta(c - 2/a, a)^2, the
  // solution of kappa/tanh(kappa a/2) = c.
  const double c = 3.0, a = 1.0;
  const double kappa = eta(c - 2.0 / a, a).root;
  CHECK(kappa_coth(kappa, a) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(eta(0.0, 1.0), InputError);
  CHECK_THROWS_AS(eta(-1.0, 1.0), InputError);
  CHECK_THROWS_AS(eta(1.0, 0.0), InputError);
  CHECK_THROWS_AS(nu(0.0, 1.0), InputError);
  CHECK_THROWS_AS(nu(1.0, -2.0), InputError);
  CHECK_THROWS_AS(xi(0.0, 1.0), InputError);
  CHECK_THROWS_AS(xi(1.0, 0.0), InputError);
}
