#include <doctest.h>

#include <cmath>
#include <map>

#include "qgraph/fem.hpp"
#include "qgraph/nonlinear_eigs.hpp"
#include "qgraph/transcendental.hpp"
#include "support/fixtures.hpp"

using namespace qgraph;

namespace {

CanonicalForm dirichlet_interval(const MetricGraph& g) {
  return canonical_form(
      make_spec(Matrix::Identity(2, 2), Matrix::Zero(2, 2), boundary_layout(g)));
}

CanonicalForm neumann_interval(const MetricGraph& g) {
  return canonical_form(
      make_spec(Matrix::Zero(2, 2), Matrix::Identity(2, 2), boundary_layout(g)));
}

}  // namespace

TEST_CASE("classical interval eigenvalues") {
  SUBCASE("Dirichlet on [0, pi]: lambda_1 = 1") {
    const MetricGraph g = fixtures::interval(std::acos(-1.0));
    const Discretization disc = discretize(g, dirichlet_interval(g), 1000);
    const auto eigs = fem_spectrum(disc, 1);
    CHECK(std::abs(eigs[0] - 1.0) <= 1e-5);
  }
  SUBCASE("Neumann on [0, 1]: lambda_1 = 0") {
    const MetricGraph g = fixtures::interval(1.0);
    const Discretization disc = discretize(g, neumann_interval(g), 100);
    const auto eigs = fem_spectrum(disc, 2);
    CHECK(std::abs(eigs[0]) <= 1e-8);
    CHECK(eigs[1] > 1.0);  // next mode is pi^2
  }
  SUBCASE("Dirichlet/Neumann on [0, 1]: lambda_1 = (pi/2)^2") {
    const MetricGraph g = fixtures::interval(1.0);
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;  // Dirichlet at the initial end
    b(1, 1) = 1.0;  // Neumann at the terminal end
    const CanonicalForm cf = canonical_form(make_spec(a, b, boundary_layout(g)));
    const Discretization disc = discretize(g, cf, 1000);
    const auto eigs = fem_spectrum(disc, 1);
    const double quarter_mode = std::pow(0.5 * std::acos(-1.0), 2);
    CHECK(std::abs(eigs[0] - quarter_mode) <= 1e-4);
  }
}

TEST_CASE("second-order mesh convergence on the Dirichlet interval") {
  const MetricGraph g = fixtures::interval(std::acos(-1.0));
  const CanonicalForm cf = dirichlet_interval(g);
  double err_coarse = std::abs(fem_spectrum(discretize(g, cf, 100), 1)[0] - 1.0);
  double err_mid = std::abs(fem_spectrum(discretize(g, cf, 200), 1)[0] - 1.0);
  double err_fine = std::abs(fem_spectrum(discretize(g, cf, 400), 1)[0] - 1.0);
  CHECK(err_coarse / err_mid == doctest::Approx(4.0).epsilon(0.25));
  CHECK(err_mid / err_fine == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("interval coupling: FEM reproduces the transcendental eigenvalue") {
  const double c = 3.0, a = 1.0;
  const MetricGraph g = fixtures::interval(a);
  const CanonicalForm cf = canonical_form(fixtures::interval_with_l(g, fixtures::l_c(c)));
  const Discretization disc = discretize(g, cf, 2000);
  const double kappa = eta(c - 2.0 / a, a).root;
  const double expected = -kappa * kappa;
  const auto eigs = fem_spectrum(disc, 1);
  CHECK(std::abs(eigs[0] - expected) <= 1e-3 * std::abs(expected));
}

TEST_CASE("delta' dumbbell: FEM matches the nonlinear oracle") {
  const MetricGraph g = fixtures::dumbbell(1.0);
  const CanonicalForm cf = canonical_form(fixtures::dumbbell_delta_prime(g, -1.0));
  const NegativeSpectrum oracle = negative_spectrum(cf, g);
  REQUIRE(oracle.total_multiplicity() == 2);
  const Discretization disc = discretize(g, cf, 500, 20.0);
  const auto eigs = fem_spectrum(disc, 2);
  // ascending FEM eigenvalues pair with descending kappas
  const double e1 = -std::pow(oracle.roots[0].kappa, 2);
  const double e2 = -std::pow(oracle.roots[1].kappa, 2);
  CHECK(std::abs(eigs[0] - e1) <= 1e-3 * std::abs(e1));
  CHECK(std::abs(eigs[1] - e2) <= 1e-3 * std::abs(e2));
}

TEST_CASE("kirchhoff compact graphs keep the constants at zero") {
  SUBCASE("single loop") {
    const MetricGraph g({"u"}, {{"loop", "u", "u", 1.0}}, {});
    std::map<std::string, VertexCondition> conds;
    conds.emplace("u", VertexCondition::kirchhoff());
    const CanonicalForm cf = canonical_form(assemble(g, conds));
    const Discretization disc = discretize(g, cf, 50);
    CHECK(std::abs(fem_spectrum(disc, 1)[0]) <= 1e-8);
  }
  SUBCASE("two disjoint loops: a double zero mode") {
    const MetricGraph g({"u", "w"}, {{"l1", "u", "u", 1.0}, {"l2", "w", "w", 1.3}}, {});
    std::map<std::string, VertexCondition> conds;
    conds.emplace("u", VertexCondition::kirchhoff());
    conds.emplace("w", VertexCondition::kirchhoff());
    const CanonicalForm cf = canonical_form(assemble(g, conds));
    CHECK(zero_mode_dimension(cf, g) == 2);
    const Discretization disc = discretize(g, cf, 40);
    const auto eigs = fem_spectrum(disc, 3);
    CHECK(std::abs(eigs[0]) <= 1e-8);
    CHECK(std::abs(eigs[1]) <= 1e-8);
    CHECK(eigs[2] > 1.0);
  }
}

TEST_CASE("truncation robustness once T kappa >= 20") {
  const MetricGraph g = fixtures::dumbbell(1.0);
  const CanonicalForm cf = canonical_form(fixtures::dumbbell_delta_prime(g, -1.0));
  // kappa_2 ~ 1.5, so T = 15 puts T kappa beyond 20 already
  const auto base = fem_spectrum(discretize(g, cf, 200, 15.0), 2);
  const auto doubled = fem_spectrum(discretize(g, cf, 200, 30.0), 2);
  CHECK(std::abs(base[0] - doubled[0]) <= 1e-8);
  CHECK(std::abs(base[1] - doubled[1]) <= 1e-8);
}

TEST_CASE("default truncation tracks the decay rate") {
  const MetricGraph g = fixtures::dumbbell(1.0);
  const CanonicalForm cf = canonical_form(fixtures::dumbbell_delta_prime(g, -1.0));
  const double t = default_truncation(g, cf);
  CHECK(t >= 10.0);   // 10 a_max floor
  CHECK(t <= 20.0);   // 20 / kappa_est with kappa_est ~ sqrt(2)
}

TEST_CASE("constraint basis satisfies the trace condition") {
  const MetricGraph g = fixtures::interval(1.0);
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  const CanonicalForm cf = canonical_form(make_spec(a, b, boundary_layout(g)));
  const Discretization disc = discretize(g, cf, 50);
  // P applied to the trace rows of every basis column vanishes
  Matrix trace_rows(2, disc.reduced_dim());
  const Matrix dense = Matrix(disc.constraint_basis);
  trace_rows.row(0) = dense.row(disc.trace_dofs[0]);
  trace_rows.row(1) = dense.row(disc.trace_dofs[1]);
  CHECK((cf.P * trace_rows).cwiseAbs().maxCoeff() <= 1e-12);
  // stiffness PSD, mass PD on a random direction
  RealVector v = RealVector::LinSpaced(disc.total_nodes, -1.0, 1.0);
  CHECK(v.dot(disc.stiffness * v) >= -1e-12);
  CHECK(v.dot(disc.mass * v) > 0.0);
}

TEST_CASE("poincare constants") {
  SUBCASE("Dirichlet at one end of [0,1]: C = pi/2") {
    const MetricGraph g = fixtures::interval(1.0);
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    const double c = poincare_constant(g, p, 2000);
    CHECK(std::abs(c - 0.5 * std::acos(-1.0)) <= 1e-3);
  }
  SUBCASE("Dirichlet at both ends of [0,1]: C = pi") {
    const MetricGraph g = fixtures::interval(1.0);
    const double c = poincare_constant(g, Matrix::Identity(2, 2), 2000);
    CHECK(std::abs(c - std::acos(-1.0)) <= 1e-3);
  }
  SUBCASE("Y graph with Dirichlet leaves: convergence study") {
    const MetricGraph g({"c", "x", "y", "z"},
                        {{"i1", "c", "x", 1.0}, {"i2", "c", "y", 1.0}, {"i3", "c", "z", 1.0}}, {});
    std::map<std::string, VertexCondition> conds;
    conds.emplace("c", VertexCondition::kirchhoff());
    conds.emplace("x", VertexCondition::dirichlet());
    conds.emplace("y", VertexCondition::dirichlet());
    conds.emplace("z", VertexCondition::dirichlet());
    const CanonicalForm cf = canonical_form(assemble(g, conds));

    const double c500 = poincare_constant(g, cf.P, 500);
    const double c1000 = poincare_constant(g, cf.P, 1000);
    const double c2000 = poincare_constant(g, cf.P, 2000);
    // second-order Richardson: consecutive gaps shrink by ~4
    const double ratio = (c500 - c1000) / (c1000 - c2000);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.3));
    // the symmetric mode cos(k l) = 0 pins lambda_1 = (pi/2)^2
    CHECK(std::abs(c2000 - 0.5 * std::acos(-1.0)) <= 1e-3);
  }
  SUBCASE("criterion failure raises with the defect") {
    const MetricGraph loop({"u"}, {{"loop", "u", "u", 1.0}}, {});
    std::map<std::string, VertexCondition> conds;
    conds.emplace("u", VertexCondition::kirchhoff());
    const CanonicalForm cf = canonical_form(assemble(loop, conds));
    CHECK_THROWS_WITH_AS(poincare_constant(loop, cf.P, 100),
                         "poincare_constant: criterion fails, defect 1 (zero mode present)",
                         InputError);
  }
}

TEST_CASE("discretization guards") {
  const MetricGraph g = fixtures::interval(1.0);
  const CanonicalForm cf = dirichlet_interval(g);
  CHECK_THROWS_AS(discretize(g, cf, 5), InputError);          // too coarse
  CHECK_THROWS_AS(discretize(g, cf, 2'000'000), NumericalError);  // memory guard

  const MetricGraph star = fixtures::star(2);
  const CanonicalForm cf_star = canonical_form(
      make_spec(Matrix::Identity(2, 2), Matrix::Identity(2, 2), boundary_layout(star)));
  CHECK_THROWS_AS(discretize(star, cf_star, 100), InputError);  // truncation missing

  const Discretization disc = discretize(g, cf, 20);
  CHECK_THROWS_AS(fem_spectrum(disc, 0), InputError);
  CHECK_THROWS_AS(fem_spectrum(disc, disc.reduced_dim() + 1), InputError);
}
