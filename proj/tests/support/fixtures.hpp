#pragma once

// Shared graph builders, closed-form reference values, and random problem
// generators for the test suites.

#include <random>
#include <vector>

#include "qgraph/linalg.hpp"
#include "qgraph/metric_graph.hpp"
#include "qgraph/vertex_conditions.hpp"

namespace fixtures {

using namespace qgraph;

/// Single internal edge [0, a]; d = 2.
inline MetricGraph interval(double a) {
  return MetricGraph({"v1", "v2"}, {{"i1", "v1", "v2", a}}, {});
}

/// Star graph: `legs` external edges at one vertex; d = legs.
inline MetricGraph star(int legs = 3) {
  std::vector<ExternalEdge> ext;
  for (int i = 0; i < legs; ++i) ext.push_back({"e" + std::to_string(i + 1), "c"});
  return MetricGraph({"c"}, {}, ext);
}

/// Two external edges joined by one internal edge of length a; d = 4.
inline MetricGraph dumbbell(double a) {
  return MetricGraph({"v1", "v2"}, {{"i3", "v1", "v2", a}},
                     {{"e1", "v1"}, {"e2", "v2"}});
}

/// delta'-couplings of strength gamma at both dumbbell vertices.
inline BoundarySpec dumbbell_delta_prime(const MetricGraph& g, double gamma) {
  std::map<std::string, VertexCondition> conds;
  conds.emplace("v1", VertexCondition::delta_prime(gamma));
  conds.emplace("v2", VertexCondition::delta_prime(gamma));
  return assemble(g, conds);
}

/// The nonlocal interval coupling L_c = (c/2) [[1,-1],[-1,1]].
inline Matrix l_c(double c) {
  Matrix l(2, 2);
  l << 0.5 * c, -0.5 * c, -0.5 * c, 0.5 * c;
  return l;
}

/// Interval spec with B = identity and A = the given Hermitian L (so P = 0).
inline BoundarySpec interval_with_l(const MetricGraph& g, const Matrix& l) {
  const BoundaryLayout layout = boundary_layout(g);
  return make_spec(l, Matrix::Identity(2, 2), layout);
}

/// Closed forms for the delta' dumbbell: eigenvalues of L(0,a) and R(0,a).
/// For gamma < 0 the two positive ones of each are the last two entries.
struct DumbbellEigs {
  std::vector<double> l0;  // eigenvalues of L(0,a), unsorted closed forms
  std::vector<double> r0;  // eigenvalues of R(0,a)
};

inline DumbbellEigs dumbbell_closed_forms(double gamma, double a) {
  const double s = std::sqrt(a * a + gamma * gamma);
  DumbbellEigs e;
  e.l0 = {0.0, (-a - gamma + s) / (a * gamma), -(a + gamma + s) / (a * gamma), -2.0 / gamma};
  e.r0 = {0.0, (-a + gamma + s) / (a * gamma), -(a - gamma + s) / (a * gamma), -2.0 / gamma};
  return e;
}

inline Matrix random_unitary(std::mt19937& rng, int d) {
  std::normal_distribution<double> gauss;
  Matrix z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
  return Eigen::HouseholderQR<Matrix>(z).householderQ();
}

inline Matrix random_hermitian(std::mt19937& rng, int d, double scale = 1.0) {
  std::normal_distribution<double> gauss;
  Matrix h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) h(i, j) = Complex(gauss(rng), gauss(rng));
  return scale * 0.5 * (h + h.adjoint()).eval();
}

struct RandomProblem {
  MetricGraph g;
  BoundarySpec spec;
};

/// Random metric graph (d <= max_d, lengths in [0.2, 5]) with random
/// admissible conditions: (A, B) = C (L + P, Pperp) for a random projector P,
/// random Hermitian L on ran Pperp, and a random well-conditioned C.
inline RandomProblem random_problem(std::mt19937& rng, int max_d = 10) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> length(0.2, 5.0);

  int n_ext = 0, n_int = 0;
  do {
    n_ext = static_cast<int>(unif(rng) * 4);     // 0..3
    n_int = static_cast<int>(unif(rng) * 3.999);  // 0..3
  } while (n_ext + 2 * n_int > max_d || n_ext + n_int == 0);

  const int n_vert = 1 + static_cast<int>(unif(rng) * 3);  // 1..3
  std::vector<std::string> verts;
  for (int v = 0; v < n_vert; ++v) verts.push_back("v" + std::to_string(v));
  auto pick = [&]() { return verts[static_cast<size_t>(unif(rng) * n_vert) % n_vert]; };

  std::vector<InternalEdge> internals;
  for (int i = 0; i < n_int; ++i)
    internals.push_back({"i" + std::to_string(i), pick(), pick(), length(rng)});
  std::vector<ExternalEdge> externals;
  for (int e = 0; e < n_ext; ++e) externals.push_back({"e" + std::to_string(e), pick()});

  MetricGraph g(verts, internals, externals);
  const BoundaryLayout layout = boundary_layout(g);
  const int d = layout.dimension;

  const int p = static_cast<int>(unif(rng) * (d + 1)) % (d + 1);  // rank of Pperp, 0..d
  const Matrix u = random_unitary(rng, d);
  const Matrix basis = u.leftCols(p);
  const Matrix p_perp = basis * basis.adjoint();
  const Matrix proj = Matrix::Identity(d, d) - p_perp;
  const Matrix l = basis * random_hermitian(rng, p, 2.0) * basis.adjoint();

  Matrix c = Matrix::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c(i, j) += Complex(0.3 * (unif(rng) - 0.5), 0.3 * (unif(rng) - 0.5));

  return {std::move(g), make_spec(c * (l + proj), c * p_perp, layout)};
}

/// Like random_problem, but with random per-vertex presets; produces the
/// structured kernels (Kirchhoff zero modes, degenerate couplings) that pure
/// random (P, L) draws almost never hit.
inline RandomProblem random_preset_problem(std::mt19937& rng, int max_d = 10) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> length(0.2, 5.0);
  std::uniform_real_distribution<double> strength(-3.0, 3.0);

  int n_ext = 0, n_int = 0;
  do {
    n_ext = static_cast<int>(unif(rng) * 4);
    n_int = static_cast<int>(unif(rng) * 3.999);
  } while (n_ext + 2 * n_int > max_d || n_ext + n_int == 0);

  const int n_vert = 1 + static_cast<int>(unif(rng) * 3);
  std::vector<std::string> verts;
  for (int v = 0; v < n_vert; ++v) verts.push_back("v" + std::to_string(v));
  auto pick = [&]() { return verts[static_cast<size_t>(unif(rng) * n_vert) % n_vert]; };

  std::vector<InternalEdge> internals;
  for (int i = 0; i < n_int; ++i)
    internals.push_back({"i" + std::to_string(i), pick(), pick(), length(rng)});
  std::vector<ExternalEdge> externals;
  for (int e = 0; e < n_ext; ++e) externals.push_back({"e" + std::to_string(e), pick()});
  MetricGraph g(verts, internals, externals);

  std::map<std::string, VertexCondition> conds;
  for (const auto& v : verts) {
    switch (static_cast<int>(unif(rng) * 5.0) % 5) {
      case 0: conds.emplace(v, VertexCondition::dirichlet()); break;
      case 1: conds.emplace(v, VertexCondition::neumann()); break;
      case 2: conds.emplace(v, VertexCondition::kirchhoff()); break;
      case 3: conds.emplace(v, VertexCondition::delta(strength(rng))); break;
      default: {
        double gamma = strength(rng);
        if (std::abs(gamma) < 0.1) gamma = 0.5;
        conds.emplace(v, VertexCondition::delta_prime(gamma));
      }
    }
  }
  BoundarySpec spec = assemble(g, conds);
  return {std::move(g), std::move(spec)};
}

}  // namespace fixtures
