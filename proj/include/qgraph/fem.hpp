#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "qgraph/metric_graph.hpp"
#include "qgraph/tolerances.hpp"
#include "qgraph/types.hpp"
#include "qgraph/vertex_conditions.hpp"

namespace qgraph {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using RealSparseMatrix = Eigen::SparseMatrix<double>;

/// Piecewise-linear discretization of the quadratic form
///   u -> ||u'||^2 - <L trace(u), trace(u)>   on  {u : P trace(u) = 0},
/// with external edges truncated at length `truncation` (homogeneous
/// Dirichlet at the far end).  Edges do not share nodes; the vertex coupling
/// enters only through the trace term and the constraint.
struct Discretization {
  int total_nodes = 0;            // free nodal dofs before the constraint
  RealSparseMatrix stiffness;     // derivative term only, PSD
  RealSparseMatrix mass;          // PD
  std::vector<int> trace_dofs;    // boundary-space slot -> nodal dof
  SparseMatrix constraint_basis;  // total_nodes x reduced_dim, orthonormal columns

  // Constraint applied and trace term included: the pencil actually solved.
  SparseMatrix reduced_stiffness;
  SparseMatrix reduced_mass;

  double shift = -1.0;  // certified below the lowest pencil eigenvalue

  int reduced_dim() const { return static_cast<int>(constraint_basis.cols()); }
};

/// Truncation length tied to the slowest certified decay rate:
/// max(20/kappa_est, 10 a_max), kappa_est the combined lower bound of the
/// smallest root, floored at 1.
double default_truncation(const MetricGraph& g, const CanonicalForm& cf);

/// nodes_per_unit >= 10; truncation is required (> 0) iff the graph has
/// external edges.  Refuses meshes beyond 1e6 nodes.
Discretization discretize(const MetricGraph& g, const CanonicalForm& cf, int nodes_per_unit,
                          double truncation = 0.0);

/// Lowest k eigenvalues of the constrained pencil, ascending.  Small
/// problems are solved densely; large ones by shift-inverted Lanczos with
/// deflated restarts (one eigenpair per restart, so multiplicities resolve).
std::vector<double> fem_spectrum(const Discretization& disc, int k);

/// Poincare constant C = sqrt(lambda_1) of -Delta(P, Pperp) on a compact
/// graph; requires the Poincare criterion to hold.
double poincare_constant(const MetricGraph& g, const Matrix& P, int nodes_per_unit,
                         const Tolerances& tol = {});

}  // namespace qgraph
