#pragma once

#include "qgraph/metric_graph.hpp"
#include "qgraph/tolerances.hpp"
#include "qgraph/types.hpp"
#include "qgraph/vertex_conditions.hpp"

namespace qgraph {

/// A Hermitian matrix attached to the spectral parameter it was evaluated at.
struct KappaMatrix {
  double kappa = 0.0;
  Matrix value;
};

/// The symmetry Q (Q^2 = 1, Q* = Q) diagonalizing M(kappa, a): identity on
/// the external block, [[1,1],[1,-1]]/sqrt(2) across each internal edge pair.
RealMatrix q_symmetry(const BoundaryLayout& layout);

/// Weyl-type matrix M(kappa, a) on the boundary space, built blockwise from
/// its diagonalization Q diag(-kappa, lambda, mu) Q with
/// lambda = -kappa tanh(kappa a/2), mu = -kappa/tanh(kappa a/2).
/// At kappa = 0 the analytic limit is used: zero external block, internal
/// blocks [[-1/a, 1/a], [1/a, -1/a]].
RealMatrix m_matrix(const MetricGraph& g, double kappa);

/// Affine comparison correction M1(a): zero external block, internal blocks
/// [[1/a, 1/a], [1/a, 1/a]].
RealMatrix m1_matrix(const MetricGraph& g);

/// L(kappa, a) = L + Pperp M(kappa, a) Pperp as a matrix on ran P-perp
/// (reduced coordinates, p x p).
KappaMatrix l_of_kappa(const CanonicalForm& cf, const MetricGraph& g, double kappa);

/// R(kappa, a) = L + Pperp M1(a) Pperp - kappa Pperp on ran P-perp.
KappaMatrix r_of_kappa(const CanonicalForm& cf, const MetricGraph& g, double kappa);

enum class ZScaling {
  Plain,         // the textbook entries; rejects kappa * a_max > 300
  ColumnScaled,  // e^{kappa a} columns rescaled; same determinant zero set
};

/// Secular matrix Z(i kappa, a, A, B) = A X - kappa B Y for kappa > 0;
/// det Z = 0 exactly at the negative eigenvalues -kappa^2.
Matrix secular_matrix_z(const BoundarySpec& spec, const MetricGraph& g, double kappa,
                        ZScaling scaling = ZScaling::Plain);

/// tau(0, a) = AB* + B M(0, a) B* compressed to ran B (r x r).  Its kernel
/// dimension matches that of L(0, a) on ran P-perp.
Matrix tau_zero(const BoundarySpec& spec, const MetricGraph& g);

}  // namespace qgraph
