#include "qgraph/spectral_core.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "qgraph/linalg.hpp"
#include "qgraph/transcendental.hpp"

namespace qgraph {

RealMatrix q_symmetry(const BoundaryLayout& layout) {
  RealMatrix q = RealMatrix::Zero(layout.dimension, layout.dimension);
  for (int e = 0; e < layout.n_external; ++e) q(e, e) = 1.0;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < layout.n_internal; ++i) {
    const int lo = layout.initial_slot(i);
    const int hi = layout.terminal_slot(i);
    q(lo, lo) = s;
    q(lo, hi) = s;
    q(hi, lo) = s;
    q(hi, hi) = -s;
  }
  return q;
}

RealMatrix m_matrix(const MetricGraph& g, double kappa) {
  if (kappa < 0.0) throw InputError("m_matrix: kappa must be nonnegative");
  const BoundaryLayout layout = boundary_layout(g);
  RealMatrix m = RealMatrix::Zero(layout.dimension, layout.dimension);
  for (int e = 0; e < layout.n_external; ++e) m(e, e) = -kappa;
  for (int i = 0; i < layout.n_internal; ++i) {
    const double a = g.internal_edges()[i].length;
    // Q diag(lambda, mu) Q across the pair; at kappa = 0 this is the
    // analytic limit [[-1/a, 1/a], [1/a, -1/a]].
    double diag, off;
    if (kappa == 0.0) {
      diag = -1.0 / a;
      off = 1.0 / a;
    } else {
      const double lambda = -kappa_tanh(kappa, a);
      const double mu = -kappa_coth(kappa, a);
      diag = 0.5 * (lambda + mu);
      off = 0.5 * (lambda - mu);
    }
    const int lo = layout.initial_slot(i);
    const int hi = layout.terminal_slot(i);
    m(lo, lo) = diag;
    m(hi, hi) = diag;
    m(lo, hi) = off;
    m(hi, lo) = off;
  }
  return m;
}

RealMatrix m1_matrix(const MetricGraph& g) {
  const BoundaryLayout layout = boundary_layout(g);
  RealMatrix m = RealMatrix::Zero(layout.dimension, layout.dimension);
  for (int i = 0; i < layout.n_internal; ++i) {
    const double inv_a = 1.0 / g.internal_edges()[i].length;
    const int lo = layout.initial_slot(i);
    const int hi = layout.terminal_slot(i);
    m(lo, lo) = inv_a;
    m(hi, hi) = inv_a;
    m(lo, hi) = inv_a;
    m(hi, lo) = inv_a;
  }
  return m;
}

KappaMatrix l_of_kappa(const CanonicalForm& cf, const MetricGraph& g, double kappa) {
  if (kappa < 0.0) throw InputError("l_of_kappa: kappa must be nonnegative");
  const Matrix m = m_matrix(g, kappa).cast<Complex>();
  return {kappa, linalg::symmetrized(cf.L_reduced + cf.basis.adjoint() * m * cf.basis)};
}

KappaMatrix r_of_kappa(const CanonicalForm& cf, const MetricGraph& g, double kappa) {
  if (kappa < 0.0) throw InputError("r_of_kappa: kappa must be nonnegative");
  const Matrix m1 = m1_matrix(g).cast<Complex>();
  Matrix value = cf.L_reduced + cf.basis.adjoint() * m1 * cf.basis;
  value.diagonal().array() -= kappa;
  return {kappa, linalg::symmetrized(value)};
}

Matrix secular_matrix_z(const BoundarySpec& spec, const MetricGraph& g, double kappa,
                        ZScaling scaling) {
  if (!(kappa > 0.0)) throw InputError("secular_matrix_z: kappa must be positive");
  const BoundaryLayout& layout = spec.layout;
  const int d = layout.dimension;
  const auto extrema = edge_length_extrema(g);
  if (scaling == ZScaling::Plain && extrema && kappa * extrema->second > 300.0)
    throw NumericalError(
        "secular_matrix_z: kappa * a_max too large for the exponential entries; "
        "use l_of_kappa instead or request column scaling");

  // Traces of the decaying/growing ansatz: columns ordered like the boundary
  // space (s over external, alpha and beta over internal edges).  Column
  // scaling multiplies the beta column by e^{-kappa a}, which leaves the
  // determinant zero set unchanged.
  RealMatrix x = RealMatrix::Zero(d, d);
  RealMatrix y = RealMatrix::Zero(d, d);
  for (int e = 0; e < layout.n_external; ++e) {
    x(e, e) = 1.0;
    y(e, e) = 1.0;
  }
  for (int i = 0; i < layout.n_internal; ++i) {
    const double a = g.internal_edges()[i].length;
    const int lo = layout.initial_slot(i);
    const int hi = layout.terminal_slot(i);
    const double decay = std::exp(-kappa * a);
    const double grow_lo = scaling == ZScaling::ColumnScaled ? decay : 1.0;
    const double grow_hi = scaling == ZScaling::ColumnScaled ? 1.0 : std::exp(kappa * a);
    x(lo, lo) = 1.0;
    x(lo, hi) = grow_lo;
    x(hi, lo) = decay;
    x(hi, hi) = grow_hi;
    y(lo, lo) = 1.0;
    y(lo, hi) = -grow_lo;
    y(hi, lo) = -decay;
    y(hi, hi) = grow_hi;
  }
  return spec.A * x.cast<Complex>() - kappa * spec.B * y.cast<Complex>();
}

Matrix tau_zero(const BoundarySpec& spec, const MetricGraph& g) {
  const int d = spec.dimension();
  Eigen::JacobiSVD<Matrix> svd(spec.B, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double cutoff = Tolerances::rank_cutoff(d, sv.size() ? sv(0) : 0.0);
  int rank_b = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank_b;
  const Matrix range_b = svd.matrixU().leftCols(rank_b);

  const Matrix tau =
      spec.A * spec.B.adjoint() + spec.B * m_matrix(g, 0.0).cast<Complex>() * spec.B.adjoint();
  return linalg::symmetrized(range_b.adjoint() * tau * range_b);
}

}  // namespace qgraph
