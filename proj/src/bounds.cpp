#include "qgraph/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgraph/linalg.hpp"
#include "qgraph/transcendental.hpp"

namespace qgraph {

namespace {

double a_min_or_sentinel(const MetricGraph& g) {
  const auto extrema = edge_length_extrema(g);
  return extrema ? extrema->first : kNoInternalEdges;
}

double norm_from_eigs(const RealVector& eigs) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) norm = std::max(norm, std::abs(eigs[i]));
  return norm;
}

/// Positive eigenvalues of a Hermitian matrix, descending, with the report's
/// zero threshold.
std::vector<double> positive_eigs(const Matrix& h, const Tolerances& tol) {
  const RealVector eigs = linalg::hermitian_eigenvalues(h);
  return linalg::positive_descending(eigs, tol.eigenvalue(norm_from_eigs(eigs)));
}

/// Top n values of a descending list; complains when fewer are available
/// (impossible in exact arithmetic since L(0,a) <= L <= R(0,a)).
std::vector<double> take_top(const std::vector<double>& values, int n, const char* label,
                             std::vector<std::string>* errors) {
  std::vector<double> out(values.begin(), values.begin() + std::min<size_t>(n, values.size()));
  if (static_cast<int>(values.size()) < n) {
    const std::string msg = std::string(label) + ": only " + std::to_string(values.size()) +
                            " positive eigenvalues for " + std::to_string(n) + " indices";
    if (errors)
      errors->push_back(msg);
    else
      throw NumericalError(msg);
    out.resize(n, std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace

int count_negative(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol) {
  return static_cast<int>(positive_eigs(l_of_kappa(cf, g, 0.0).value, tol).size());
}

std::vector<ThmInterval> theorem1(const CanonicalForm& cf, const MetricGraph& g,
                                  const Tolerances& tol) {
  const double a_min = a_min_or_sentinel(g);
  std::vector<ThmInterval> out;
  for (double l : positive_eigs(l_of_kappa(cf, g, 0.0).value, tol))
    out.push_back({l, eta(l, a_min, tol).root});
  return out;
}

std::vector<Thm2Bounds> theorem2(const CanonicalForm& cf, const MetricGraph& g,
                                 const Tolerances& tol) {
  const double a_min = a_min_or_sentinel(g);
  const int n = count_negative(cf, g, tol);
  const auto ms = take_top(positive_eigs(cf.L_reduced, tol), n, "theorem2", nullptr);
  std::vector<Thm2Bounds> out;
  for (double m : ms) {
    Thm2Bounds b;
    b.upper = nu(m, a_min, tol).root;
    const double shifted = std::isinf(a_min) ? m : m - 2.0 / a_min;
    if (shifted > 0.0) b.lower = eta(shifted, a_min, tol).root;
    out.push_back(b);
  }
  return out;
}

std::vector<ThmInterval> theorem3(const CanonicalForm& cf, const MetricGraph& g,
                                  const Tolerances& tol) {
  const auto ls = positive_eigs(l_of_kappa(cf, g, 0.0).value, tol);
  const int n = static_cast<int>(ls.size());
  const auto rs = take_top(positive_eigs(r_of_kappa(cf, g, 0.0).value, tol), n, "theorem3", nullptr);
  std::vector<ThmInterval> out;
  for (int i = 0; i < n; ++i) out.push_back({ls[i], rs[i]});
  return out;
}

CoarseBounds coarse_bounds(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol) {
  if (g.num_internal() == 0) throw InputError("coarse_bounds: graph has no internal edges");
  const auto ms = positive_eigs(cf.L_reduced, tol);
  if (ms.empty()) throw InputError("coarse_bounds: operator has no negative eigenvalues");
  const double m1 = ms.front();
  const double a_min = edge_length_extrema(g)->first;

  CoarseBounds out;
  const double x = xi(m1, a_min);
  out.xi_bound = -x * x;
  const int edges = g.num_external() + g.num_internal();
  if (edges >= 2) {
    out.kuchment = m1 <= 1.0 / (2.0 * a_min) ? -4.0 * m1 * edges / a_min : -8.0 * m1 * m1 * edges;
  }
  return out;
}

OptimalityCertificates optimality_certificates(const CanonicalForm& cf, const MetricGraph& g,
                                               const Tolerances& tol) {
  if (g.num_internal() == 0) throw InputError("optimality_certificates: graph has no internal edges");
  const BoundaryLayout& layout = cf.layout;
  const double a_min = edge_length_extrema(g)->first;

  std::vector<int> minimal_edges;
  for (int i = 0; i < g.num_internal(); ++i)
    if (g.internal_edges()[i].length <= a_min * (1.0 + 1e-12)) minimal_edges.push_back(i);

  const double s = 1.0 / std::sqrt(2.0);
  Matrix span_minus = Matrix::Zero(layout.dimension, minimal_edges.size());
  Matrix span_plus = Matrix::Zero(layout.dimension, minimal_edges.size());
  for (size_t k = 0; k < minimal_edges.size(); ++k) {
    const int i = minimal_edges[k];
    span_minus(layout.initial_slot(i), k) = s;
    span_minus(layout.terminal_slot(i), k) = -s;
    span_plus(layout.initial_slot(i), k) = s;
    span_plus(layout.terminal_slot(i), k) = s;
  }

  // Eigenvectors clustered at the top eigenvalue, lifted to the full space.
  const auto top_eigenspace = [&](const Matrix& h) -> Matrix {
    const auto [eigs, vecs] = linalg::hermitian_eigensystem(h);
    const double top = eigs(eigs.size() - 1);
    const double cluster = 1e-8 * (1.0 + norm_from_eigs(eigs));
    int first = static_cast<int>(eigs.size());
    while (first > 0 && top - eigs(first - 1) <= cluster) --first;
    return cf.basis * vecs.rightCols(eigs.size() - first);
  };

  OptimalityCertificates out;
  const auto ls = positive_eigs(l_of_kappa(cf, g, 0.0).value, tol);
  if (ls.empty()) throw InputError("optimality_certificates: operator has no negative eigenvalues");
  out.thm1_cosine =
      linalg::largest_principal_cosine(span_minus, top_eigenspace(l_of_kappa(cf, g, 0.0).value));
  out.thm1 = out.thm1_cosine >= 1.0 - tol.certificate;
  out.thm2_cosine = linalg::largest_principal_cosine(span_plus, top_eigenspace(cf.L_reduced));
  out.thm2 = out.thm2_cosine >= 1.0 - tol.certificate;
  return out;
}

BoundsReport combined(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol) {
  BoundsReport report;
  report.exact = g.num_internal() == 0;

  const auto ls = positive_eigs(l_of_kappa(cf, g, 0.0).value, tol);
  const int n = static_cast<int>(ls.size());
  report.negative_count = n;
  if (n == 0) return report;

  const auto ms = take_top(positive_eigs(cf.L_reduced, tol), n, "L", &report.consistency_errors);
  const auto rs = take_top(positive_eigs(r_of_kappa(cf, g, 0.0).value, tol), n, "R(0,a)",
                           &report.consistency_errors);
  const double a_min = a_min_or_sentinel(g);

  for (int i = 0; i < n; ++i) {
    IndexBounds row;
    row.l = ls[i];
    row.m = ms[i];
    row.r = rs[i];
    row.thm1 = {row.l, eta(row.l, a_min, tol).root};
    if (std::isnan(row.m) || std::isnan(row.r)) {
      // flagged consistency error: keep the index with the bounds that exist
      row.thm2.upper = std::numeric_limits<double>::quiet_NaN();
      row.thm3 = {row.l, row.r};
      row.combined = row.thm1;
      report.rows.push_back(row);
      continue;
    }
    row.thm2.upper = nu(row.m, a_min, tol).root;
    const double shifted = std::isinf(a_min) ? row.m : row.m - 2.0 / a_min;
    if (shifted > 0.0) row.thm2.lower = eta(shifted, a_min, tol).root;
    row.thm3 = {row.l, row.r};
    row.combined.lower = std::max(row.l, row.thm2.lower.value_or(row.l));
    row.combined.upper = std::min({row.thm1.upper, row.thm2.upper, row.r});
    report.rows.push_back(row);
  }

  if (g.num_internal() >= 1 && report.consistency_errors.empty()) {
    report.certificates = optimality_certificates(cf, g, tol);
    report.coarse = coarse_bounds(cf, g, tol);
  }
  const auto& first = report.rows.front();
  report.growth_bound = ThmInterval{first.combined.lower * first.combined.lower,
                                    first.combined.upper * first.combined.upper};
  return report;
}

}  // namespace qgraph
