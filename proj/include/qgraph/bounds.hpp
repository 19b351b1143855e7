#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/metric_graph.hpp"
#include "qgraph/spectral_core.hpp"
#include "qgraph/tolerances.hpp"
#include "qgraph/vertex_conditions.hpp"

namespace qgraph {

struct ThmInterval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x, double slack = 0.0) const { return x >= lower - slack && x <= upper + slack; }
};

/// Theorem-2 bounds for one index: the upper bound always exists, the lower
/// one only when m_i > 2/a_min.
struct Thm2Bounds {
  std::optional<double> lower;
  double upper = 0.0;
};

struct OptimalityCertificates {
  bool thm1 = false;
  bool thm2 = false;
  // Largest principal cosines behind the verdicts, for auditing borderline cases.
  double thm1_cosine = 0.0;
  double thm2_cosine = 0.0;
};

struct CoarseBounds {
  double xi_bound = 0.0;                 // -xi(m1, a_min)^2
  std::optional<double> kuchment;        // only for |E| + |I| >= 2
};

/// Two-sided bounds for the i-th largest kappa (eigenvalue -kappa_i^2).
struct IndexBounds {
  double l = 0.0;  // i-th positive eigenvalue of L(0, a), descending
  double m = 0.0;  // i-th of the top-n positive eigenvalues of L
  double r = 0.0;  // i-th of the top-n positive eigenvalues of R(0, a)
  ThmInterval thm1;
  Thm2Bounds thm2;
  ThmInterval thm3;
  ThmInterval combined;  // max of lower bounds, min of upper bounds
};

struct BoundsReport {
  int negative_count = 0;
  bool exact = false;  // no internal edges: every bound is attained
  std::vector<IndexBounds> rows;
  std::optional<OptimalityCertificates> certificates;  // needs |I| >= 1 and n >= 1
  std::optional<CoarseBounds> coarse;                  // needs |I| >= 1 and n >= 1
  std::optional<ThmInterval> growth_bound;             // [combined_lo_1^2, combined_hi_1^2]
  std::vector<std::string> consistency_errors;

  bool non_negative() const { return negative_count == 0; }
};

/// Number of negative eigenvalues = number of positive eigenvalues of L(0, a).
int count_negative(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol = {});

/// l_i <= kappa_i <= eta(l_i, a_min).
std::vector<ThmInterval> theorem1(const CanonicalForm& cf, const MetricGraph& g,
                                  const Tolerances& tol = {});

/// kappa_i <= nu(m_i, a_min); eta(m_i - 2/a_min, a_min) <= kappa_i when defined.
std::vector<Thm2Bounds> theorem2(const CanonicalForm& cf, const MetricGraph& g,
                                 const Tolerances& tol = {});

/// l_i <= kappa_i <= r_i.
std::vector<ThmInterval> theorem3(const CanonicalForm& cf, const MetricGraph& g,
                                  const Tolerances& tol = {});

/// Piecewise-algebraic bounds on the bottom of the spectrum; requires n >= 1
/// and at least one internal edge.
CoarseBounds coarse_bounds(const CanonicalForm& cf, const MetricGraph& g,
                           const Tolerances& tol = {});

/// Subspace-intersection certificates: when true, the corresponding upper
/// bound for kappa_1 is attained.  Requires n >= 1 and |I| >= 1.
OptimalityCertificates optimality_certificates(const CanonicalForm& cf, const MetricGraph& g,
                                               const Tolerances& tol = {});

/// Aggregates Theorems 1-3, coarse bounds, certificates and the growth-bound
/// interval into one report.
BoundsReport combined(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol = {});

}  // namespace qgraph
