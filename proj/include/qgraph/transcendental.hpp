#pragma once

#include <limits>

#include "qgraph/tolerances.hpp"

namespace qgraph {

/// Passing this as the length argument returns the algebraic a -> inf limit
/// (eta(l, inf) = l, nu(m, inf) = m) without iterating.  Used for graphs
/// without internal edges.
inline constexpr double kNoInternalEdges = std::numeric_limits<double>::infinity();

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // defining equation evaluated at root
  int iterations = 0;
};

/// kappa * tanh(kappa*a/2), monotone increasing in kappa.
double kappa_tanh(double kappa, double a);

/// kappa / tanh(kappa*a/2); the kappa -> 0 limit 2/a is used analytically,
/// and small arguments go through a series to avoid cancellation.
double kappa_coth(double kappa, double a);

/// Unique positive solution of  l = kappa/tanh(kappa*a/2) - 2/a  for l > 0.
/// The root lies in [l, l + 2/a].
RootResult eta(double l, double a, const Tolerances& tol = {});

/// Unique positive solution of  m = kappa*tanh(kappa*a/2)  for m > 0.
/// The root lies in [m, m + 2/a].
RootResult nu(double m, double a, const Tolerances& tol = {});

/// Piecewise-algebraic coarse majorant of nu:
///   xi(m,a) = sqrt(8m/a)  for m <= 1/(2a),   4m  for m >= 1/(2a).
double xi(double m, double a);

}  // namespace qgraph
