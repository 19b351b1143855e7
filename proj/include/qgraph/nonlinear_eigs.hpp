#pragma once

#include <utility>
#include <vector>

#include "qgraph/metric_graph.hpp"
#include "qgraph/tolerances.hpp"
#include "qgraph/types.hpp"
#include "qgraph/vertex_conditions.hpp"

namespace qgraph {

struct SpectrumRoot {
  double kappa = 0.0;      // eigenvalue is -kappa^2
  int multiplicity = 1;
  double residual = 0.0;   // smallest singular value of L(kappa, a) at the root
};

struct NegativeSpectrum {
  std::vector<SpectrumRoot> roots;  // kappa descending

  int total_multiplicity() const {
    int n = 0;
    for (const auto& r : roots) n += r.multiplicity;
    return n;
  }
};

/// Computes every negative eigenvalue as the zero of a sorted eigenvalue
/// curve of the monotone Hermitian family L(kappa, a).  Root count always
/// matches count_negative; a missing sign change after one search-interval
/// retry is a hard NumericalError.  `parallel` fans the independent
/// per-curve searches out over threads; the result ordering is fixed by
/// index either way.
NegativeSpectrum negative_spectrum(const CanonicalForm& cf, const MetricGraph& g,
                                   const Tolerances& tol = {}, bool parallel = false);

/// Number of positive eigenvalues of L(kappa, a) at each grid point; the
/// profile is non-increasing and drops exactly at the spectrum's kappa values.
std::vector<std::pair<double, int>> positivity_index_profile(const CanonicalForm& cf,
                                                             const MetricGraph& g,
                                                             const std::vector<double>& grid);

/// dim Ker(-Delta(A,B)) = dim Ker L(0, a); compact graphs only.
int zero_mode_dimension(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol = {});

struct PoincareCheck {
  bool holds = false;
  int defect = 0;  // dim Ker(Pperp M(0,a) Pperp + P)
};

/// Criterion for the Poincare inequality on W_P = {u : P trace(u) = 0};
/// compact graphs only.  When it holds, -Delta(P, Pperp) is strictly positive.
PoincareCheck poincare_criterion(const Matrix& P, const MetricGraph& g, const Tolerances& tol = {});

}  // namespace qgraph
