#include "qgraph/nonlinear_eigs.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "qgraph/bounds.hpp"
#include "qgraph/linalg.hpp"
#include "qgraph/spectral_core.hpp"

namespace qgraph {

namespace {

// j-th largest eigenvalue (1-based) of L(kappa, a).
double curve_value(const CanonicalForm& cf, const MetricGraph& g, int j, double kappa) {
  const RealVector eigs = linalg::hermitian_eigenvalues(l_of_kappa(cf, g, kappa).value);
  return eigs(eigs.size() - j);
}

// Unique zero of the strictly decreasing curve on (0, hi]: bisection to a
// 1e-4 bracket, then secant safeguarded by the bracket.
double curve_root(const CanonicalForm& cf, const MetricGraph& g, int j, double hi, double f_hi,
                  double eps_curve) {
  double lo = 0.0;
  double f_lo = curve_value(cf, g, j, 0.0);
  int iter = 0;
  constexpr int kMaxIter = 400;
  while (hi - lo > 1e-4 && iter++ < kMaxIter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = curve_value(cf, g, j, mid);
    if (std::abs(f_mid) <= eps_curve) return mid;
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  double x0 = lo, f0 = f_lo, x1 = hi, f1 = f_hi;
  while (std::abs(f1) > eps_curve && iter++ < kMaxIter) {
    double next = f1 == f0 ? 0.5 * (lo + hi) : x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (next == x1) break;
    x0 = x1;
    f0 = f1;
    x1 = next;
    f1 = curve_value(cf, g, j, x1);
    if (f1 > 0.0)
      lo = x1;
    else
      hi = x1;
  }
  if (std::abs(f1) > eps_curve)
    throw NumericalError("negative_spectrum: curve " + std::to_string(j) +
                         " did not converge; tolerances are inconsistent");
  return x1;
}

}  // namespace

NegativeSpectrum negative_spectrum(const CanonicalForm& cf, const MetricGraph& g,
                                   const Tolerances& tol, bool parallel) {
  NegativeSpectrum spectrum;
  const int n = count_negative(cf, g, tol);
  if (n == 0) return spectrum;

  const BoundsReport report = combined(cf, g, tol);
  const double norm_l = linalg::spectral_norm(cf.L_reduced);
  const double eps_curve = tol.curve(norm_l);
  double kappa_max = report.rows.front().combined.upper + 1.0;

  const auto solve_one = [&](int j, double hi) {
    double f_hi = curve_value(cf, g, j, hi);
    if (f_hi >= 0.0) {
      hi *= 2.0;  // one retry: the bound-side estimate may carry round-off
      f_hi = curve_value(cf, g, j, hi);
      if (f_hi >= 0.0)
        throw NumericalError("negative_spectrum: curve " + std::to_string(j) +
                             " has no sign change up to kappa = " + std::to_string(hi));
    }
    return curve_root(cf, g, j, hi, f_hi, eps_curve);
  };

  std::vector<double> kappas(n);
  if (parallel && n > 1) {
    std::vector<std::future<double>> tasks;
    tasks.reserve(n);
    for (int j = 1; j <= n; ++j)
      tasks.push_back(std::async(std::launch::async, solve_one, j, kappa_max));
    for (int j = 0; j < n; ++j) kappas[j] = tasks[j].get();
  } else {
    for (int j = 1; j <= n; ++j) kappas[j - 1] = solve_one(j, kappa_max);
  }

  std::sort(kappas.rbegin(), kappas.rend());
  for (int j = 0; j < n; ++j) {
    if (!spectrum.roots.empty() &&
        spectrum.roots.back().kappa - kappas[j] <= tol.cluster(kappas[j])) {
      ++spectrum.roots.back().multiplicity;
      continue;
    }
    SpectrumRoot root;
    root.kappa = kappas[j];
    const RealVector eigs = linalg::hermitian_eigenvalues(l_of_kappa(cf, g, kappas[j]).value);
    root.residual = eigs.cwiseAbs().minCoeff();
    spectrum.roots.push_back(root);
  }

  if (spectrum.total_multiplicity() != n)
    throw NumericalError("negative_spectrum: found " +
                         std::to_string(spectrum.total_multiplicity()) + " roots but L(0,a) has " +
                         std::to_string(n) + " positive eigenvalues");
  return spectrum;
}

std::vector<std::pair<double, int>> positivity_index_profile(const CanonicalForm& cf,
                                                             const MetricGraph& g,
                                                             const std::vector<double>& grid) {
  std::vector<std::pair<double, int>> profile;
  double prev = -1.0;
  for (double kappa : grid) {
    if (kappa < 0.0 || kappa < prev)
      throw InputError("positivity_index_profile: grid must be ascending and nonnegative");
    prev = kappa;
    const RealVector eigs = linalg::hermitian_eigenvalues(l_of_kappa(cf, g, kappa).value);
    int positive = 0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
      if (eigs(i) > 0.0) ++positive;
    profile.emplace_back(kappa, positive);
  }
  return profile;
}

int zero_mode_dimension(const CanonicalForm& cf, const MetricGraph& g, const Tolerances& tol) {
  if (!g.compact()) throw InputError("zero_mode_dimension: graph must be compact");
  const Matrix l0 = l_of_kappa(cf, g, 0.0).value;
  return linalg::kernel_dimension_hermitian(l0, tol.eigenvalue(linalg::spectral_norm(l0)));
}

PoincareCheck poincare_criterion(const Matrix& P, const MetricGraph& g, const Tolerances& tol) {
  if (!g.compact()) throw InputError("poincare_criterion: graph must be compact");
  const BoundaryLayout layout = boundary_layout(g);
  const int d = layout.dimension;
  if (P.rows() != d || P.cols() != d)
    throw InputError("poincare_criterion: projector must be " + std::to_string(d) + "x" +
                     std::to_string(d));
  if (linalg::spectral_norm(P * P - P) > 1e-8 || linalg::spectral_norm(P - P.adjoint()) > 1e-8)
    throw InputError("poincare_criterion: P is not an orthogonal projector");

  const Matrix p_perp = Matrix::Identity(d, d) - P;
  const Matrix k = p_perp * m_matrix(g, 0.0).cast<Complex>() * p_perp + P;
  PoincareCheck check;
  check.defect = linalg::kernel_dimension_hermitian(k, tol.eigenvalue(linalg::spectral_norm(k)));
  check.holds = check.defect == 0;
  return check;
}

}  // namespace qgraph
