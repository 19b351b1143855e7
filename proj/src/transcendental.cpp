#include "qgraph/transcendental.hpp"

#include <cmath>
#include <functional>

#include "qgraph/errors.hpp"

namespace qgraph {

double kappa_tanh(double kappa, double a) {
  if (std::isinf(a)) return kappa;
  return kappa * std::tanh(0.5 * kappa * a);
}

double kappa_coth(double kappa, double a) {
  if (std::isinf(a)) return kappa;
  const double y = 0.5 * kappa * a;
  if (y < 1e-4) {
    // kappa/tanh(y) = 2/a + kappa^2 a/6 - kappa^4 a^3/360 + O(y^6)
    return 2.0 / a + kappa * kappa * a * (1.0 / 6.0 - y * y / 90.0);
  }
  return kappa / std::tanh(y);
}

namespace {

struct Eval {
  double f;
  double df;
};

// Bisection to an absolute bracket width of 1e-3, then Newton safeguarded by
// the bracket.  `fn` must be strictly increasing on [lo, hi] with a sign
// change across it.
RootResult solve_increasing(const std::function<Eval(double)>& fn, double lo, double hi,
                            double eps_residual, const char* name) {
  constexpr int kMaxIter = 200;
  Eval flo = fn(lo);
  Eval fhi = fn(hi);
  if (std::abs(flo.f) <= eps_residual) return {lo, flo.f, 0};
  if (std::abs(fhi.f) <= eps_residual) return {hi, fhi.f, 0};
  if (flo.f > 0.0 || fhi.f < 0.0)
    throw NumericalError(std::string(name) + ": initial bracket does not straddle the root");

  int iters = 0;
  while (hi - lo > 1e-3 && iters < kMaxIter) {
    const double mid = 0.5 * (lo + hi);
    const Eval fm = fn(mid);
    ++iters;
    if (std::abs(fm.f) <= eps_residual) return {mid, fm.f, iters};
    if (fm.f < 0.0)
      lo = mid;
    else
      hi = mid;
  }

  double x = 0.5 * (lo + hi);
  Eval fx = fn(x);
  ++iters;
  if (fx.f < 0.0)
    lo = x;
  else
    hi = x;
  while (std::abs(fx.f) > eps_residual && iters < kMaxIter) {
    double next = x - fx.f / fx.df;
    if (!(fx.df > 0.0) || !(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;  // step below representable resolution
    x = next;
    fx = fn(x);
    ++iters;
    if (fx.f < 0.0)
      lo = x;
    else
      hi = x;
  }
  if (std::abs(fx.f) > eps_residual)
    throw NumericalError(std::string(name) + ": no convergence within iteration cap");
  return {x, fx.f, iters};
}

}  // namespace

RootResult eta(double l, double a, const Tolerances& tol) {
  if (!(l > 0.0)) throw InputError("eta: l must be positive");
  if (!(a > 0.0)) throw InputError("eta: a must be positive");
  if (std::isinf(a)) return {l, 0.0, 0};
  auto fn = [l, a](double kappa) -> Eval {
    const double y = 0.5 * kappa * a;
    double df;
    if (y < 1e-4) {
      df = kappa * a / 3.0 - std::pow(kappa, 3) * std::pow(a, 3) / 90.0;
    } else {
      const double c = 1.0 / std::tanh(y);
      df = c + y * (1.0 - c * c);
    }
    return {kappa_coth(kappa, a) - 2.0 / a - l, df};
  };
  return solve_increasing(fn, l, l + 2.0 / a, tol.root(l), "eta");
}

RootResult nu(double m, double a, const Tolerances& tol) {
  if (!(m > 0.0)) throw InputError("nu: m must be positive");
  if (!(a > 0.0)) throw InputError("nu: a must be positive");
  if (std::isinf(a)) return {m, 0.0, 0};
  auto fn = [m, a](double kappa) -> Eval {
    const double y = 0.5 * kappa * a;
    const double t = std::tanh(y);
    return {kappa_tanh(kappa, a) - m, t + y * (1.0 - t * t)};
  };
  return solve_increasing(fn, m, m + 2.0 / a, tol.root(m), "nu");
}

double xi(double m, double a) {
  if (!(m > 0.0)) throw InputError("xi: m must be positive");
  if (!(a > 0.0)) throw InputError("xi: a must be positive");
  if (m <= 1.0 / (2.0 * a)) return std::sqrt(8.0 * m / a);
  return 4.0 * m;
}

}  // namespace qgraph
