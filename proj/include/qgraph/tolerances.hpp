#pragma once

#include <cmath>

namespace qgraph {

// One knob (`scale`, the CLI's --tol) stretches the root/eigenvalue tolerance
// families together.  Admissibility thresholds (hermitian, rank) stay fixed:
// they gate self-adjointness, not accuracy.
struct Tolerances {
  double scale = 1.0;

  // Kernel detection cutoff for singular values, scale-invariant in the input.
  static double rank_cutoff(int dim, double sigma_max) {
    return static_cast<double>(dim) * sigma_max * std::ldexp(1.0, -40);
  }

  // Hermiticity residual allowance, e.g. for AB* or a reconstructed L.
  double hermitian(double norm_product) const { return 1e-10 * (1.0 + norm_product); }

  // Residual target for scalar transcendental roots.
  double root(double input) const { return 1e-12 * scale * (1.0 + std::abs(input)); }

  // Zero/positivity threshold for eigenvalues of a matrix with the given norm.
  double eigenvalue(double norm) const { return 1e-10 * scale * (1.0 + norm); }

  // Residual target for eigenvalue-curve roots of the nonlinear family.
  double curve(double norm) const { return 1e-13 * scale * (1.0 + norm); }

  // Two curve roots closer than this are one eigenvalue with summed multiplicity.
  double cluster(double kappa) const { return 1e-7 * scale * (1.0 + kappa); }

  // Principal-cosine margin for optimality certificates.
  double certificate = 1e-8;

  // Principal-angle tolerance for subspace equality (canonical-form round trip).
  double subspace = 1e-8;
};

}  // namespace qgraph
