#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/errors.hpp"
#include "qgraph/types.hpp"

namespace qgraph::linalg {

inline Matrix symmetrized(const Matrix& h) { return 0.5 * (h + h.adjoint()); }

/// Eigenvalues of a Hermitian matrix, ascending.  Symmetrizes first.
inline RealVector hermitian_eigenvalues(const Matrix& h) {
  if (h.rows() == 0) return RealVector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
  return es.eigenvalues();
}

/// (eigenvalues ascending, eigenvectors as columns).
inline std::pair<RealVector, Matrix> hermitian_eigensystem(const Matrix& h) {
  if (h.rows() == 0) return {RealVector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(h));
  if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues strictly above `threshold`, sorted descending.
inline std::vector<double> positive_descending(const RealVector& eigs, double threshold) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (eigs[i] > threshold) out.push_back(eigs[i]);
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// dim of the numerical kernel: eigenvalues with |lambda| <= threshold.
inline int kernel_dimension_hermitian(const Matrix& h, double threshold) {
  const RealVector eigs = hermitian_eigenvalues(h);
  int dim = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (std::abs(eigs[i]) <= threshold) ++dim;
  return dim;
}

inline double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline double smallest_singular_value(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const auto sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  return sv(sv.size() - 1);
}

/// Orthonormal basis of the (right) null space of m, kernel detected at
/// singular values <= cutoff.  Returns a cols x k matrix, possibly empty.
inline Matrix kernel_basis(const Matrix& m, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

/// Largest principal angle between the column spans of two orthonormal
/// bases, computed through the sine (residual) route, which stays accurate
/// for small angles where acos of a cosine saturates.
inline double max_principal_angle(const Matrix& u, const Matrix& v) {
  if (u.cols() == 0 && v.cols() == 0) return 0.0;
  if (u.cols() == 0 || v.cols() == 0) return std::acos(-1.0) / 2.0;
  const Matrix residual = v - u * (u.adjoint() * v);
  const double s = spectral_norm(residual);
  return std::asin(std::clamp(s, 0.0, 1.0));
}

/// Largest cosine of a principal angle between the two column spans
/// (orthonormal inputs); 0 when either span is trivial.
inline double largest_principal_cosine(const Matrix& u, const Matrix& v) {
  if (u.cols() == 0 || v.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(u.adjoint() * v).singularValues()(0);
}

}  // namespace qgraph::linalg
