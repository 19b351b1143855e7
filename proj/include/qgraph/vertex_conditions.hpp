#pragma once

#include <map>
#include <string>

#include "qgraph/metric_graph.hpp"
#include "qgraph/tolerances.hpp"
#include "qgraph/types.hpp"

namespace qgraph {

/// Global boundary conditions  A psi + B psi' = 0  on the boundary space.
struct BoundarySpec {
  Matrix A;
  Matrix B;
  BoundaryLayout layout;

  int dimension() const { return layout.dimension; }
};

BoundarySpec make_spec(Matrix A, Matrix B, BoundaryLayout layout);

struct ValidationReport {
  bool surjective = false;
  bool ab_star_hermitian = false;
  int rank_ab = 0;                       // numerical rank of the d x 2d block row (A B)
  double smallest_singular_value = 0.0;  // sigma_d of (A B)
  double hermiticity_residual = 0.0;     // ||AB* - (AB*)*||_2

  bool valid() const { return surjective && ab_star_hermitian; }
};

/// Human-readable reason for a failed report, e.g. "not self-adjoint: rank (A B) = 1 < 2".
std::string failure_message(const ValidationReport& report, int dimension);

/// Canonical parametrization: P the orthogonal projector onto Ker B, L the
/// Hermitian operator on ran P-perp.  L is stored embedded in the full
/// boundary space (L = Pperp L Pperp) together with an orthonormal basis of
/// ran P-perp, so callers can work in either picture.
struct CanonicalForm {
  Matrix P;          // d x d orthogonal projector
  Matrix L;          // d x d, Hermitian, equals Pperp L Pperp
  Matrix basis;      // d x p orthonormal basis of ran P-perp
  Matrix L_reduced;  // p x p, basis-coordinates of L
  BoundaryLayout layout;

  int dimension() const { return layout.dimension; }
  int p_perp_rank() const { return static_cast<int>(basis.cols()); }
  Matrix p_perp() const { return Matrix::Identity(P.rows(), P.cols()) - P; }
};

/// The equivalent parametrization A' = L + P, B' = P-perp.
BoundarySpec spec_from_canonical(const CanonicalForm& cf);

/// Per-vertex boundary condition presets plus fully custom local blocks.
class VertexCondition {
 public:
  enum class Kind { Dirichlet, Neumann, Kirchhoff, Delta, DeltaPrime, Custom };

  static VertexCondition dirichlet() { return VertexCondition(Kind::Dirichlet); }
  static VertexCondition neumann() { return VertexCondition(Kind::Neumann); }
  static VertexCondition kirchhoff() { return VertexCondition(Kind::Kirchhoff); }
  /// Continuity plus sum of outgoing derivatives = gamma * value; gamma = 0 is Kirchhoff.
  static VertexCondition delta(double gamma);
  /// Derivative continuity plus sum of values = gamma * derivative; gamma must be nonzero.
  static VertexCondition delta_prime(double gamma);
  static VertexCondition custom(Matrix a_block, Matrix b_block);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  const Matrix& a_block() const { return a_block_; }
  const Matrix& b_block() const { return b_block_; }

 private:
  explicit VertexCondition(Kind kind) : kind_(kind) {}

  Kind kind_;
  double gamma_ = 0.0;
  Matrix a_block_;
  Matrix b_block_;
};

/// Block-assembles per-vertex conditions into a global (A, B) on the graph's
/// boundary layout.  Rows are grouped by vertex in vertex input order; the
/// terminal-end derivative sign is absorbed by the layout convention, so
/// local blocks are written for outgoing derivatives as usual.
BoundarySpec assemble(const MetricGraph& g, const std::map<std::string, VertexCondition>& conditions);

ValidationReport validate(const BoundarySpec& spec, const Tolerances& tol = {});

/// Computes (P, L) from a validated spec.  Throws NotSelfAdjointError when
/// validation fails and NumericalError when the reconstructed L is not
/// Hermitian within 10x the admissibility tolerance.
CanonicalForm canonical_form(const BoundarySpec& spec, const Tolerances& tol = {});

}  // namespace qgraph
