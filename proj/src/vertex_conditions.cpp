#include "qgraph/vertex_conditions.hpp"

#include <Eigen/SVD>

#include "qgraph/linalg.hpp"

namespace qgraph {

BoundarySpec make_spec(Matrix A, Matrix B, BoundaryLayout layout) {
  const int d = layout.dimension;
  if (A.rows() != d || A.cols() != d || B.rows() != d || B.cols() != d)
    throw InputError("boundary spec: A and B must be " + std::to_string(d) + "x" + std::to_string(d));
  return {std::move(A), std::move(B), std::move(layout)};
}

BoundarySpec spec_from_canonical(const CanonicalForm& cf) {
  return {cf.L + cf.P, cf.p_perp(), cf.layout};
}

VertexCondition VertexCondition::delta(double gamma) {
  VertexCondition c(Kind::Delta);
  c.gamma_ = gamma;
  return c;
}

VertexCondition VertexCondition::delta_prime(double gamma) {
  if (gamma == 0.0) throw InputError("delta_prime: gamma must be nonzero");
  VertexCondition c(Kind::DeltaPrime);
  c.gamma_ = gamma;
  return c;
}

VertexCondition VertexCondition::custom(Matrix a_block, Matrix b_block) {
  if (a_block.rows() != a_block.cols() || b_block.rows() != b_block.cols() ||
      a_block.rows() != b_block.rows())
    throw InputError("custom condition: A_v and B_v must be square and of equal size");
  VertexCondition c(Kind::Custom);
  c.a_block_ = std::move(a_block);
  c.b_block_ = std::move(b_block);
  return c;
}

namespace {

// Local (A_v, B_v) for a preset at a vertex of the given degree.  Continuity
// chains pair adjacent incident ends; the coupling row comes last.
std::pair<Matrix, Matrix> local_blocks(const VertexCondition& c, int degree, const std::string& vertex) {
  Matrix a = Matrix::Zero(degree, degree);
  Matrix b = Matrix::Zero(degree, degree);
  switch (c.kind()) {
    case VertexCondition::Kind::Dirichlet:
      a.setIdentity();
      return {a, b};
    case VertexCondition::Kind::Neumann:
      b.setIdentity();
      return {a, b};
    case VertexCondition::Kind::Kirchhoff:
    case VertexCondition::Kind::Delta: {
      for (int r = 0; r + 1 < degree; ++r) {
        a(r, r) = 1.0;
        a(r, r + 1) = -1.0;
      }
      a(degree - 1, 0) = -c.gamma();  // gamma = 0 for Kirchhoff
      b.row(degree - 1).setOnes();
      return {a, b};
    }
    case VertexCondition::Kind::DeltaPrime: {
      for (int r = 0; r + 1 < degree; ++r) {
        b(r, r) = 1.0;
        b(r, r + 1) = -1.0;
      }
      a.row(degree - 1).setOnes();
      b(degree - 1, 0) = -c.gamma();
      return {a, b};
    }
    case VertexCondition::Kind::Custom: {
      if (c.a_block().rows() != degree)
        throw InputError("custom condition at '" + vertex + "': block size " +
                         std::to_string(c.a_block().rows()) + " does not match degree " +
                         std::to_string(degree));
      const int d = degree;
      Matrix ab(d, 2 * d);
      ab << c.a_block(), c.b_block();
      Eigen::JacobiSVD<Matrix> svd(ab);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > Tolerances::rank_cutoff(d, sv(0))) ++rank;
      if (rank < d)
        throw NotSelfAdjointError("custom condition at '" + vertex + "': rank (A_v B_v) = " +
                                  std::to_string(rank) + " < " + std::to_string(d));
      const Matrix abs = c.a_block() * c.b_block().adjoint();
      const double residual = linalg::spectral_norm(abs - abs.adjoint());
      const Tolerances tol;
      if (residual > tol.hermitian(linalg::spectral_norm(c.a_block()) * linalg::spectral_norm(c.b_block())))
        throw NotSelfAdjointError("custom condition at '" + vertex + "': A_v B_v* is not Hermitian");
      return {c.a_block(), c.b_block()};
    }
  }
  throw InputError("unreachable vertex condition kind");
}

}  // namespace

BoundarySpec assemble(const MetricGraph& g, const std::map<std::string, VertexCondition>& conditions) {
  const BoundaryLayout layout = boundary_layout(g);
  const int d = layout.dimension;
  Matrix A = Matrix::Zero(d, d);
  Matrix B = Matrix::Zero(d, d);

  int row = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const std::string& name = g.vertices()[v];
    auto it = conditions.find(name);
    if (it == conditions.end()) throw InputError("assemble: no condition for vertex '" + name + "'");
    const std::vector<int> slots = layout.vertex_slots(v);
    const int degree = static_cast<int>(slots.size());
    if (degree == 0) continue;  // isolated vertex contributes no boundary rows
    const auto [a_v, b_v] = local_blocks(it->second, degree, name);
    for (int r = 0; r < degree; ++r)
      for (int cidx = 0; cidx < degree; ++cidx) {
        A(row + r, slots[cidx]) = a_v(r, cidx);
        B(row + r, slots[cidx]) = b_v(r, cidx);
      }
    row += degree;
  }
  return {std::move(A), std::move(B), layout};
}

ValidationReport validate(const BoundarySpec& spec, const Tolerances& tol) {
  const int d = spec.dimension();
  ValidationReport report;

  Matrix ab(d, 2 * d);
  ab << spec.A, spec.B;
  Eigen::JacobiSVD<Matrix> svd(ab);
  const auto& sv = svd.singularValues();
  const double cutoff = Tolerances::rank_cutoff(d, sv.size() ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++report.rank_ab;
  report.smallest_singular_value = sv.size() ? sv(sv.size() - 1) : 0.0;
  report.surjective = report.rank_ab == d;

  const Matrix abs = spec.A * spec.B.adjoint();
  report.hermiticity_residual = linalg::spectral_norm(abs - abs.adjoint());
  report.ab_star_hermitian =
      report.hermiticity_residual <=
      tol.hermitian(linalg::spectral_norm(spec.A) * linalg::spectral_norm(spec.B));
  return report;
}

std::string failure_message(const ValidationReport& report, int dimension) {
  if (!report.surjective)
    return "not self-adjoint: rank (A B) = " + std::to_string(report.rank_ab) + " < " +
           std::to_string(dimension);
  if (!report.ab_star_hermitian)
    return "not self-adjoint: AB* is not Hermitian (residual " +
           std::to_string(report.hermiticity_residual) + ")";
  return "valid";
}

CanonicalForm canonical_form(const BoundarySpec& spec, const Tolerances& tol) {
  const ValidationReport report = validate(spec, tol);
  if (!report.valid()) throw NotSelfAdjointError(failure_message(report, spec.dimension()));

  const int d = spec.dimension();
  Eigen::JacobiSVD<Matrix> svd(spec.B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = Tolerances::rank_cutoff(d, sv.size() ? sv(0) : 0.0);
  int rank_b = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank_b;

  // ran B* is the orthogonal complement of Ker B, so the leading right
  // singular vectors are simultaneously a basis of ran P-perp.
  const Matrix basis = svd.matrixV().leftCols(rank_b);
  const Matrix kernel = svd.matrixV().rightCols(d - rank_b);
  const Matrix P = kernel * kernel.adjoint();
  const Matrix p_perp = Matrix::Identity(d, d) - P;

  Vector inv_sv = Vector::Zero(d);
  for (int i = 0; i < rank_b; ++i) inv_sv(i) = 1.0 / sv(i);
  const Matrix pinv_b = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();

  // L = (B restricted to ran B*)^{-1} A P-perp, realized through the
  // pseudoinverse; admissible inputs map A Pperp into ran B, so the
  // restriction convention and the pseudoinverse agree.
  Matrix L = p_perp * (pinv_b * spec.A * p_perp) * p_perp;
  const double herm_residual = linalg::spectral_norm(L - L.adjoint());
  const double eps_herm =
      tol.hermitian(linalg::spectral_norm(spec.A) * linalg::spectral_norm(spec.B));
  if (herm_residual > 10.0 * eps_herm)
    throw NumericalError("canonical form: reconstructed L is not Hermitian (residual " +
                         std::to_string(herm_residual) + "); boundary conditions are inconsistent");
  L = linalg::symmetrized(L);

  CanonicalForm cf;
  cf.P = P;
  cf.L = L;
  cf.basis = basis;
  cf.L_reduced = linalg::symmetrized(basis.adjoint() * L * basis);
  cf.layout = spec.layout;
  return cf;
}

}  // namespace qgraph
