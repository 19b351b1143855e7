#include "qgraph/fem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>

#include "qgraph/bounds.hpp"
#include "qgraph/linalg.hpp"
#include "qgraph/nonlinear_eigs.hpp"
#include "qgraph/spectral_core.hpp"
#include "qgraph/transcendental.hpp"

namespace qgraph {

double default_truncation(const MetricGraph& g, const CanonicalForm& cf) {
  double kappa_est = 1.0;
  const BoundsReport report = combined(cf, g);
  if (report.negative_count > 0)
    kappa_est = std::max(1.0, report.rows.back().combined.lower);
  const auto extrema = edge_length_extrema(g);
  return std::max(20.0 / kappa_est, extrema ? 10.0 * extrema->second : 0.0);
}

namespace {

struct Chain {
  int first_dof = 0;
  int elements = 0;
  double h = 0.0;
  bool clamp_far_end = false;  // external truncation point, u = 0
  int free_nodes() const { return elements + (clamp_far_end ? 0 : 1); }
};

// Certified strict lower bound on the pencil spectrum: the FEM space is a
// subspace of the form domain, so -nu(m1, a_min)^2 bounds it from below.
double safe_shift(const MetricGraph& g, const CanonicalForm& cf) {
  const RealVector eigs = linalg::hermitian_eigenvalues(cf.L_reduced);
  double m1 = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) m1 = std::max(m1, eigs(i));
  if (m1 <= 0.0) return -1.0;
  const auto extrema = edge_length_extrema(g);
  const double upper = nu(m1, extrema ? extrema->first : kNoInternalEdges).root;
  return -upper * upper - 1.0;
}

}  // namespace

Discretization discretize(const MetricGraph& g, const CanonicalForm& cf, int nodes_per_unit,
                          double truncation) {
  if (nodes_per_unit < 10) throw InputError("discretize: need at least 10 nodes per unit length");
  if (!g.compact() && !(truncation > 0.0))
    throw InputError("discretize: positive truncation length required for external edges");

  const BoundaryLayout layout = cf.layout;
  std::vector<Chain> chains;  // external edges first, then internal, matching slot blocks
  int dof = 0;
  auto add_chain = [&](double length, bool clamp) {
    Chain c;
    c.first_dof = dof;
    c.elements = std::max(1, static_cast<int>(std::lround(length * nodes_per_unit)));
    c.h = length / c.elements;
    c.clamp_far_end = clamp;
    dof += c.free_nodes();
    chains.push_back(c);
  };
  for (int e = 0; e < g.num_external(); ++e) add_chain(truncation, true);
  for (int i = 0; i < g.num_internal(); ++i) add_chain(g.internal_edges()[i].length, false);

  const int total = dof;
  if (total > 1'000'000)
    throw NumericalError("discretize: mesh exceeds 1e6 nodes; coarsen or shorten the truncation");

  Discretization disc;
  disc.total_nodes = total;

  std::vector<Eigen::Triplet<double>> st, mt;
  for (const Chain& c : chains) {
    const double k = 1.0 / c.h;
    const double m = c.h / 6.0;
    for (int el = 0; el < c.elements; ++el) {
      const int a = c.first_dof + el;
      const int b = a + 1;
      const bool b_clamped = c.clamp_far_end && el == c.elements - 1;
      st.emplace_back(a, a, k);
      mt.emplace_back(a, a, 2.0 * m);
      if (b_clamped) continue;
      st.emplace_back(b, b, k);
      mt.emplace_back(b, b, 2.0 * m);
      st.emplace_back(a, b, -k);
      st.emplace_back(b, a, -k);
      mt.emplace_back(a, b, m);
      mt.emplace_back(b, a, m);
    }
  }
  disc.stiffness.resize(total, total);
  disc.stiffness.setFromTriplets(st.begin(), st.end());
  disc.mass.resize(total, total);
  disc.mass.setFromTriplets(mt.begin(), mt.end());

  // Slot -> nodal dof of the matching edge end.
  disc.trace_dofs.assign(layout.dimension, -1);
  for (int e = 0; e < g.num_external(); ++e)
    disc.trace_dofs[layout.external_slot(e)] = chains[e].first_dof;
  for (int i = 0; i < g.num_internal(); ++i) {
    const Chain& c = chains[g.num_external() + i];
    disc.trace_dofs[layout.initial_slot(i)] = c.first_dof;
    disc.trace_dofs[layout.terminal_slot(i)] = c.first_dof + c.elements;
  }

  // Null-space basis of {P trace = 0}: interior dofs pass through, trace
  // dofs combine through the orthonormal basis of ran P-perp.
  const int d = layout.dimension;
  const int p = cf.p_perp_rank();
  const int reduced = total - d + p;
  std::vector<bool> is_trace(total, false);
  for (int t : disc.trace_dofs) is_trace[t] = true;
  std::vector<Eigen::Triplet<Complex>> nt;
  int next = 0;
  std::vector<int> interior_index(total, -1);
  for (int i = 0; i < total; ++i)
    if (!is_trace[i]) {
      interior_index[i] = next;
      nt.emplace_back(i, next, Complex(1.0, 0.0));
      ++next;
    }
  for (int s = 0; s < d; ++s)
    for (int kcol = 0; kcol < p; ++kcol)
      if (cf.basis(s, kcol) != Complex(0.0, 0.0))
        nt.emplace_back(disc.trace_dofs[s], next + kcol, cf.basis(s, kcol));
  disc.constraint_basis.resize(total, reduced);
  disc.constraint_basis.setFromTriplets(nt.begin(), nt.end());

  SparseMatrix form = disc.stiffness.cast<Complex>();
  {
    std::vector<Eigen::Triplet<Complex>> lt;
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t)
        if (cf.L(s, t) != Complex(0.0, 0.0))
          lt.emplace_back(disc.trace_dofs[s], disc.trace_dofs[t], -cf.L(s, t));
    SparseMatrix trace_term(total, total);
    trace_term.setFromTriplets(lt.begin(), lt.end());
    form += trace_term;
  }
  disc.reduced_stiffness = disc.constraint_basis.adjoint() * form * disc.constraint_basis;
  disc.reduced_mass =
      disc.constraint_basis.adjoint() * disc.mass.cast<Complex>() * disc.constraint_basis;
  disc.shift = safe_shift(g, cf);
  return disc;
}

namespace {

std::vector<double> dense_pencil_eigs(const Discretization& disc, int k) {
  const Matrix s = Matrix(disc.reduced_stiffness);
  const Matrix m = Matrix(disc.reduced_mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(linalg::symmetrized(s),
                                                      linalg::symmetrized(m));
  if (es.info() != Eigen::Success) throw NumericalError("fem_spectrum: dense solve failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + k);
  return out;
}

// Shift-inverted Lanczos in the M inner product with deflated restarts: each
// restart converges the largest Ritz value of (S - sigma M)^{-1} M on the
// M-orthocomplement of the eigenvectors found so far, i.e. the next lowest
// pencil eigenvalue, multiplicities included.
std::vector<double> lanczos_pencil_eigs(const Discretization& disc, int k) {
  const int n = disc.reduced_dim();
  const double sigma = disc.shift;
  SparseMatrix shifted = disc.reduced_stiffness - Complex(sigma, 0.0) * disc.reduced_mass;
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw NumericalError("fem_spectrum: factorization of the shifted pencil failed");
  const auto& mass = disc.reduced_mass;

  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&]() {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
  };

  std::vector<Vector> deflated;            // converged eigenvectors
  std::vector<Vector> deflated_m;          // mass * eigenvector, cached
  auto deflate = [&](Vector& v) {
    for (size_t i = 0; i < deflated.size(); ++i) v -= deflated_m[i].dot(v) * deflated[i];
  };

  std::vector<double> eigenvalues;
  const int max_steps = std::min(n, 400);
  while (static_cast<int>(eigenvalues.size()) < k) {
    std::vector<Vector> q;
    std::vector<double> alpha, beta;
    Vector v = random_vector();
    deflate(v);
    {
      const Vector mv = mass * v;
      v /= std::sqrt(std::real(mv.dot(v)));
    }
    q.push_back(v);

    std::vector<Vector> mq;  // mass * q, cached for the M inner products
    mq.push_back(mass * q[0]);

    double theta = 0.0;
    Vector ritz;
    bool converged = false;
    for (int j = 0; j < max_steps && !converged; ++j) {
      Vector w = solver.solve(mq[j]);
      if (j > 0) w -= beta[j - 1] * q[j - 1];
      alpha.push_back(std::real(mq[j].dot(w)));
      w -= alpha[j] * q[j];
      deflate(w);
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) w -= mq[i].dot(w) * q[i];
        deflate(w);
      }
      const double b = std::sqrt(std::max(0.0, std::real((mass * w).dot(w))));
      beta.push_back(b);

      const bool check_now = b < 1e-13 || j + 1 == max_steps || (j + 1) % 5 == 0;
      if (check_now && !alpha.empty()) {
        const int m = static_cast<int>(alpha.size());
        RealMatrix t = RealMatrix::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
        const int top = m - 1;
        theta = es.eigenvalues()(top);
        const double resid = std::abs(beta[m - 1] * es.eigenvectors()(m - 1, top));
        if (resid <= 1e-11 * (1.0 + std::abs(theta)) || b < 1e-13) {
          ritz = Vector::Zero(n);
          for (int i = 0; i < m; ++i) ritz += es.eigenvectors()(i, top) * q[i];
          converged = true;
        }
      }
      if (converged) break;
      if (b < 1e-13)
        throw NumericalError("fem_spectrum: Lanczos breakdown before convergence");
      q.push_back(w / b);
      mq.push_back(mass * q.back());
    }
    if (!converged) throw NumericalError("fem_spectrum: Lanczos did not converge");
    if (!(theta > 0.0))
      throw NumericalError("fem_spectrum: shift is not below the spectrum");

    const Vector mr = mass * ritz;
    ritz /= std::sqrt(std::real(mr.dot(ritz)));
    deflated.push_back(ritz);
    deflated_m.push_back(mass * ritz);
    eigenvalues.push_back(sigma + 1.0 / theta);
  }
  return eigenvalues;
}

}  // namespace

std::vector<double> fem_spectrum(const Discretization& disc, int k) {
  if (k < 1) throw InputError("fem_spectrum: k must be positive");
  if (k > disc.reduced_dim())
    throw InputError("fem_spectrum: k exceeds the constrained subspace dimension");
  if (disc.reduced_dim() <= 400) return dense_pencil_eigs(disc, k);
  std::vector<double> eigs = lanczos_pencil_eigs(disc, k);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

double poincare_constant(const MetricGraph& g, const Matrix& P, int nodes_per_unit,
                         const Tolerances& tol) {
  const PoincareCheck check = poincare_criterion(P, g, tol);
  if (!check.holds)
    throw InputError("poincare_constant: criterion fails, defect " + std::to_string(check.defect) +
                     " (zero mode present)");
  const BoundaryLayout layout = boundary_layout(g);
  const int d = layout.dimension;
  const Matrix p_perp = Matrix::Identity(d, d) - P;
  const CanonicalForm cf = canonical_form(make_spec(P, p_perp, layout), tol);
  const Discretization disc = discretize(g, cf, nodes_per_unit);
  const double lambda1 = fem_spectrum(disc, 1).front();
  if (!(lambda1 > 0.0))
    throw NumericalError("poincare_constant: lowest eigenvalue is not positive");
  return std::sqrt(lambda1);
}

}  // namespace qgraph
