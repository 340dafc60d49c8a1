#include "simplex_langevin/metric.hpp"

#include <cmath>

namespace simplex_langevin {

void check_probability(const Eigen::VectorXd& p, bool closed, double tol) {
  if (std::abs(p.sum() - 1.0) > tol)
    throw std::invalid_argument("probability vector does not sum to 1");
  for (int i = 0; i < p.size(); ++i) {
    if (closed ? p[i] < 0.0 : !(p[i] > 0.0))
      throw std::invalid_argument(closed ? "probability vector has negative entries"
                                         : "probability vector is not interior");
  }
}

bool is_interior(const Eigen::VectorXd& p) {
  if (std::abs(p.sum() - 1.0) > kSimplexSumTolerance) return false;
  return (p.array() > 0.0).all();
}

void check_tangent(const Eigen::VectorXd& sigma, double tol) {
  if (std::abs(sigma.sum()) > tol)
    throw std::invalid_argument("tangent vector does not sum to 0");
}

WeightedLaplacian::WeightedLaplacian(const WeightedGraph& g, const MeanFunction& mean,
                                     const Eigen::VectorXd& p)
    : graph_(g), mean_(mean), p_(p) {
  if (p.size() != g.size()) throw std::invalid_argument("build_laplacian: wrong p length");
  // Only the ratios p_i/pi_i enter; finite-difference layers evaluate in a
  // neighborhood of the simplex, so no sum constraint here.
  if ((p.array() < 0.0).any())
    throw std::invalid_argument("build_laplacian: negative probability entries");
  const Eigen::VectorXd& pi = g.volume_vector();
  const int n = g.size();
  l_ = Eigen::MatrixXd::Zero(n, n);
  theta_.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const double th = mean(p[e.i] / pi[e.i], p[e.j] / pi[e.j]);
    theta_.push_back(th);
    const double v = e.weight * th;
    l_(e.i, e.j) = -v;
    l_(e.j, e.i) = -v;
  }
  // Diagonal as the negated left-to-right off-diagonal sum: summing a row in
  // that order gives zero in floating point, not just analytically.
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) off += l_(i, j);
    }
    l_(i, i) = -off;
  }
}

WeightedLaplacian build_laplacian(const WeightedGraph& g, const MeanFunction& mean,
                                  const Eigen::VectorXd& p) {
  return WeightedLaplacian(g, mean, p);
}

SpectralData spectral(const WeightedLaplacian& lap, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.matrix());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral: eigendecomposition failed");
  SpectralData out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  const int n = static_cast<int>(out.eigenvalues.size());
  const double lambda_max = std::max(out.eigenvalues[n - 1], 0.0);
  int near_zero = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(out.eigenvalues[i]) < zero_tol * lambda_max) ++near_zero;
  }
  if (near_zero != 1) {
    throw DegenerateSpectrumError(
        "spectral: expected exactly one zero eigenvalue, found " + std::to_string(near_zero) +
        " below threshold (degenerate metric: boundary contact or disconnection)");
  }

  out.pseudo_determinant = 1.0;
  out.log_pseudo_determinant = 0.0;
  out.pseudo_inverse = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double lam = out.eigenvalues[i];
    out.pseudo_determinant *= lam;
    out.log_pseudo_determinant += std::log(lam);
    out.pseudo_inverse.noalias() +=
        (1.0 / lam) * out.eigenvectors.col(i) * out.eigenvectors.col(i).transpose();
  }
  return out;
}

double log_pseudo_determinant(const WeightedGraph& g, const MeanFunction& mean,
                              const Eigen::VectorXd& p, double zero_tol) {
  return spectral(build_laplacian(g, mean, p), zero_tol).log_pseudo_determinant;
}

Eigen::VectorXd grad_log_pseudodet(const WeightedGraph& g, const MeanFunction& mean,
                                   const Eigen::VectorXd& p, double zero_tol) {
  const WeightedLaplacian lap = build_laplacian(g, mean, p);
  const SpectralData sp = spectral(lap, zero_tol);
  const Eigen::MatrixXd& li = sp.pseudo_inverse;
  const Eigen::VectorXd& pi = g.volume_vector();

  // dL/dp_k decomposes over edges incident to k:
  //   dL/dp_k = sum_{j in N(k)} w_kj (dtheta_kj/dp_k) (e_k - e_j)(e_k - e_j)^T,
  // so trace(L^+ dL/dp_k) needs only the quadratic form of L^+ on edge
  // directions.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(g.size());
  for (const Edge& e : g.edges()) {
    const auto [dth_di, dth_dj] = mean.partials(p[e.i] / pi[e.i], p[e.j] / pi[e.j]);
    const double quad = li(e.i, e.i) + li(e.j, e.j) - 2.0 * li(e.i, e.j);
    grad[e.i] += e.weight * (dth_di / pi[e.i]) * quad;
    grad[e.j] += e.weight * (dth_dj / pi[e.j]) * quad;
  }
  return grad;
}

Eigen::MatrixXd log_pdet_hessian(const WeightedGraph& g, const MeanFunction& mean,
                                 const Eigen::VectorXd& p, double step, double zero_tol) {
  const int n = g.size();
  // Orthonormal basis of R^n whose column 0 is (1,..,1)/sqrt(n) up to sign;
  // the remaining columns span the tangent space.
  const Eigen::MatrixXd basis =
      Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::VectorXd::Ones(n) / std::sqrt(double(n)))
          .householderQ();
  const Eigen::MatrixXd tangent = basis.rightCols(n - 1);
  const Eigen::VectorXd normal = basis.col(0);

  Eigen::MatrixXd ht(n, n - 1);  // H * t_m columns
  for (int m = 0; m < n - 1; ++m) {
    const Eigen::VectorXd dir = tangent.col(m);
    const Eigen::VectorXd up = grad_log_pseudodet(g, mean, p + step * dir, zero_tol);
    const Eigen::VectorXd dn = grad_log_pseudodet(g, mean, p - step * dir, zero_tol);
    ht.col(m) = (up - dn) / (2.0 * step);
  }

  Eigen::MatrixXd tt = tangent.transpose() * ht;          // tangent-tangent block
  tt = 0.5 * (tt + tt.transpose()).eval();                // FD noise symmetrization
  const Eigen::RowVectorXd nt = normal.transpose() * ht;  // normal-tangent block

  Eigen::MatrixXd h = tangent * tt * tangent.transpose();
  h += normal * nt * tangent.transpose();
  h += tangent * nt.transpose() * normal.transpose();
  return h;
}

double metric_inner(const WeightedGraph& g, const MeanFunction& mean, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& sigma1, const Eigen::VectorXd& sigma2) {
  check_tangent(sigma1);
  check_tangent(sigma2);
  const SpectralData sp = spectral(build_laplacian(g, mean, p));
  return sigma1.dot(sp.pseudo_inverse * sigma2);
}

double metric_inner_potential(const WeightedGraph& g, const MeanFunction& mean,
                              const Eigen::VectorXd& p, const Eigen::VectorXd& sigma1,
                              const Eigen::VectorXd& sigma2) {
  check_tangent(sigma1);
  check_tangent(sigma2);
  const WeightedLaplacian lap = build_laplacian(g, mean, p);
  const SpectralData sp = spectral(lap);
  const Eigen::VectorXd phi1 = sp.pseudo_inverse * sigma1;
  const Eigen::VectorXd phi2 = sp.pseudo_inverse * sigma2;
  return phi1.dot(lap.matrix() * phi2);
}

double metric_inner_edge_sum(const WeightedGraph& g, const MeanFunction& mean,
                             const Eigen::VectorXd& p, const Eigen::VectorXd& sigma1,
                             const Eigen::VectorXd& sigma2) {
  check_tangent(sigma1);
  check_tangent(sigma2);
  const WeightedLaplacian lap = build_laplacian(g, mean, p);
  const SpectralData sp = spectral(lap);
  const Eigen::VectorXd phi1 = sp.pseudo_inverse * sigma1;
  const Eigen::VectorXd phi2 = sp.pseudo_inverse * sigma2;
  const auto& edges = g.edges();
  double acc = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double d1 = phi1[edges[e].j] - phi1[edges[e].i];
    const double d2 = phi2[edges[e].j] - phi2[edges[e].i];
    acc += edges[e].weight * d1 * d2 * lap.edge_theta()[e];
  }
  return acc;
}

}  // namespace simplex_langevin
