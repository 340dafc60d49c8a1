#include "simplex_langevin/calculus.hpp"

#include <cmath>
#include <vector>

#include "simplex_langevin/metric.hpp"

namespace simplex_langevin {

namespace {

// The operators consume unconstrained coordinate derivatives, and test
// helpers probe them through plain-coordinate finite differences; tolerate
// the resulting small excursions off the simplex.
constexpr double kOperatorSumSlack = 1e-3;

// Per-edge data shared by the operators. For edge e = (i, j):
//   theta[e]                theta_ij(p)
//   dtheta_i/dtheta_j[e]    d theta_ij / d p_i and / d p_j
struct EdgeTheta {
  std::vector<double> theta, dtheta_i, dtheta_j;
};

EdgeTheta edge_theta_data(const WeightedGraph& g, const MeanFunction& mean,
                          const Eigen::VectorXd& p) {
  const Eigen::VectorXd& pi = g.volume_vector();
  EdgeTheta out;
  out.theta.reserve(g.edge_count());
  out.dtheta_i.reserve(g.edge_count());
  out.dtheta_j.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const double xi = p[e.i] / pi[e.i];
    const double xj = p[e.j] / pi[e.j];
    out.theta.push_back(mean(xi, xj));
    const auto [dx, dy] = mean.partials(xi, xj);
    out.dtheta_i.push_back(dx / pi[e.i]);
    out.dtheta_j.push_back(dy / pi[e.j]);
  }
  return out;
}

// w_i = sum_{j in N(i)} w_ij (d/dp_i - d/dp_j) theta_ij, the row-derivative
// sums appearing in div(L grad u).
Eigen::VectorXd laplacian_row_derivatives(const WeightedGraph& g, const EdgeTheta& et) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(g.size());
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double v = edges[e].weight * (et.dtheta_i[e] - et.dtheta_j[e]);
    w[edges[e].i] += v;
    w[edges[e].j] -= v;
  }
  return w;
}

// trace(L(p) H) for symmetric H: L decomposes over edges as
// w theta (e_i - e_j)(e_i - e_j)^T.
double trace_l_times(const WeightedGraph& g, const EdgeTheta& et, const Eigen::MatrixXd& h) {
  const auto& edges = g.edges();
  double acc = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e].i, j = edges[e].j;
    acc += edges[e].weight * et.theta[e] * (h(i, i) - 2.0 * h(i, j) + h(j, j));
  }
  return acc;
}

double divergence_of_l_grad(const WeightedGraph& g, const EdgeTheta& et,
                            const Eigen::VectorXd& grad_u, const Eigen::MatrixXd& hess_u) {
  return laplacian_row_derivatives(g, et).dot(grad_u) + trace_l_times(g, et, hess_u);
}

}  // namespace

Eigen::VectorXd grad_w(const WeightedGraph& g, const MeanFunction& mean,
                       const SimplexFunctional& f, const Eigen::VectorXd& p) {
  check_probability(p, false, kOperatorSumSlack);
  const EdgeTheta et = edge_theta_data(g, mean, p);
  const Eigen::VectorXd fg = f.gradient(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double flux = edges[e].weight * et.theta[e] * (fg[edges[e].j] - fg[edges[e].i]);
    out[edges[e].i] -= flux;
    out[edges[e].j] += flux;
  }
  return out;
}

SimplexVectorFunctional grad_w_functional(const WeightedGraph& g, const MeanFunction& mean,
                                          SimplexFunctional f) {
  SimplexVectorFunctional out;
  out.value = [g, mean, f](const Eigen::VectorXd& p) { return grad_w(g, mean, f, p); };
  out.jacobian = [g, mean, f](const Eigen::VectorXd& p) {
    const EdgeTheta et = edge_theta_data(g, mean, p);
    const Eigen::VectorXd fg = f.gradient(p);
    const Eigen::MatrixXd fh = f.hessian(p);
    const int n = g.size();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const int i = edges[e].i, j = edges[e].j;
      const double w = edges[e].weight;
      const double dfg = fg[j] - fg[i];
      // theta dependence
      jac(i, i) -= w * et.dtheta_i[e] * dfg;
      jac(i, j) -= w * et.dtheta_j[e] * dfg;
      jac(j, j) += w * et.dtheta_j[e] * dfg;
      jac(j, i) += w * et.dtheta_i[e] * dfg;
      // Hessian dependence
      jac.row(i) -= w * et.theta[e] * (fh.row(j) - fh.row(i));
      jac.row(j) += w * et.theta[e] * (fh.row(j) - fh.row(i));
    }
    return jac;
  };
  return out;
}

double div_w(const WeightedGraph& g, const MeanFunction& mean, const SimplexVectorFunctional& h,
             const Eigen::VectorXd& p) {
  check_probability(p, false, kOperatorSumSlack);
  const Eigen::VectorXd hv = h.value(p);
  const Eigen::MatrixXd jac = h.jacobian(p);
  const Eigen::VectorXd g_logpi = grad_log_pseudodet(g, mean, p);
  return jac.trace() - 0.5 * g_logpi.dot(hv);
}

double laplace_beltrami(const WeightedGraph& g, const MeanFunction& mean,
                        const SimplexFunctional& f, const Eigen::VectorXd& p) {
  check_probability(p, false, kOperatorSumSlack);
  const EdgeTheta et = edge_theta_data(g, mean, p);
  const Eigen::VectorXd fg = f.gradient(p);
  const Eigen::MatrixXd fh = f.hessian(p);
  const Eigen::VectorXd lg = grad_log_pseudodet(g, mean, p);
  const auto& edges = g.edges();
  double acc = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e].i, j = edges[e].j;
    const double w = edges[e].weight;
    const double sw = std::sqrt(w);
    const double a = sw * (fg[j] - fg[i]);                          // (grad_w grad_p) F
    const double b = sw * (lg[j] - lg[i]);                          // (grad_w grad_p) log Pi
    const double c = w * (fh(i, i) - 2.0 * fh(i, j) + fh(j, j));    // (grad_w grad_p)^2 F
    const double d = sw * (et.dtheta_j[e] - et.dtheta_i[e]);        // (grad_w grad_p) theta_ij
    acc += -0.5 * a * b * et.theta[e] + c * et.theta[e] + a * d;
  }
  return acc;
}

double kolmogorov_forward(const WeightedGraph& g, const MeanFunction& mean,
                          const SimplexFunctional& density, const Eigen::VectorXd& p) {
  check_probability(p, false, kOperatorSumSlack);
  const EdgeTheta et = edge_theta_data(g, mean, p);
  const double pv = density.value(p);
  const Eigen::VectorXd pg = density.gradient(p);
  const Eigen::MatrixXd ph = density.hessian(p);
  const Eigen::VectorXd lg = grad_log_pseudodet(g, mean, p);
  const Eigen::MatrixXd lh = log_pdet_hessian(g, mean, p);
  const auto& edges = g.edges();
  double acc = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e].i, j = edges[e].j;
    const double w = edges[e].weight;
    const double sw = std::sqrt(w);
    const double a = sw * (pg[j] - pg[i]);
    const double b = sw * (lg[j] - lg[i]);
    const double c_p = w * (ph(i, i) - 2.0 * ph(i, j) + ph(j, j));
    const double c_lp = w * (lh(i, i) - 2.0 * lh(i, j) + lh(j, j));
    const double d = sw * (et.dtheta_j[e] - et.dtheta_i[e]);
    acc += 0.5 * a * b * et.theta[e] + 0.5 * pv * b * d + 0.5 * pv * c_lp * et.theta[e] +
           c_p * et.theta[e] + a * d;
  }
  return acc;
}

double kolmogorov_forward_divergence_form(const WeightedGraph& g, const MeanFunction& mean,
                                          const SimplexFunctional& density,
                                          const Eigen::VectorXd& p) {
  check_probability(p, false, kOperatorSumSlack);
  const EdgeTheta et = edge_theta_data(g, mean, p);
  const double pv = density.value(p);
  const Eigen::VectorXd pg = density.gradient(p);
  const Eigen::MatrixXd ph = density.hessian(p);
  const Eigen::VectorXd lg = grad_log_pseudodet(g, mean, p);
  const Eigen::MatrixXd lh = log_pdet_hessian(g, mean, p);
  const Eigen::MatrixXd l = build_laplacian(g, mean, p).matrix();
  const Eigen::VectorXd row_d = laplacian_row_derivatives(g, et);

  // 0.5 div(P L grad log Pi) = 0.5 (grad P, L grad log Pi) + 0.5 P div(L grad log Pi)
  const double term1 = 0.5 * pg.dot(l * lg) +
                       0.5 * pv * (row_d.dot(lg) + trace_l_times(g, et, lh));
  // div(L grad P)
  const double term2 = row_d.dot(pg) + trace_l_times(g, et, ph);
  return term1 + term2;
}

double kolmogorov_backward(const WeightedGraph& g, const MeanFunction& mean,
                           const SimplexFunctional& testfn, const Eigen::VectorXd& p) {
  // Same three-term display as the Laplace-Beltrami operator.
  return laplace_beltrami(g, mean, testfn, p);
}

double kolmogorov_backward_compact_form(const WeightedGraph& g, const MeanFunction& mean,
                                        const SimplexFunctional& testfn,
                                        const Eigen::VectorXd& p) {
  check_probability(p, false, kOperatorSumSlack);
  const EdgeTheta et = edge_theta_data(g, mean, p);
  const Eigen::VectorXd fg = testfn.gradient(p);
  const Eigen::MatrixXd fh = testfn.hessian(p);
  const Eigen::VectorXd lg = grad_log_pseudodet(g, mean, p);
  const Eigen::MatrixXd l = build_laplacian(g, mean, p).matrix();
  return -0.5 * fg.dot(l * lg) + divergence_of_l_grad(g, et, fg, fh);
}

SimplexFunctional gibbs_density_functional(const WeightedGraph& g, const MeanFunction& mean,
                                           SimplexFunctional potential, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("gibbs_density_functional: beta must be positive");
  SimplexFunctional f;
  f.value = [g, mean, potential, beta](const Eigen::VectorXd& p) {
    const double lp = log_pseudo_determinant(g, mean, p);
    return std::exp(-potential.value(p) / beta - 0.5 * lp);
  };
  f.gradient = [g, mean, potential, beta](const Eigen::VectorXd& p) {
    const double lp = log_pseudo_determinant(g, mean, p);
    const double v = std::exp(-potential.value(p) / beta - 0.5 * lp);
    const Eigen::VectorXd q =
        (-potential.gradient(p) / beta - 0.5 * grad_log_pseudodet(g, mean, p)).eval();
    return (v * q).eval();
  };
  f.hessian = [g, mean, potential, beta](const Eigen::VectorXd& p) {
    const double lp = log_pseudo_determinant(g, mean, p);
    const double v = std::exp(-potential.value(p) / beta - 0.5 * lp);
    const Eigen::VectorXd q =
        (-potential.gradient(p) / beta - 0.5 * grad_log_pseudodet(g, mean, p)).eval();
    const Eigen::MatrixXd hlog =
        (-potential.hessian(p) / beta - 0.5 * log_pdet_hessian(g, mean, p)).eval();
    return (v * (q * q.transpose() + hlog)).eval();
  };
  return f;
}

}  // namespace simplex_langevin
