#include "simplex_langevin/markov.hpp"

#include <cmath>
#include <stdexcept>

#include "simplex_langevin/metric.hpp"
#include "simplex_langevin/rng.hpp"

namespace simplex_langevin {

PhiDivergence phi_from_registry(const std::string& name) {
  if (name == "kl") {
    return PhiDivergence{
        "kl",
        [](double x) { return x == 0.0 ? 0.0 : x * std::log(x); },
        [](double x) { return std::log(x) + 1.0; },
        [](double x) { return 1.0 / x; },
    };
  }
  if (name == "quadratic") {
    return PhiDivergence{
        "quadratic",
        [](double x) { return 0.5 * (x - 1.0) * (x - 1.0); },
        [](double x) { return x - 1.0; },
        [](double) { return 1.0; },
    };
  }
  throw std::invalid_argument("unknown phi divergence: \"" + name + "\"");
}

MeanFunction matched_mean(const PhiDivergence& phi) {
  return MeanFunction::phi_prime(phi.name, phi.phi_prime, phi.phi_second);
}

Eigen::MatrixXd q_matrix(const WeightedGraph& g) {
  const Eigen::VectorXd& pi = g.volume_vector();
  const int n = g.size();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    q(e.i, e.j) = e.weight / pi[e.i];
    q(e.j, e.i) = e.weight / pi[e.j];
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) off += q(i, j);
    }
    q(i, i) = -off;
  }
  return q;
}

SimplexFunctional phi_divergence_functional(const PhiDivergence& phi, const WeightedGraph& g) {
  const Eigen::VectorXd pi = g.volume_vector();
  SimplexFunctional f;
  f.value = [phi, pi](const Eigen::VectorXd& p) {
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) acc += phi.phi(p[i] / pi[i]) * pi[i];
    return acc;
  };
  f.gradient = [phi, pi](const Eigen::VectorXd& p) {
    Eigen::VectorXd out(p.size());
    for (int i = 0; i < p.size(); ++i) out[i] = phi.phi_prime(p[i] / pi[i]);
    return out;
  };
  f.hessian = [phi, pi](const Eigen::VectorXd& p) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p.size(), p.size());
    for (int i = 0; i < p.size(); ++i) out(i, i) = phi.phi_second(p[i] / pi[i]) / pi[i];
    return out;
  };
  return f;
}

Eigen::VectorXd gradient_flow_rhs(const Eigen::MatrixXd& q, const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += q(j, i) * p[j] - q(i, j) * p[i];
    out[i] = acc;
  }
  return out;
}

EdgeRates edge_rates_from_counter(const WeightedGraph& g, std::uint64_t seed, std::uint64_t step,
                                  double dt) {
  EdgeRates out;
  out.rates.reserve(g.edge_count());
  const double inv_sqrt_dt = 1.0 / std::sqrt(dt);
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [z_ij, z_ji] = normal_pair(seed, step, static_cast<std::uint32_t>(e));
    out.rates.emplace_back(z_ij * inv_sqrt_dt, z_ji * inv_sqrt_dt);
  }
  return out;
}

WassersteinQMatrix wasserstein_q(const WeightedGraph& g, const MeanFunction& mean,
                                 const Eigen::VectorXd& p, double beta, const EdgeRates& rates) {
  check_probability(p);  // requires p_i > 0 for the 1/p_i rates
  if (static_cast<int>(rates.rates.size()) != g.edge_count())
    throw std::invalid_argument("wasserstein_q: wrong number of edge rates");

  const Eigen::VectorXd& pi = g.volume_vector();
  const int n = g.size();
  Eigen::VectorXd lg;
  if (beta != 0.0) lg = grad_log_pseudodet(g, mean, p);

  WassersteinQMatrix out;
  out.rates = rates;
  out.beta = beta;
  out.matrix = q_matrix(g);
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e].i, j = edges[e].j;
    double a_ij = 0.0;  // A_ij(p); A_ji = -A_ij
    if (beta != 0.0) {
      const double xi = p[i] / pi[i];
      const double xj = p[j] / pi[j];
      const double th = mean(xi, xj);
      const auto [dx, dy] = mean.partials(xi, xj);
      a_ij = beta * edges[e].weight *
                 (0.5 * th * (lg[j] - lg[i]) - (dy / pi[j] - dx / pi[i])) +
             std::sqrt(beta * edges[e].weight * th) *
                 (rates.rates[e].first - rates.rates[e].second);
    }
    out.matrix(i, j) += std::max(0.0, -a_ij) / p[i];  // a_ij(p) = max{0, A_ji}/p_i
    out.matrix(j, i) += std::max(0.0, a_ij) / p[j];
  }
  for (int i = 0; i < n; ++i) {
    out.matrix(i, i) = 0.0;
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) off += out.matrix(i, j);
    }
    out.matrix(i, i) = -off;
  }
  return out;
}

Eigen::VectorXd wasserstein_q_rhs(const WassersteinQMatrix& qw, const Eigen::VectorXd& p) {
  return gradient_flow_rhs(qw.matrix, p);
}

double stationary_density_unnormalized(const WeightedGraph& g, const MeanFunction& mean,
                                       const SimplexFunctional& potential, double beta,
                                       const Eigen::VectorXd& p) {
  if (!(beta > 0.0))
    throw std::invalid_argument("stationary_density_unnormalized: beta must be positive");
  check_probability(p);
  const double lp = log_pseudo_determinant(g, mean, p);
  return std::exp(-potential.value(p) / beta - 0.5 * lp);
}

}  // namespace simplex_langevin
