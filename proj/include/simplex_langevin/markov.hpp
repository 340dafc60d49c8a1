#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "simplex_langevin/functional.hpp"
#include "simplex_langevin/graph.hpp"
#include "simplex_langevin/mean.hpp"

// The classical Q-matrix of the reversible chain, phi-divergence potentials,
// and the stochastic Wasserstein Q-matrix whose master-equation update
// reproduces the Euler-Maruyama step exactly when built from the same noise.

namespace simplex_langevin {

struct PhiDivergence {
  std::string name;
  std::function<double(double)> phi;         // convex, phi(1) = 0
  std::function<double(double)> phi_prime;
  std::function<double(double)> phi_second;  // > 0
};

// Built-ins: "kl" (x log x) and "quadratic" ((x-1)^2/2, constant mean).
PhiDivergence phi_from_registry(const std::string& name);

// The phi'-mean induced by phi; the pairing that makes the beta=0 drift the
// linear Markov right-hand side.
MeanFunction matched_mean(const PhiDivergence& phi);

// Q_ij = w_ij/pi_i off the diagonal; rows sum to zero exactly and detailed
// balance Q_ij pi_i = Q_ji pi_j holds.
Eigen::MatrixXd q_matrix(const WeightedGraph& g);

// D_phi(p || pi) = sum_i phi(p_i/pi_i) pi_i with analytic derivatives.
SimplexFunctional phi_divergence_functional(const PhiDivergence& phi, const WeightedGraph& g);

// (sum_j [Q_ji p_j - Q_ij p_i])_i, the Kolmogorov forward right-hand side.
Eigen::VectorXd gradient_flow_rhs(const Eigen::MatrixXd& q, const Eigen::VectorXd& p);

// Realized white-noise rates per undirected edge: (Bdot_ij, Bdot_ji).
struct EdgeRates {
  std::vector<std::pair<double, double>> rates;
};

// Bdot = dB/dt with dB ~ N(0, dt) drawn from the counter RNG, so a Q-matrix
// built from these rates reproduces the EM step for the same (seed, step).
EdgeRates edge_rates_from_counter(const WeightedGraph& g, std::uint64_t seed, std::uint64_t step,
                                  double dt);

struct WassersteinQMatrix {
  Eigen::MatrixXd matrix;  // row sums exactly zero, off-diagonals >= 0
  EdgeRates rates;
  double beta = 0.0;
};

WassersteinQMatrix wasserstein_q(const WeightedGraph& g, const MeanFunction& mean,
                                 const Eigen::VectorXd& p, double beta, const EdgeRates& rates);

// sum_j [QW_ji p_j - QW_ij p_i], the master-equation rate of change.
Eigen::VectorXd wasserstein_q_rhs(const WassersteinQMatrix& qw, const Eigen::VectorXd& p);

// exp(-V(p)/beta) Pi(p)^{-1/2}, the Gibbs stationary density up to Z.
double stationary_density_unnormalized(const WeightedGraph& g, const MeanFunction& mean,
                                       const SimplexFunctional& potential, double beta,
                                       const Eigen::VectorXd& p);

}  // namespace simplex_langevin
