#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "simplex_langevin/functional.hpp"
#include "simplex_langevin/graph.hpp"
#include "simplex_langevin/mean.hpp"

// Euler-Maruyama time stepping of the gradient drift-diffusion SDE on the
// simplex. Drift and noise are both divergences of antisymmetric edge fluxes,
// so every step conserves total mass exactly.

namespace simplex_langevin {

enum class BoundaryPolicy {
  ReflectEpsilon,  // clamp into the epsilon-interior, restore the mass defect
  RejectHalve,     // redraw with halved dt until the epsilon-interior is hit
};

struct SdeConfig {
  double beta = 1.0;
  double dt = 1e-3;
  std::int64_t steps = 1000;
  std::uint64_t seed = 0;
  BoundaryPolicy boundary = BoundaryPolicy::ReflectEpsilon;
  double epsilon = 1e-3;
  int max_retries = 30;
  std::int64_t thinning = 1;  // record every thinning-th step
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  // 1 if any boundary intervention happened since the previous recorded row.
  std::vector<std::int8_t> boundary_hit;
  std::int64_t boundary_interventions = 0;
  double max_mass_deviation = 0.0;  // max |sum p - 1| seen along the way
  SdeConfig config;
};

struct StepFailureError : std::runtime_error {
  StepFailureError(const std::string& what, Eigen::VectorXd state_)
      : std::runtime_error(what), state(std::move(state_)) {}
  Eigen::VectorXd state;
};

// d_i = sum_{j in N(i)} w_ij theta_ij (d/dp_j - d/dp_i)
//         [ V(p) + beta log(Pi(p)^{1/2} / theta_ij(p)) ].
// Sums to zero exactly (antisymmetric edge flux).
Eigen::VectorXd drift(const WeightedGraph& g, const MeanFunction& mean,
                      const SimplexFunctional& potential, double beta, const Eigen::VectorXd& p);

// eta_i = sqrt(beta) sum_{j in N(i)} sqrt(w_ij theta_ij) (dB_ij - dB_ji) with
// dB ~ N(0, dt) from the counter RNG keyed (seed, step, edge, salt). Sums to
// zero exactly; conditional covariance is 2 beta dt L(p).
Eigen::VectorXd noise_increment(const WeightedGraph& g, const MeanFunction& mean, double beta,
                                double dt, const Eigen::VectorXd& p, std::uint64_t seed,
                                std::uint64_t step, std::uint32_t salt = 0);

struct StepResult {
  Eigen::VectorXd state;
  double dt_used = 0.0;
  bool boundary_hit = false;
  int retries = 0;
};

StepResult em_step(const WeightedGraph& g, const MeanFunction& mean,
                   const SimplexFunctional& potential, const SdeConfig& cfg,
                   const Eigen::VectorXd& p, std::uint64_t step_index);

Trajectory simulate(const WeightedGraph& g, const MeanFunction& mean,
                    const SimplexFunctional& potential, const SdeConfig& cfg,
                    const Eigen::VectorXd& p0);

// Header t,p_0,...,p_{n-1},boundary_hit; one row per recorded step.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace simplex_langevin
