#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "simplex_langevin/dynamics.hpp"
#include "simplex_langevin/functional.hpp"
#include "simplex_langevin/graph.hpp"
#include "simplex_langevin/mean.hpp"

// Exact one-dimensional reduction of the simplex dynamics on the two-point
// graph: dx = -h^2 [theta V' - (beta/2) theta'] dt + h sqrt(2 beta theta) dB,
// its Gibbs stationary density rho* = Z^{-1} e^{-V/beta} theta^{-1/2}, and the
// histogram comparison behind the stationary-density figures.

namespace simplex_langevin {

struct TwoPointModel {
  double h = 1.0;     // sqrt(w_01)
  double beta = 1.0;  // noise strength
  std::function<double(double)> theta;            // theta(x) = theta_01(x, 1-x)
  std::function<double(double)> theta_prime;
  std::function<double(double)> potential;        // V(x) = V(x, 1-x)
  std::function<double(double)> potential_prime;  // dV/dx
};

// Requires a two-point graph.
TwoPointModel reduce(const WeightedGraph& g, const MeanFunction& mean,
                     const SimplexFunctional& potential, double beta);

struct DriftDiffusion {
  double drift = 0.0;
  double diffusion = 0.0;  // coefficient of dB
};

DriftDiffusion drift_diffusion_1d(const TwoPointModel& m, double x);

struct StationaryDensity {
  std::vector<double> x;    // interior grid (midpoints)
  std::vector<double> rho;  // normalized density values
  double normalization = 0.0;  // Z
};

// Normalization by graded Gauss-Legendre quadrature on [delta, 1-delta] with
// power-law tail estimates added back in closed form. nquad is the node count
// per subinterval; doubling it is the convergence check.
StationaryDensity stationary_density_1d(const TwoPointModel& m, int nquad, int grid_points = 401);

double stationary_normalization(const TwoPointModel& m, int nquad);

// Integral of rho* over each of `bins` uniform bins on [0,1].
std::vector<double> stationary_bin_masses(const TwoPointModel& m, int bins, int nquad);

// Sup norm over [lo, hi] of the 1-D Fokker-Planck residual
//   h^2 d/dx( rho [theta V' - (beta/2) theta'] ) + beta h^2 d^2/dx^2( rho theta )
// evaluated on rho = rho* with central differences of step fd.
double fpe_residual_sup(const TwoPointModel& m, double lo, double hi, int npts,
                        double fd = 5e-4, int nquad = 16);

// Cross-check of the 1-D reduction against the n-dimensional machinery at
// p = (x, 1-x): drift against dynamics::drift, squared diffusion against the
// conditional variance rate of the noise increment.
struct ReductionReport {
  double drift_1d = 0.0;
  double drift_nd = 0.0;
  double diffusion_sq_1d = 0.0;
  double variance_rate_nd = 0.0;
  double drift_error = 0.0;
  double variance_error = 0.0;
};

ReductionReport reduction_consistency(const WeightedGraph& g, const MeanFunction& mean,
                                      const SimplexFunctional& potential, double beta, double x);

// L1 distance between the occupancy histogram of the samples and the analytic
// bin masses; lies in [0, 2].
double histogram_distance(const std::vector<double>& samples,
                          const std::vector<double>& analytic_bin_mass);
double histogram_distance_counts(const std::vector<std::int64_t>& counts,
                                 const std::vector<double>& analytic_bin_mass);

struct Trajectory1D {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<std::int8_t> boundary_hit;
  std::int64_t boundary_interventions = 0;
};

// Euler-Maruyama on the reduced SDE. Uses the same counter-RNG keys as the
// two-point dynamics::simulate, so paths coincide for equal (seed, step).
Trajectory1D simulate_1d(const TwoPointModel& m, const SdeConfig& cfg, double x0);

struct HistogramRun {
  std::vector<std::int64_t> counts;
  std::int64_t retained = 0;
  std::int64_t boundary_interventions = 0;
  double final_x = 0.0;
};

// Long-run occupancy accumulation without storing the trajectory: after
// burn_in steps, every thinning-th state is binned.
HistogramRun simulate_histogram_1d(const TwoPointModel& m, const SdeConfig& cfg, double x0,
                                   std::int64_t total_steps, std::int64_t burn_in,
                                   std::int64_t thinning, int bins);

// Header t,p_0,p_1,boundary_hit with p_0 = x.
void write_trajectory_csv(const Trajectory1D& traj, std::ostream& os);

}  // namespace simplex_langevin
