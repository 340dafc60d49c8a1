#include "simplex_langevin/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "simplex_langevin/metric.hpp"
#include "simplex_langevin/rng.hpp"

namespace simplex_langevin {

Eigen::VectorXd drift(const WeightedGraph& g, const MeanFunction& mean,
                      const SimplexFunctional& potential, double beta, const Eigen::VectorXd& p) {
  check_probability(p);
  const Eigen::VectorXd& pi = g.volume_vector();
  const Eigen::VectorXd vg = potential.gradient(p);
  Eigen::VectorXd lg;
  if (beta != 0.0) lg = grad_log_pseudodet(g, mean, p);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (const Edge& e : g.edges()) {
    const double xi = p[e.i] / pi[e.i];
    const double xj = p[e.j] / pi[e.j];
    const double th = mean(xi, xj);
    // w theta (d_j - d_i)[V + beta/2 log Pi] - beta w (d_j - d_i) theta_ij
    double flux = e.weight * th * (vg[e.j] - vg[e.i]);
    if (beta != 0.0) {
      const auto [dx, dy] = mean.partials(xi, xj);
      flux += beta * e.weight *
              (0.5 * th * (lg[e.j] - lg[e.i]) - (dy / pi[e.j] - dx / pi[e.i]));
    }
    out[e.i] += flux;
    out[e.j] -= flux;
  }
  return out;
}

Eigen::VectorXd noise_increment(const WeightedGraph& g, const MeanFunction& mean, double beta,
                                double dt, const Eigen::VectorXd& p, std::uint64_t seed,
                                std::uint64_t step, std::uint32_t salt) {
  check_probability(p, /*closed=*/true);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  if (beta == 0.0) return out;
  const Eigen::VectorXd& pi = g.volume_vector();
  const double sqrt_dt = std::sqrt(dt);
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double th = mean(p[edges[e].i] / pi[edges[e].i], p[edges[e].j] / pi[edges[e].j]);
    const auto [z_ij, z_ji] = normal_pair(seed, step, static_cast<std::uint32_t>(e), salt);
    const double amp = std::sqrt(beta * edges[e].weight * th);
    const double flux = amp * sqrt_dt * (z_ij - z_ji);
    out[edges[e].i] += flux;
    out[edges[e].j] -= flux;
  }
  return out;
}

namespace {

// Clamp into [eps, 1-(n-1)eps] and push the mass defect back along the
// all-ones direction, iterating on the coordinates that stay free.
bool reflect_epsilon(Eigen::VectorXd& p, double eps) {
  const int n = static_cast<int>(p.size());
  const double lo = eps;
  const double hi = 1.0 - (n - 1) * eps;
  bool touched = false;
  for (int pass = 0; pass < 8; ++pass) {
    bool clamped = false;
    for (int i = 0; i < n; ++i) {
      if (p[i] < lo) { p[i] = lo; clamped = true; }
      else if (p[i] > hi) { p[i] = hi; clamped = true; }
    }
    touched = touched || clamped;
    const double defect = 1.0 - p.sum();
    if (defect == 0.0) break;
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
      if (p[i] > lo && p[i] < hi) ++free_count;
    }
    if (free_count == 0) {
      p.array() += defect / n;
    } else {
      const double shift = defect / free_count;
      for (int i = 0; i < n; ++i) {
        if (p[i] > lo && p[i] < hi) p[i] += shift;
      }
    }
    if (!clamped && std::abs(defect) < 1e-15) break;
  }
  // Exact mass restoration on the coordinate with the most slack.
  const double defect = 1.0 - p.sum();
  if (defect != 0.0) {
    int best = 0;
    double best_slack = -1.0;
    for (int i = 0; i < n; ++i) {
      const double slack = std::min(p[i] - lo, hi - p[i]);
      if (slack > best_slack) { best_slack = slack; best = i; }
    }
    p[best] += defect;
  }
  return touched;
}

}  // namespace

StepResult em_step(const WeightedGraph& g, const MeanFunction& mean,
                   const SimplexFunctional& potential, const SdeConfig& cfg,
                   const Eigen::VectorXd& p, std::uint64_t step_index) {
  const Eigen::VectorXd d = drift(g, mean, potential, cfg.beta, p);
  StepResult res;
  if (cfg.boundary == BoundaryPolicy::ReflectEpsilon) {
    res.state = p + cfg.dt * d + noise_increment(g, mean, cfg.beta, cfg.dt, p, cfg.seed, step_index);
    res.dt_used = cfg.dt;
    res.boundary_hit = reflect_epsilon(res.state, cfg.epsilon);
    return res;
  }
  // reject-halve
  double dt = cfg.dt;
  for (int retry = 0; retry <= cfg.max_retries; ++retry) {
    Eigen::VectorXd candidate =
        p + dt * d +
        noise_increment(g, mean, cfg.beta, dt, p, cfg.seed, step_index,
                        static_cast<std::uint32_t>(retry));
    if ((candidate.array() >= cfg.epsilon).all()) {
      res.state = std::move(candidate);
      res.dt_used = dt;
      res.boundary_hit = retry > 0;
      res.retries = retry;
      return res;
    }
    dt *= 0.5;
  }
  throw StepFailureError("em_step: reject-halve exhausted max retries at step " +
                             std::to_string(step_index),
                         p);
}

Trajectory simulate(const WeightedGraph& g, const MeanFunction& mean,
                    const SimplexFunctional& potential, const SdeConfig& cfg,
                    const Eigen::VectorXd& p0) {
  check_probability(p0);
  if (cfg.dt <= 0.0) throw std::invalid_argument("simulate: dt must be positive");
  if (cfg.thinning < 1) throw std::invalid_argument("simulate: thinning must be >= 1");

  Trajectory traj;
  traj.config = cfg;
  const std::int64_t recorded = cfg.steps / cfg.thinning + 1;
  traj.times.reserve(recorded);
  traj.states.reserve(recorded);
  traj.boundary_hit.reserve(recorded);

  Eigen::VectorXd p = p0;
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(p);
  traj.boundary_hit.push_back(0);

  bool hit_since_record = false;
  for (std::int64_t k = 1; k <= cfg.steps; ++k) {
    StepResult step = em_step(g, mean, potential, cfg, p, static_cast<std::uint64_t>(k - 1));
    p = std::move(step.state);
    t += step.dt_used;
    if (step.boundary_hit) {
      ++traj.boundary_interventions;
      hit_since_record = true;
    }
    const double dev = std::abs(p.sum() - 1.0);
    if (dev > traj.max_mass_deviation) traj.max_mass_deviation = dev;
    if (k % cfg.thinning == 0) {
      traj.times.push_back(t);
      traj.states.push_back(p);
      traj.boundary_hit.push_back(hit_since_record ? 1 : 0);
      hit_since_record = false;
    }
  }
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
  os << "t";
  for (int i = 0; i < n; ++i) os << ",p_" << i;
  os << ",boundary_hit\n";
  char buf[32];
  for (std::size_t r = 0; r < traj.states.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "%.17g", traj.times[r]);
    os << buf;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", traj.states[r][i]);
      os << ',' << buf;
    }
    os << ',' << int(traj.boundary_hit[r]) << '\n';
  }
}

}  // namespace simplex_langevin
