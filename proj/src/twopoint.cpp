#include "simplex_langevin/twopoint.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "simplex_langevin/metric.hpp"
#include "simplex_langevin/rng.hpp"

namespace simplex_langevin {

namespace {

constexpr double kTailCutoff = 1e-8;

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * z * p1 - k * p2) / (k + 1);
      }
      deriv = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / deriv;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * deriv * deriv);
  }
}

double gl_segment(const std::function<double(double)>& f, double a, double b,
                  const std::vector<double>& nodes, const std::vector<double>& weights) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(mid + half * nodes[k]);
  return half * acc;
}

// Integrate f over [a, b] with subintervals refined geometrically toward the
// singular point x = 0 (segment ends double their distance from zero).
double graded_toward_zero(const std::function<double(double)>& f, double a, double b, int nquad) {
  std::vector<double> nodes, weights;
  gauss_legendre(nquad, nodes, weights);
  double acc = 0.0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(2.0 * lo, b);
    acc += gl_segment(f, lo, hi, nodes, weights);
    lo = hi;
  }
  return acc;
}

// Same refinement toward the singular point x = 1: integrate f over [a, b]
// with b = 1 - delta by reflecting onto [delta, 1 - a].
double graded_toward_one(const std::function<double(double)>& f, double a, double b, int nquad) {
  return graded_toward_zero([&f](double y) { return f(1.0 - y); }, 1.0 - b, 1.0 - a, nquad);
}

// Closed-form integral of the local power-law fit rho(x) ~ C x^{-alpha} over
// [0, delta]; alpha estimated from the values at delta and 2 delta.
double left_tail(const std::function<double(double)>& f, double delta) {
  const double f1 = f(delta);
  if (!(f1 > 0.0)) return 0.0;
  const double alpha = std::log2(f1 / f(2.0 * delta));
  if (alpha >= 0.95)
    throw std::runtime_error("stationary density: non-integrable endpoint singularity");
  return f1 * delta / (1.0 - alpha);
}

double unnormalized_density(const TwoPointModel& m, double x) {
  return std::exp(-m.potential(x) / m.beta) / std::sqrt(m.theta(x));
}

double normalization_once(const TwoPointModel& m, int nquad) {
  const auto f = [&m](double x) { return unnormalized_density(m, x); };
  const double body = graded_toward_zero(f, kTailCutoff, 0.5, nquad) +
                      graded_toward_one(f, 0.5, 1.0 - kTailCutoff, nquad);
  const double tails =
      left_tail(f, kTailCutoff) + left_tail([&f](double y) { return f(1.0 - y); }, kTailCutoff);
  return body + tails;
}

}  // namespace

TwoPointModel reduce(const WeightedGraph& g, const MeanFunction& mean,
                     const SimplexFunctional& potential, double beta) {
  if (g.size() != 2) throw std::invalid_argument("reduce: graph must have exactly two vertices");
  const double w = g.weight(0, 1);
  const Eigen::VectorXd pi = g.volume_vector();
  const double pi0 = pi[0], pi1 = pi[1];

  TwoPointModel m;
  m.h = std::sqrt(w);
  m.beta = beta;
  m.theta = [mean, pi0, pi1](double x) { return mean(x / pi0, (1.0 - x) / pi1); };
  m.theta_prime = [mean, pi0, pi1](double x) {
    const auto [dx, dy] = mean.partials(x / pi0, (1.0 - x) / pi1);
    return dx / pi0 - dy / pi1;
  };
  m.potential = [potential](double x) {
    return potential.value(Eigen::Vector2d(x, 1.0 - x));
  };
  m.potential_prime = [potential](double x) {
    const Eigen::VectorXd grad = potential.gradient(Eigen::Vector2d(x, 1.0 - x));
    return grad[0] - grad[1];
  };
  return m;
}

DriftDiffusion drift_diffusion_1d(const TwoPointModel& m, double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("drift_diffusion_1d: x must lie in (0,1)");
  const double h2 = m.h * m.h;
  DriftDiffusion out;
  out.drift = -h2 * (m.theta(x) * m.potential_prime(x) - 0.5 * m.beta * m.theta_prime(x));
  out.diffusion = m.h * std::sqrt(2.0 * m.beta * m.theta(x));
  return out;
}

double stationary_normalization(const TwoPointModel& m, int nquad) {
  if (!(m.beta > 0.0)) throw std::invalid_argument("stationary density: beta must be positive");
  const double z = normalization_once(m, nquad);
  const double z2 = normalization_once(m, 2 * nquad);
  if (std::abs(z2 - z) > 1e-6 * std::abs(z2))
    throw std::runtime_error("stationary density: quadrature did not converge (divergent Z?)");
  return z2;
}

StationaryDensity stationary_density_1d(const TwoPointModel& m, int nquad, int grid_points) {
  StationaryDensity out;
  out.normalization = stationary_normalization(m, nquad);
  out.x.reserve(grid_points);
  out.rho.reserve(grid_points);
  for (int k = 0; k < grid_points; ++k) {
    const double x = (k + 0.5) / grid_points;
    out.x.push_back(x);
    out.rho.push_back(unnormalized_density(m, x) / out.normalization);
  }
  return out;
}

std::vector<double> stationary_bin_masses(const TwoPointModel& m, int bins, int nquad) {
  if (bins < 2) throw std::invalid_argument("stationary_bin_masses: need at least 2 bins");
  const double z = stationary_normalization(m, nquad);
  const auto f = [&m](double x) { return unnormalized_density(m, x); };
  std::vector<double> masses(bins);
  for (int b = 0; b < bins; ++b) {
    const double lo = double(b) / bins;
    const double hi = double(b + 1) / bins;
    double mass;
    if (b == 0) {
      mass = left_tail(f, kTailCutoff) + graded_toward_zero(f, kTailCutoff, hi, nquad);
    } else if (b == bins - 1) {
      mass = left_tail([&f](double y) { return f(1.0 - y); }, kTailCutoff) +
             graded_toward_one(f, lo, 1.0 - kTailCutoff, nquad);
    } else {
      mass = graded_toward_zero(f, lo, hi, nquad);
    }
    masses[b] = mass / z;
  }
  return masses;
}

double fpe_residual_sup(const TwoPointModel& m, double lo, double hi, int npts, double fd,
                        int nquad) {
  if (npts < 2) throw std::invalid_argument("fpe_residual_sup: need at least 2 points");
  const double z = stationary_normalization(m, nquad);
  const double h2 = m.h * m.h;
  const auto rho = [&m, z](double x) { return unnormalized_density(m, x) / z; };
  const auto flux = [&m, &rho](double x) {
    return rho(x) * (m.theta(x) * m.potential_prime(x) - 0.5 * m.beta * m.theta_prime(x));
  };
  const auto rho_theta = [&m, &rho](double x) { return rho(x) * m.theta(x); };
  double sup = 0.0;
  for (int k = 0; k < npts; ++k) {
    const double x = lo + (hi - lo) * k / (npts - 1);
    const double d1 = (flux(x + fd) - flux(x - fd)) / (2.0 * fd);
    const double d2 = (rho_theta(x + fd) - 2.0 * rho_theta(x) + rho_theta(x - fd)) / (fd * fd);
    sup = std::max(sup, std::abs(h2 * d1 + m.beta * h2 * d2));
  }
  return sup;
}

ReductionReport reduction_consistency(const WeightedGraph& g, const MeanFunction& mean,
                                      const SimplexFunctional& potential, double beta, double x) {
  if (g.size() != 2) throw std::invalid_argument("reduction_consistency: two-point graph required");
  const TwoPointModel m = reduce(g, mean, potential, beta);
  const DriftDiffusion dd = drift_diffusion_1d(m, x);

  const Eigen::Vector2d p(x, 1.0 - x);
  const Eigen::VectorXd d_nd = drift(g, mean, potential, beta, p);

  // Conditional variance rate of the noise increment at vertex 0:
  // 2 beta sum_j w_0j theta_0j.
  const Eigen::VectorXd pi = g.volume_vector();
  const double theta01 = mean(p[0] / pi[0], p[1] / pi[1]);
  const double var_rate = 2.0 * beta * g.weight(0, 1) * theta01;

  ReductionReport rep;
  rep.drift_1d = dd.drift;
  rep.drift_nd = d_nd[0];
  rep.diffusion_sq_1d = dd.diffusion * dd.diffusion;
  rep.variance_rate_nd = var_rate;
  rep.drift_error = std::abs(rep.drift_1d - rep.drift_nd);
  rep.variance_error = std::abs(rep.diffusion_sq_1d - rep.variance_rate_nd);
  return rep;
}

double histogram_distance(const std::vector<double>& samples,
                          const std::vector<double>& analytic_bin_mass) {
  if (samples.empty()) throw std::invalid_argument("histogram_distance: empty trajectory");
  const int bins = static_cast<int>(analytic_bin_mass.size());
  std::vector<std::int64_t> counts(bins, 0);
  for (double s : samples) {
    int b = static_cast<int>(s * bins);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  return histogram_distance_counts(counts, analytic_bin_mass);
}

double histogram_distance_counts(const std::vector<std::int64_t>& counts,
                                 const std::vector<double>& analytic_bin_mass) {
  if (counts.size() != analytic_bin_mass.size())
    throw std::invalid_argument("histogram_distance: bin count mismatch");
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  if (total == 0) throw std::invalid_argument("histogram_distance: empty trajectory");
  double l1 = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    l1 += std::abs(double(counts[b]) / double(total) - analytic_bin_mass[b]);
  }
  return l1;
}

namespace {

struct Step1D {
  double x;
  double dt_used;
  bool hit;
};

Step1D em_step_1d(const TwoPointModel& m, const SdeConfig& cfg, double x, std::uint64_t step) {
  const double h2 = m.h * m.h;
  const double theta = m.theta(x);
  const double drift =
      -h2 * (theta * m.potential_prime(x) - 0.5 * m.beta * m.theta_prime(x));
  if (cfg.boundary == BoundaryPolicy::ReflectEpsilon) {
    const auto [z_ij, z_ji] = normal_pair(cfg.seed, step, 0);
    double next = x + cfg.dt * drift +
                  m.h * std::sqrt(m.beta * theta) * std::sqrt(cfg.dt) * (z_ij - z_ji);
    bool hit = false;
    if (next < cfg.epsilon) { next = cfg.epsilon; hit = true; }
    if (next > 1.0 - cfg.epsilon) { next = 1.0 - cfg.epsilon; hit = true; }
    return {next, cfg.dt, hit};
  }
  double dt = cfg.dt;
  for (int retry = 0; retry <= cfg.max_retries; ++retry) {
    const auto [z_ij, z_ji] = normal_pair(cfg.seed, step, 0, static_cast<std::uint32_t>(retry));
    const double next =
        x + dt * drift + m.h * std::sqrt(m.beta * theta) * std::sqrt(dt) * (z_ij - z_ji);
    if (next >= cfg.epsilon && next <= 1.0 - cfg.epsilon) return {next, dt, retry > 0};
    dt *= 0.5;
  }
  throw StepFailureError("em_step_1d: reject-halve exhausted max retries",
                         Eigen::Vector2d(x, 1.0 - x));
}

}  // namespace

Trajectory1D simulate_1d(const TwoPointModel& m, const SdeConfig& cfg, double x0) {
  if (!(x0 > 0.0 && x0 < 1.0)) throw std::invalid_argument("simulate_1d: x0 must lie in (0,1)");
  Trajectory1D traj;
  traj.times.push_back(0.0);
  traj.x.push_back(x0);
  traj.boundary_hit.push_back(0);
  double x = x0;
  double t = 0.0;
  bool hit_since_record = false;
  for (std::int64_t k = 1; k <= cfg.steps; ++k) {
    const Step1D s = em_step_1d(m, cfg, x, static_cast<std::uint64_t>(k - 1));
    x = s.x;
    t += s.dt_used;
    if (s.hit) {
      ++traj.boundary_interventions;
      hit_since_record = true;
    }
    if (k % cfg.thinning == 0) {
      traj.times.push_back(t);
      traj.x.push_back(x);
      traj.boundary_hit.push_back(hit_since_record ? 1 : 0);
      hit_since_record = false;
    }
  }
  return traj;
}

HistogramRun simulate_histogram_1d(const TwoPointModel& m, const SdeConfig& cfg, double x0,
                                   std::int64_t total_steps, std::int64_t burn_in,
                                   std::int64_t thinning, int bins) {
  if (!(x0 > 0.0 && x0 < 1.0))
    throw std::invalid_argument("simulate_histogram_1d: x0 must lie in (0,1)");
  HistogramRun run;
  run.counts.assign(bins, 0);
  double x = x0;
  for (std::int64_t k = 0; k < total_steps; ++k) {
    const Step1D s = em_step_1d(m, cfg, x, static_cast<std::uint64_t>(k));
    x = s.x;
    if (s.hit) ++run.boundary_interventions;
    if (k >= burn_in && (k - burn_in) % thinning == 0) {
      int b = static_cast<int>(x * bins);
      if (b >= bins) b = bins - 1;
      ++run.counts[b];
      ++run.retained;
    }
  }
  run.final_x = x;
  return run;
}

void write_trajectory_csv(const Trajectory1D& traj, std::ostream& os) {
  os << "t,p_0,p_1,boundary_hit\n";
  char buf[32];
  for (std::size_t r = 0; r < traj.x.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "%.17g", traj.times[r]);
    os << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", traj.x[r]);
    os << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", 1.0 - traj.x[r]);
    os << ',' << buf << ',' << int(traj.boundary_hit[r]) << '\n';
  }
}

}  // namespace simplex_langevin
