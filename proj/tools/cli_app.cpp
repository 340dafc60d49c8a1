#include "cli_app.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "simplex_langevin/calculus.hpp"
#include "simplex_langevin/config.hpp"
#include "simplex_langevin/dynamics.hpp"
#include "simplex_langevin/markov.hpp"
#include "simplex_langevin/metric.hpp"
#include "simplex_langevin/rng.hpp"
#include "simplex_langevin/twopoint.hpp"

namespace simplex_langevin::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;
constexpr int kExitIo = 4;
constexpr int kSchemaVersion = 1;

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  std::uint64_t seed_override = 0;
  bool has_seed_override = false;
  bool long_run = false;
  bool realize = false;
  std::string p_arg;
};

int worker_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SIMPLEX_LANGEVIN_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return static_cast<int>(hw);
}

ExperimentConfig load_config(const CliOptions& opt) {
  ExperimentConfig cfg = opt.preset.empty() ? ExperimentConfig::from_file(opt.config_path)
                                            : ExperimentConfig::preset(opt.preset);
  if (opt.has_seed_override) cfg.sde.seed = opt.seed_override;
  if (opt.long_run) cfg.stationary.enabled = true;
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open \"" + path.string() + "\" for writing");
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_output(path);
  out << doc.dump(2) << '\n';
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const CliOptions& opt) {
  const ExperimentConfig cfg = load_config(opt);
  const WeightedGraph g = cfg.make_graph();
  const MeanFunction mean = cfg.make_mean();
  const SimplexFunctional potential = cfg.make_potential(g);
  const Eigen::VectorXd p0 = cfg.make_initial_state(g.size());

  const auto t0 = std::chrono::steady_clock::now();
  struct MemberResult {
    std::uint64_t seed;
    Eigen::VectorXd final_state;
    std::int64_t boundary_hits;
    double max_mass_deviation;
  };
  std::vector<MemberResult> results(cfg.ensemble);
  std::vector<std::string> errors(cfg.ensemble);

  const int workers = std::min(worker_cap(), cfg.ensemble);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int k = next.fetch_add(1); k < cfg.ensemble; k = next.fetch_add(1)) {
      try {
        SdeConfig sde = cfg.sde;
        sde.seed = cfg.sde.seed + static_cast<std::uint64_t>(k);
        const Trajectory traj = simulate(g, mean, potential, sde, p0);
        const fs::path file =
            fs::path(opt.out_dir) /
            (cfg.ensemble == 1 ? std::string("trajectory.csv")
                               : "trajectory_" + std::to_string(k) + ".csv");
        std::ofstream out = open_output(file);
        write_trajectory_csv(traj, out);
        results[k] = {sde.seed, traj.states.back(), traj.boundary_interventions,
                      traj.max_mass_deviation};
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (int k = 0; k < cfg.ensemble; ++k) {
    if (!errors[k].empty()) throw std::runtime_error("member " + std::to_string(k) + ": " + errors[k]);
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json members = nlohmann::json::array();
  double worst_mass = 0.0;
  for (const MemberResult& r : results) {
    worst_mass = std::max(worst_mass, r.max_mass_deviation);
    members.push_back({{"seed", r.seed},
                       {"final_state", std::vector<double>(r.final_state.begin(), r.final_state.end())},
                       {"boundary_hits", r.boundary_hits},
                       {"max_mass_deviation", r.max_mass_deviation}});
  }
  write_json(fs::path(opt.out_dir) / "run_summary.json",
             {{"schema_version", kSchemaVersion},
              {"command", "simulate"},
              {"config", cfg.to_json()},
              {"members", members},
              {"max_mass_deviation", worst_mass},
              {"wall_time_s", wall}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass;
  double measured;
  double tolerance;
  std::string detail;
};

class Validator {
 public:
  explicit Validator(const ExperimentConfig& cfg) : cfg_(cfg) {}

  void check(const std::string& name, double measured, double tolerance) {
    results_.push_back({name, measured <= tolerance, measured, tolerance, ""});
  }

  template <typename Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      results_.push_back({name, false, 0.0, 0.0, e.what()});
    }
  }

  nlohmann::json report() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& r : results_) {
      nlohmann::json row = {{"name", r.name},
                            {"pass", r.pass},
                            {"measured", r.measured},
                            {"tolerance", r.tolerance}};
      if (!r.detail.empty()) row["error"] = r.detail;
      checks.push_back(row);
    }
    return {{"schema_version", kSchemaVersion},
            {"command", "validate"},
            {"all_pass", all_pass()},
            {"checks", checks}};
  }

  bool all_pass() const {
    for (const CheckResult& r : results_) {
      if (!r.pass) return false;
    }
    return true;
  }

  void run() {
    const WeightedGraph g = cfg_.make_graph();
    const MeanFunction mean = cfg_.make_mean();
    std::mt19937_64 rng(cfg_.sde.seed ^ 0x5eedf00dULL);

    guarded("graph.integration_by_parts", [&] {
      double worst = 0.0;
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd phi(g.size());
        for (int i = 0; i < g.size(); ++i) phi[i] = normal(rng);
        EdgeField v;
        for (int e = 0; e < g.edge_count(); ++e) v.value.push_back(normal(rng));
        double rhs = 0.0;
        const EdgeField gp = gradient(g, phi);
        for (int e = 0; e < g.edge_count(); ++e) rhs -= v.value[e] * gp.value[e];
        worst = std::max(worst, std::abs(phi.dot(divergence(g, v)) - rhs));
      }
      check("graph.integration_by_parts", worst, 1e-12);
    });

    guarded("graph.laplacian_negative_semidefinite", [&] {
      double worst = 0.0;
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd phi(g.size());
        for (int i = 0; i < g.size(); ++i) phi[i] = normal(rng);
        worst = std::max(worst, phi.dot(graph_laplacian(g, phi)));
      }
      check("graph.laplacian_negative_semidefinite", worst, 1e-12);
    });

    guarded("mean.partials_match_finite_differences", [&] {
      double worst = 0.0;
      std::uniform_real_distribution<double> u(0.05, 5.0);
      for (int trial = 0; trial < 100; ++trial) {
        const double x = u(rng), y = u(rng), fd = 1e-6;
        const auto [dx, dy] = mean.partials(x, y);
        const double fx = (mean(x + fd, y) - mean(x - fd, y)) / (2.0 * fd);
        const double fy = (mean(x, y + fd) - mean(x, y - fd)) / (2.0 * fd);
        worst = std::max({worst, std::abs(dx - fx) / (1.0 + std::abs(fx)),
                          std::abs(dy - fy) / (1.0 + std::abs(fy))});
      }
      check("mean.partials_match_finite_differences", worst, 1e-7);
    });

    auto random_interior = [&rng](int n) {
      std::exponential_distribution<double> expo(1.0);
      Eigen::VectorXd p(n);
      for (int i = 0; i < n; ++i) p[i] = expo(rng);
      p /= p.sum();
      p = 0.9 * p + Eigen::VectorXd::Constant(n, 0.1 / n);
      p /= p.sum();
      return p;
    };

    guarded("metric.pseudo_inverse_identities", [&] {
      double worst = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd p = random_interior(g.size());
        const WeightedLaplacian lap = build_laplacian(g, mean, p);
        const SpectralData sp = spectral(lap, cfg_.spectral_tolerance);
        worst = std::max(worst,
                         (lap.matrix() * sp.pseudo_inverse * lap.matrix() - lap.matrix()).norm() /
                             lap.matrix().norm());
      }
      check("metric.pseudo_inverse_identities", worst, 1e-10);
    });

    guarded("metric.three_route_agreement", [&] {
      double worst = 0.0;
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd p = random_interior(g.size());
        Eigen::VectorXd s1(g.size()), s2(g.size());
        for (int i = 0; i < g.size(); ++i) { s1[i] = normal(rng); s2[i] = normal(rng); }
        s1.array() -= s1.mean();
        s2.array() -= s2.mean();
        const double a = metric_inner(g, mean, p, s1, s2);
        const double b = metric_inner_potential(g, mean, p, s1, s2);
        const double c = metric_inner_edge_sum(g, mean, p, s1, s2);
        const double err = std::max(std::abs(a - b), std::abs(a - c)) / (1.0 + std::abs(a));
        worst = std::max(worst, err);
      }
      check("metric.three_route_agreement", worst, 1e-10);
    });

    guarded("metric.grad_log_pseudodet_vs_differences", [&] {
      double worst = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd p = random_interior(g.size());
        const Eigen::VectorXd grad = grad_log_pseudodet(g, mean, p, cfg_.spectral_tolerance);
        for (int m = 0; m + 1 < g.size(); ++m) {
          Eigen::VectorXd sigma = Eigen::VectorXd::Zero(g.size());
          sigma[m] = 1.0;
          sigma[g.size() - 1] = -1.0;
          const double eps = 1e-5;
          const double fd = (log_pseudo_determinant(g, mean, p + eps * sigma, cfg_.spectral_tolerance) -
                             log_pseudo_determinant(g, mean, p - eps * sigma, cfg_.spectral_tolerance)) /
                            (2.0 * eps);
          worst = std::max(worst, std::abs(grad.dot(sigma) - fd) / (1.0 + std::abs(fd)));
        }
      }
      check("metric.grad_log_pseudodet_vs_differences", worst, 1e-6);
    });

    guarded("calculus.laplace_beltrami_composition", [&] {
      double worst = 0.0;
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int trial = 0; trial < 10; ++trial) {
        const int n = g.size();
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
          b[i] = normal(rng);
          for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
        }
        const SimplexFunctional f = quadratic_functional(a, b, 0.0);
        const Eigen::VectorXd p = random_interior(n);
        const double direct = laplace_beltrami(g, mean, f, p);
        const double composed = div_w(g, mean, grad_w_functional(g, mean, f), p);
        worst = std::max(worst, std::abs(direct - composed) / (1.0 + std::abs(direct)));
      }
      check("calculus.laplace_beltrami_composition", worst, 1e-8);
    });

    guarded("calculus.forward_operator_forms", [&] {
      double worst = 0.0;
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int trial = 0; trial < 5; ++trial) {
        const int n = g.size();
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
          b[i] = normal(rng);
          for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
        }
        const SimplexFunctional f = quadratic_functional(a, b, 1.0);
        const Eigen::VectorXd p = random_interior(n);
        worst = std::max(worst, std::abs(kolmogorov_forward(g, mean, f, p) -
                                         kolmogorov_forward_divergence_form(g, mean, f, p)));
      }
      check("calculus.forward_operator_forms", worst, 1e-6);
    });

    guarded("markov.gradient_flow_correspondence", [&] {
      const PhiDivergence phi = phi_from_registry("kl");
      const MeanFunction matched = matched_mean(phi);
      const SimplexFunctional pot = phi_divergence_functional(phi, g);
      const Eigen::MatrixXd q = q_matrix(g);
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd p = random_interior(g.size());
        worst = std::max(worst, (drift(g, matched, pot, 0.0, p) - gradient_flow_rhs(q, p))
                                    .lpNorm<Eigen::Infinity>());
      }
      check("markov.gradient_flow_correspondence", worst, 1e-10);
    });

    guarded("markov.wasserstein_q_step_equivalence", [&] {
      const PhiDivergence phi = phi_from_registry("kl");
      const MeanFunction matched = matched_mean(phi);
      const SimplexFunctional pot = phi_divergence_functional(phi, g);
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd p = random_interior(g.size());
        const double beta = cfg_.sde.beta > 0 ? cfg_.sde.beta : 1.0;
        const double dt = cfg_.sde.dt;
        const Eigen::VectorXd em = drift(g, matched, pot, beta, p) * dt +
                                   noise_increment(g, matched, beta, dt, p, cfg_.sde.seed, trial);
        const EdgeRates rates = edge_rates_from_counter(g, cfg_.sde.seed, trial, dt);
        const WassersteinQMatrix qw = wasserstein_q(g, matched, p, beta, rates);
        worst = std::max(worst,
                         (wasserstein_q_rhs(qw, p) * dt - em).lpNorm<Eigen::Infinity>());
      }
      check("markov.wasserstein_q_step_equivalence", worst, 1e-12);
    });

    guarded("dynamics.mass_conservation", [&] {
      SdeConfig sde = cfg_.sde;
      sde.steps = std::min<std::int64_t>(sde.steps, 2000);
      const SimplexFunctional pot = cfg_.make_potential(g);
      const Trajectory traj = simulate(g, mean, pot, sde, cfg_.make_initial_state(g.size()));
      check("dynamics.mass_conservation", traj.max_mass_deviation, 1e-10);
    });

    if (g.size() == 2) {
      guarded("twopoint.reduction_consistency", [&] {
        const SimplexFunctional pot = cfg_.make_potential(g);
        double worst = 0.0;
        for (double x : {0.15, 0.4, 0.75}) {
          const ReductionReport rep =
              reduction_consistency(g, mean, pot, std::max(cfg_.sde.beta, 0.5), x);
          worst = std::max({worst, rep.drift_error, rep.variance_error});
        }
        check("twopoint.reduction_consistency", worst, 1e-10);
      });

      guarded("twopoint.fpe_stationarity", [&] {
        const SimplexFunctional pot = cfg_.make_potential(g);
        const TwoPointModel m =
            reduce(g, mean, pot, cfg_.sde.beta > 0 ? cfg_.sde.beta : 1.0);
        check("twopoint.fpe_stationarity", fpe_residual_sup(m, 0.05, 0.95, 91), 1e-4);
      });
    }
  }

 private:
  const ExperimentConfig& cfg_;
  std::vector<CheckResult> results_;
};

int cmd_validate(const CliOptions& opt) {
  const ExperimentConfig cfg = load_config(opt);
  Validator validator(cfg);
  validator.run();
  const nlohmann::json report = validator.report();
  std::cout << report.dump(2) << '\n';
  if (opt.out_dir != ".") write_json(fs::path(opt.out_dir) / "validate_report.json", report);
  return validator.all_pass() ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// qmatrix
// ---------------------------------------------------------------------------

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int cmd_qmatrix(const CliOptions& opt) {
  const ExperimentConfig cfg = load_config(opt);
  const WeightedGraph g = cfg.make_graph();
  nlohmann::json doc = {{"schema_version", kSchemaVersion},
                        {"command", "qmatrix"},
                        {"q", matrix_to_json(q_matrix(g))}};
  if (opt.realize) {
    const MeanFunction mean = cfg.make_mean();
    Eigen::VectorXd p;
    if (!opt.p_arg.empty()) {
      std::vector<double> vals;
      std::stringstream ss(opt.p_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
      p = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
    } else {
      p = cfg.make_initial_state(g.size());
    }
    check_probability(p);
    const double beta = cfg.sde.beta;
    const double dt = cfg.sde.dt;
    const EdgeRates rates = edge_rates_from_counter(g, cfg.sde.seed, 0, dt);
    const WassersteinQMatrix qw = wasserstein_q(g, mean, p, beta, rates);
    // Equivalence residual against the EM increment built from the same noise.
    const SimplexFunctional pot = cfg.make_potential(g);
    const Eigen::VectorXd em =
        drift(g, mean, pot, beta, p) * dt + noise_increment(g, mean, beta, dt, p, cfg.sde.seed, 0);
    const double residual = (wasserstein_q_rhs(qw, p) * dt - em).lpNorm<Eigen::Infinity>();
    doc["realized"] = {{"beta", beta},
                       {"dt", dt},
                       {"seed", cfg.sde.seed},
                       {"p", std::vector<double>(p.begin(), p.end())},
                       {"qw", matrix_to_json(qw.matrix)},
                       {"step_equivalence_residual", residual}};
  }
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// twopoint
// ---------------------------------------------------------------------------

int cmd_twopoint(const CliOptions& opt) {
  const ExperimentConfig cfg = load_config(opt);
  const WeightedGraph g = cfg.make_graph();
  if (g.size() != 2) throw ConfigError("twopoint: configuration must use a two-point graph");
  const MeanFunction mean = cfg.make_mean();
  const SimplexFunctional potential = cfg.make_potential(g);
  const double beta = cfg.sde.beta;
  if (!(beta > 0.0)) throw ConfigError("twopoint: beta must be positive");
  const TwoPointModel model = reduce(g, mean, potential, beta);
  const double x0 = cfg.make_initial_state(2)[0];

  const auto t0 = std::chrono::steady_clock::now();

  // Trajectory at the configured horizon.
  const Trajectory1D traj = simulate_1d(model, cfg.sde, x0);
  {
    std::ofstream out = open_output(fs::path(opt.out_dir) / "trajectory.csv");
    write_trajectory_csv(traj, out);
  }

  // Analytic stationary density.
  const StationaryDensity density = stationary_density_1d(model, 16, 401);
  {
    std::ofstream out = open_output(fs::path(opt.out_dir) / "density.csv");
    out << "x,rho_star\n";
    for (std::size_t k = 0; k < density.x.size(); ++k) {
      out << format_double(density.x[k]) << ',' << format_double(density.rho[k]) << '\n';
    }
  }

  // Occupancy histogram: the long protocol when enabled, otherwise the
  // trajectory samples after burn-in.
  const int bins = cfg.stationary.enabled ? cfg.stationary.bins : cfg.bins;
  const std::vector<double> masses = stationary_bin_masses(model, bins, 16);
  std::vector<std::int64_t> counts(bins, 0);
  std::int64_t retained = 0;
  std::int64_t histogram_boundary_hits = 0;
  if (cfg.stationary.enabled) {
    const std::int64_t total = cfg.stationary.steps;
    const std::int64_t burn =
        static_cast<std::int64_t>(cfg.stationary.burn_in_fraction * double(total));
    const HistogramRun run = simulate_histogram_1d(model, cfg.sde, x0, total, burn,
                                                   cfg.stationary.thinning, bins);
    counts = run.counts;
    retained = run.retained;
    histogram_boundary_hits = run.boundary_interventions;
  } else {
    const std::size_t burn =
        static_cast<std::size_t>(cfg.burn_in_fraction * double(traj.x.size()));
    for (std::size_t k = burn; k < traj.x.size(); ++k) {
      int b = static_cast<int>(traj.x[k] * bins);
      if (b >= bins) b = bins - 1;
      if (b < 0) b = 0;
      ++counts[b];
      ++retained;
    }
    histogram_boundary_hits = traj.boundary_interventions;
  }
  const double l1 = histogram_distance_counts(counts, masses);
  {
    std::ofstream out = open_output(fs::path(opt.out_dir) / "histogram.csv");
    out << "bin_left,bin_right,empirical,analytic\n";
    for (int b = 0; b < bins; ++b) {
      out << format_double(double(b) / bins) << ',' << format_double(double(b + 1) / bins) << ','
          << format_double(double(counts[b]) / double(retained)) << ','
          << format_double(masses[b]) << '\n';
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(fs::path(opt.out_dir) / "summary.json",
             {{"schema_version", kSchemaVersion},
              {"command", "twopoint"},
              {"config", cfg.to_json()},
              {"Z", density.normalization},
              {"l1_distance", l1},
              {"boundary_hits", histogram_boundary_hits},
              {"trajectory_boundary_hits", traj.boundary_interventions},
              {"retained", retained},
              {"wall_time_s", wall}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plot-data
// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open \"" + path.string() + "\"");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int cmd_plot_data(const std::string& trajectory_path, const std::string& density_path,
                  const std::string& histogram_path, const std::string& out_path) {
  std::ofstream out = open_output(out_path);
  out << "series,x,y\n";
  if (!trajectory_path.empty()) {
    const auto rows = read_csv(trajectory_path);
    // t,p_0,...,p_{n-1},boundary_hit
    const std::size_t cols = rows.at(0).size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
      for (std::size_t c = 1; c + 1 < cols; ++c) {
        out << "trajectory:" << rows[0][c] << ',' << rows[r][0] << ',' << rows[r][c] << '\n';
      }
    }
  }
  if (!density_path.empty()) {
    const auto rows = read_csv(density_path);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      out << "density," << rows[r][0] << ',' << rows[r][1] << '\n';
    }
  }
  if (!histogram_path.empty()) {
    const auto rows = read_csv(histogram_path);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double mid = 0.5 * (std::stod(rows[r][0]) + std::stod(rows[r][1]));
      out << "histogram_empirical," << format_double(mid) << ',' << rows[r][2] << '\n';
      out << "histogram_analytic," << format_double(mid) << ',' << rows[r][3] << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Wasserstein drift-diffusion processes on the probability simplex"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string traj_path, density_path, histogram_path, merged_path = "plot_data.csv";

  const auto add_common = [&](CLI::App* sub, bool preset_allowed = false) {
    CLI::Option* config = sub->add_option("--config", opt.config_path, "experiment config JSON");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option_function<std::uint64_t>(
           "--seed",
           [&opt](const std::uint64_t& s) {
             opt.seed_override = s;
             opt.has_seed_override = true;
           },
           "override the config seed");
    if (preset_allowed) {
      sub->add_option("--preset", opt.preset, "built-in preset (example5, example6)")
          ->excludes(config);
    } else {
      config->required();
    }
  };

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run the simplex SDE, write trajectories");
  add_common(simulate_cmd);

  CLI::App* validate_cmd = app.add_subcommand("validate", "run the invariant suite");
  add_common(validate_cmd);

  CLI::App* qmatrix_cmd = app.add_subcommand("qmatrix", "print Q and optionally a realized Q^W");
  add_common(qmatrix_cmd);
  qmatrix_cmd->add_flag("--realize", opt.realize, "also sample a Wasserstein Q-matrix");
  qmatrix_cmd->add_option("--p", opt.p_arg, "probability vector, comma separated");

  CLI::App* twopoint_cmd =
      app.add_subcommand("twopoint", "two-point trajectory, stationary density, histogram");
  add_common(twopoint_cmd, /*preset_allowed=*/true);
  twopoint_cmd->add_flag("--long", opt.long_run, "run the long stationary-histogram protocol");

  CLI::App* plot_cmd = app.add_subcommand("plot-data", "merge outputs into one tidy CSV");
  plot_cmd->add_option("--trajectory", traj_path, "trajectory CSV");
  plot_cmd->add_option("--density", density_path, "density CSV");
  plot_cmd->add_option("--histogram", histogram_path, "histogram CSV");
  plot_cmd->add_option("--out", merged_path, "merged output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(opt);
    if (validate_cmd->parsed()) return cmd_validate(opt);
    if (qmatrix_cmd->parsed()) return cmd_qmatrix(opt);
    if (twopoint_cmd->parsed()) return cmd_twopoint(opt);
    if (plot_cmd->parsed()) return cmd_plot_data(traj_path, density_path, histogram_path, merged_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace simplex_langevin::cli
