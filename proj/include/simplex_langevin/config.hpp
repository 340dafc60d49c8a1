#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "simplex_langevin/dynamics.hpp"
#include "simplex_langevin/functional.hpp"
#include "simplex_langevin/graph.hpp"
#include "simplex_langevin/mean.hpp"
#include "simplex_langevin/metric.hpp"

// Experiment configuration: JSON schema shared by every CLI subcommand.
// Unknown keys are rejected so typos fail loudly.

namespace simplex_langevin {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StationaryProtocol {
  bool enabled = false;
  std::int64_t steps = 0;
  std::int64_t thinning = 1;
  double burn_in_fraction = 0.1;
  int bins = 50;
};

struct ExperimentConfig {
  nlohmann::json graph_json;
  std::string mean = "geometric";
  std::string potential = "none";  // none | phi-divergence:<name> | quadratic-potential
  SdeConfig sde;
  std::vector<double> initial_state;  // empty = uniform
  double burn_in_fraction = 0.0;
  int bins = 50;
  int ensemble = 1;
  double spectral_tolerance = kSpectralZeroTolerance;
  StationaryProtocol stationary;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig from_file(const std::string& path);
  // Built-in presets "example5" and "example6" (also shipped under presets/).
  static ExperimentConfig preset(const std::string& name);

  nlohmann::json to_json() const;

  WeightedGraph make_graph() const;
  MeanFunction make_mean() const;
  SimplexFunctional make_potential(const WeightedGraph& g) const;
  Eigen::VectorXd make_initial_state(int n) const;
};

}  // namespace simplex_langevin
