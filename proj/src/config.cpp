#include "simplex_langevin/config.hpp"

#include <fstream>
#include <set>

#include "simplex_langevin/markov.hpp"

namespace simplex_langevin {

namespace {

void reject_unknown_keys(const nlohmann::json& doc, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
  }
}

BoundaryPolicy parse_boundary(const std::string& s) {
  if (s == "reflect-epsilon") return BoundaryPolicy::ReflectEpsilon;
  if (s == "reject-halve") return BoundaryPolicy::RejectHalve;
  throw ConfigError("config: unknown boundary policy \"" + s + "\"");
}

std::string boundary_name(BoundaryPolicy b) {
  return b == BoundaryPolicy::ReflectEpsilon ? "reflect-epsilon" : "reject-halve";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  try {
    reject_unknown_keys(doc,
                        {"graph", "mean", "potential", "beta", "dt", "steps", "seed", "boundary",
                         "epsilon", "max_retries", "thinning", "p0", "burn_in_fraction", "bins",
                         "ensemble", "spectral_tolerance", "stationary"},
                        "top level");
    ExperimentConfig cfg;
    if (!doc.contains("graph")) throw ConfigError("config: missing \"graph\"");
    cfg.graph_json = doc.at("graph");
    cfg.make_graph();  // validate now
    cfg.mean = doc.value("mean", cfg.mean);
    MeanFunction::from_name(cfg.mean);  // validate the registry name
    cfg.potential = doc.value("potential", cfg.potential);
    cfg.sde.beta = doc.value("beta", cfg.sde.beta);
    cfg.sde.dt = doc.value("dt", cfg.sde.dt);
    cfg.sde.steps = doc.value("steps", cfg.sde.steps);
    cfg.sde.seed = doc.value("seed", cfg.sde.seed);
    if (doc.contains("boundary")) cfg.sde.boundary = parse_boundary(doc.at("boundary"));
    cfg.sde.epsilon = doc.value("epsilon", cfg.sde.epsilon);
    cfg.sde.max_retries = doc.value("max_retries", cfg.sde.max_retries);
    cfg.sde.thinning = doc.value("thinning", cfg.sde.thinning);
    if (doc.contains("p0")) cfg.initial_state = doc.at("p0").get<std::vector<double>>();
    cfg.burn_in_fraction = doc.value("burn_in_fraction", cfg.burn_in_fraction);
    cfg.bins = doc.value("bins", cfg.bins);
    cfg.ensemble = doc.value("ensemble", cfg.ensemble);
    cfg.spectral_tolerance = doc.value("spectral_tolerance", cfg.spectral_tolerance);
    if (doc.contains("stationary")) {
      const nlohmann::json& st = doc.at("stationary");
      reject_unknown_keys(st, {"enabled", "steps", "thinning", "burn_in_fraction", "bins"},
                          "stationary");
      cfg.stationary.enabled = st.value("enabled", cfg.stationary.enabled);
      cfg.stationary.steps = st.value("steps", cfg.stationary.steps);
      cfg.stationary.thinning = st.value("thinning", cfg.stationary.thinning);
      cfg.stationary.burn_in_fraction = st.value("burn_in_fraction", cfg.stationary.burn_in_fraction);
      cfg.stationary.bins = st.value("bins", cfg.stationary.bins);
    }

    if (!(cfg.sde.dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (cfg.sde.steps < 0) throw ConfigError("config: steps must be nonnegative");
    if (!(cfg.sde.beta >= 0.0)) throw ConfigError("config: beta must be nonnegative");
    if (!(cfg.sde.epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
    if (cfg.sde.thinning < 1) throw ConfigError("config: thinning must be >= 1");
    if (cfg.burn_in_fraction < 0.0 || cfg.burn_in_fraction >= 1.0)
      throw ConfigError("config: burn_in_fraction must lie in [0,1)");
    if (cfg.bins < 2) throw ConfigError("config: bins must be >= 2");
    if (cfg.ensemble < 1) throw ConfigError("config: ensemble must be >= 1");

    // Validate registry references and the initial state.
    const WeightedGraph g = cfg.make_graph();
    cfg.make_potential(g);
    check_probability(cfg.make_initial_state(g.size()));
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON in \"") + path + "\": " + e.what());
  }
  return from_json(doc);
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  // The paper's Examples 5 and 6: two-point graph with h = 0.1 (w = h^2),
  // beta = 1, x0 = 0.5, t in [0,1] at dt = 1e-3 for the trajectory run. The
  // long stationary-histogram protocol keeps 10^6 thinned samples after 10%
  // burn-in and is opt-in (--long).
  nlohmann::json doc = {
      {"graph", {{"n", 2}, {"edges", {{{"i", 0}, {"j", 1}, {"w", 0.01}}}}}},
      {"beta", 1.0},
      {"dt", 1e-3},
      {"steps", 1000},
      {"boundary", "reflect-epsilon"},
      {"epsilon", 1e-3},
      {"p0", {0.5, 0.5}},
      {"bins", 50},
      {"stationary",
       {{"enabled", false},
        {"steps", std::int64_t{66666660}},
        {"thinning", std::int64_t{60}},
        {"burn_in_fraction", 0.1},
        {"bins", 50}}},
  };
  if (name == "example5") {
    doc["mean"] = "geometric";
    doc["potential"] = "none";
    doc["seed"] = 20240601;
  } else if (name == "example6") {
    doc["mean"] = "logarithmic";
    doc["potential"] = "phi-divergence:kl";
    doc["seed"] = 20240602;
  } else {
    throw ConfigError("config: unknown preset \"" + name + "\"");
  }
  return from_json(doc);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json doc = {
      {"graph", graph_json},
      {"mean", mean},
      {"potential", potential},
      {"beta", sde.beta},
      {"dt", sde.dt},
      {"steps", sde.steps},
      {"seed", sde.seed},
      {"boundary", boundary_name(sde.boundary)},
      {"epsilon", sde.epsilon},
      {"max_retries", sde.max_retries},
      {"thinning", sde.thinning},
      {"burn_in_fraction", burn_in_fraction},
      {"bins", bins},
      {"ensemble", ensemble},
      {"spectral_tolerance", spectral_tolerance},
      {"stationary",
       {{"enabled", stationary.enabled},
        {"steps", stationary.steps},
        {"thinning", stationary.thinning},
        {"burn_in_fraction", stationary.burn_in_fraction},
        {"bins", stationary.bins}}},
  };
  if (!initial_state.empty()) doc["p0"] = initial_state;
  return doc;
}

WeightedGraph ExperimentConfig::make_graph() const { return WeightedGraph::from_json(graph_json); }

MeanFunction ExperimentConfig::make_mean() const { return MeanFunction::from_name(mean); }

SimplexFunctional ExperimentConfig::make_potential(const WeightedGraph& g) const {
  if (potential == "none") return zero_functional();
  if (potential.rfind("phi-divergence:", 0) == 0) {
    return phi_divergence_functional(phi_from_registry(potential.substr(15)), g);
  }
  if (potential == "quadratic-potential") {
    // 0.5 |p - pi|^2, a simple confining test functional
    const Eigen::VectorXd pi = g.volume_vector();
    const int n = g.size();
    return quadratic_functional(Eigen::MatrixXd::Identity(n, n), -pi, 0.5 * pi.squaredNorm());
  }
  throw ConfigError("config: unknown potential \"" + potential + "\"");
}

Eigen::VectorXd ExperimentConfig::make_initial_state(int n) const {
  if (initial_state.empty()) return Eigen::VectorXd::Constant(n, 1.0 / n);
  if (static_cast<int>(initial_state.size()) != n)
    throw ConfigError("config: p0 has wrong length");
  return Eigen::Map<const Eigen::VectorXd>(initial_state.data(), n);
}

}  // namespace simplex_langevin
