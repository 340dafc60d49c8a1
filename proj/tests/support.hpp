#pragma once

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <vector>

#include "simplex_langevin/functional.hpp"
#include "simplex_langevin/graph.hpp"

// Shared generators and finite-difference helpers for the test suites.

namespace simplex_langevin::testing {

// Random spanning tree plus a few extra edges; always connected.
inline WeightedGraph random_connected_graph(std::mt19937_64& rng, int n, double wmin = 0.5,
                                            double wmax = 2.0) {
  std::uniform_real_distribution<double> weight(wmin, wmax);
  std::vector<Edge> edges;
  Eigen::MatrixXd have = Eigen::MatrixXd::Zero(n, n);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    const int u = pick(rng);
    edges.push_back({u, v, weight(rng)});
    have(u, v) = have(v, u) = 1.0;
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int extra = 0; extra < n; ++extra) {
    const int u = any(rng), v = any(rng);
    if (u != v && have(u, v) == 0.0) {
      edges.push_back({std::min(u, v), std::max(u, v), weight(rng)});
      have(u, v) = have(v, u) = 1.0;
    }
  }
  return WeightedGraph(n, edges);
}

// Dirichlet-like draw pulled toward the barycenter so points stay interior.
inline Eigen::VectorXd random_interior_point(std::mt19937_64& rng, int n, double pull = 0.1) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p[i] = expo(rng);
  p /= p.sum();
  p = (1.0 - pull) * p + Eigen::VectorXd::Constant(n, pull / n);
  p /= p.sum();
  return p;
}

inline Eigen::VectorXd random_tangent(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = normal(rng);
  s.array() -= s.mean();
  return s;
}

inline SimplexFunctional random_quadratic(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = normal(rng);
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  }
  return quadratic_functional(a, b, normal(rng));
}

// Central difference of f along a direction (tangent perturbations keep the
// iterates on the simplex when sigma sums to zero).
inline double directional_fd(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& p, const Eigen::VectorXd& sigma,
                             double eps = 1e-5) {
  return (f(p + eps * sigma) - f(p - eps * sigma)) / (2.0 * eps);
}

}  // namespace simplex_langevin::testing
