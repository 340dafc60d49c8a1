#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

// Weighted undirected graph and its discrete calculus: gradient, divergence,
// Laplacian and the volume vector. Vector fields on edges are stored once per
// undirected edge with the orientation i < j, so antisymmetry (and with it
// exact mass conservation of every divergence) is structural.

namespace simplex_langevin {

struct Edge {
  int i = 0;  // i < j always
  int j = 0;
  double weight = 0.0;
};

class WeightedGraph {
 public:
  // Validates n >= 2, positive weights, no self loops, no duplicates, and
  // connectivity. Edges are normalized to i < j and sorted, so edge indices
  // are stable across runs.
  WeightedGraph(int n, std::vector<Edge> edges);

  static WeightedGraph two_point(double weight);

  // {"n": int, "edges": [{"i": int, "j": int, "w": float}, ...]}, 0-based.
  static WeightedGraph from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  int size() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::pair<int, double>>& neighbors(int i) const { return adj_[i]; }
  double weight(int i, int j) const { return w_(i, j); }

  // pi_i = sum_{j in N(i)} w_ij / sum over ordered edge pairs of w_ij.
  // Positive, sums to one; it is the stationary distribution of the chain.
  const Eigen::VectorXd& volume_vector() const { return pi_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  Eigen::MatrixXd w_;
  Eigen::VectorXd pi_;
};

// Values on undirected edges in graph edge order; value[e] is v_{ij} for
// edges()[e] with i < j, and v_{ji} = -v_{ij} by convention.
struct EdgeField {
  std::vector<double> value;
};

// (grad phi)_{ij} = sqrt(w_ij) (phi_j - phi_i)
EdgeField gradient(const WeightedGraph& g, const Eigen::VectorXd& phi);

// div(v)_i = sum_{j in N(i)} sqrt(w_ij) v_ij ; sums to zero exactly.
Eigen::VectorXd divergence(const WeightedGraph& g, const EdgeField& v);

// (lap phi)_i = sum_{j in N(i)} w_ij (phi_j - phi_i) = div(grad(phi))_i.
// Negative semi-definite as a matrix.
Eigen::VectorXd graph_laplacian(const WeightedGraph& g, const Eigen::VectorXd& phi);

}  // namespace simplex_langevin
