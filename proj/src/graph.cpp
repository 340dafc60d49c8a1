#include "simplex_langevin/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace simplex_langevin {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 2) throw std::invalid_argument("WeightedGraph: need at least 2 vertices");
  for (Edge& e : edges) {
    if (e.i == e.j) throw std::invalid_argument("WeightedGraph: self loop");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n) throw std::invalid_argument("WeightedGraph: vertex index out of range");
    if (!(e.weight > 0.0)) throw std::invalid_argument("WeightedGraph: edge weight must be positive");
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
      throw std::invalid_argument("WeightedGraph: duplicate edge");
  }
  edges_ = std::move(edges);

  w_ = Eigen::MatrixXd::Zero(n_, n_);
  adj_.assign(n_, {});
  for (const Edge& e : edges_) {
    w_(e.i, e.j) = e.weight;
    w_(e.j, e.i) = e.weight;
    adj_[e.i].emplace_back(e.j, e.weight);
    adj_[e.j].emplace_back(e.i, e.weight);
  }

  // Connectivity (BFS). The spectral machinery relies on it.
  std::vector<char> seen(n_, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : adj_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  if (reached != n_) throw std::invalid_argument("WeightedGraph: graph is disconnected");

  // Volume vector, Eq.-style ordered-pair denominator (each edge twice).
  Eigen::VectorXd rowsum = w_.rowwise().sum();
  pi_ = rowsum / rowsum.sum();
}

WeightedGraph WeightedGraph::two_point(double weight) {
  return WeightedGraph(2, {{0, 1, weight}});
}

WeightedGraph WeightedGraph::from_json(const nlohmann::json& doc) {
  if (!doc.contains("n") || !doc.contains("edges"))
    throw std::invalid_argument("graph json: expected fields \"n\" and \"edges\"");
  const int n = doc.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    edges.push_back({e.at("i").get<int>(), e.at("j").get<int>(), e.at("w").get<double>()});
  }
  return WeightedGraph(n, std::move(edges));
}

nlohmann::json WeightedGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : edges_) {
    edges.push_back({{"i", e.i}, {"j", e.j}, {"w", e.weight}});
  }
  return {{"n", n_}, {"edges", edges}};
}

EdgeField gradient(const WeightedGraph& g, const Eigen::VectorXd& phi) {
  if (phi.size() != g.size()) throw std::invalid_argument("gradient: node vector has wrong length");
  EdgeField out;
  out.value.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    out.value.push_back(std::sqrt(e.weight) * (phi[e.j] - phi[e.i]));
  }
  return out;
}

Eigen::VectorXd divergence(const WeightedGraph& g, const EdgeField& v) {
  if (static_cast<int>(v.value.size()) != g.edge_count())
    throw std::invalid_argument("divergence: edge field has wrong length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double flow = std::sqrt(edges[e].weight) * v.value[e];
    out[edges[e].i] += flow;
    out[edges[e].j] -= flow;
  }
  return out;
}

Eigen::VectorXd graph_laplacian(const WeightedGraph& g, const Eigen::VectorXd& phi) {
  if (phi.size() != g.size()) throw std::invalid_argument("graph_laplacian: node vector has wrong length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (const Edge& e : g.edges()) {
    const double flow = e.weight * (phi[e.j] - phi[e.i]);
    out[e.i] += flow;
    out[e.j] -= flow;
  }
  return out;
}

}  // namespace simplex_langevin
