#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "simplex_langevin/graph.hpp"
#include "support.hpp"

using namespace simplex_langevin;
using simplex_langevin::testing::random_connected_graph;

TEST_CASE("volume vector: two-point graph is uniform") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  CHECK(g.volume_vector()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.volume_vector()[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("volume vector: equal-weight triangle is uniform") {
  const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  for (int i = 0; i < 3; ++i) {
    CHECK(g.volume_vector()[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("volume vector: path 1-2-3 with weights 1, 2") {
  // Ordered-pair denominator 2(1+2) = 6.
  const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  CHECK(g.volume_vector()[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(g.volume_vector()[1] == doctest::Approx(3.0 / 6.0).epsilon(1e-15));
  CHECK(g.volume_vector()[2] == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("volume vector sums to one on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedGraph g = random_connected_graph(rng, 2 + int(rng() % 5));
    CHECK(g.volume_vector().sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((g.volume_vector().array() > 0.0).all());
  }
}

TEST_CASE("graph construction rejections") {
  CHECK_THROWS_AS(WeightedGraph(1, {}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}}), std::invalid_argument);  // disconnected
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 0, 1.0}}), std::invalid_argument);               // self loop
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, -1.0}}), std::invalid_argument);              // bad weight
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 5, 1.0}}), std::invalid_argument);               // range
}

TEST_CASE("gradient on the two-point graph") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  Eigen::Vector2d phi(0.0, 1.0);
  const EdgeField f = gradient(g, phi);
  CHECK(f.value[0] == doctest::Approx(1.0).epsilon(1e-15));  // (grad phi)_01 = 1, _10 = -1 by convention

  const WeightedGraph g4 = WeightedGraph::two_point(4.0);
  CHECK(gradient(g4, phi).value[0] == doctest::Approx(2.0).epsilon(1e-15));  // sqrt(4) (1-0)
}

TEST_CASE("gradient of a constant is zero") {
  std::mt19937_64 rng(12);
  const WeightedGraph g = random_connected_graph(rng, 5);
  const EdgeField f = gradient(g, Eigen::VectorXd::Constant(5, 3.7));
  for (double v : f.value) CHECK(v == 0.0);
}

TEST_CASE("divergence examples") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  EdgeField v{{1.0}};
  const Eigen::VectorXd d = divergence(g, v);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(-1.0).epsilon(1e-15));

  // triangle, unit weights, v_01 = 1, v_12 = 1, v_02 = 0 -> (1, 0, -1)
  const WeightedGraph tri(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
  // edges sorted: (0,1), (0,2), (1,2)
  const Eigen::VectorXd dt = divergence(tri, EdgeField{{1.0, 0.0, 1.0}});
  CHECK(dt[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dt[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(dt[2] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("divergence sums to zero for any edge field") {
  // Each edge contributes a cancelling pair, so the total is zero up to the
  // rounding of the per-vertex accumulators.
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    EdgeField v;
    for (int e = 0; e < g.edge_count(); ++e) v.value.push_back(normal(rng));
    CHECK(std::abs(divergence(g, v).sum()) <= 1e-13);
  }
  // Single-edge graph: bitwise cancellation.
  const WeightedGraph two = WeightedGraph::two_point(1.37);
  CHECK(divergence(two, EdgeField{{0.1234}}).sum() == 0.0);
}

TEST_CASE("discrete integration by parts") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = normal(rng);
    EdgeField v;
    for (int e = 0; e < g.edge_count(); ++e) v.value.push_back(normal(rng));

    const double lhs = phi.dot(divergence(g, v));
    // -1/2 sum over ordered pairs = -sum over undirected edges
    const EdgeField gphi = gradient(g, phi);
    double rhs = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) rhs -= v.value[e] * gphi.value[e];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("laplacian equals div of grad and is negative semidefinite") {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = normal(rng);

    const Eigen::VectorXd lap = graph_laplacian(g, phi);
    const Eigen::VectorXd composed = divergence(g, gradient(g, phi));
    CHECK((lap - composed).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-12));

    // phi^T lap phi = -1/2 sum_ordered w (phi_i - phi_j)^2 <= 0
    double edge_energy = 0.0;
    for (const Edge& e : g.edges()) {
      edge_energy += e.weight * (phi[e.i] - phi[e.j]) * (phi[e.i] - phi[e.j]);
    }
    const double quad = phi.dot(lap);
    CHECK(quad <= 1e-12);
    CHECK(quad == doctest::Approx(-edge_energy).epsilon(1e-12));
  }
}

TEST_CASE("laplacian on constants and the two-point example") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  CHECK(graph_laplacian(g, Eigen::Vector2d(5.0, 5.0)).norm() == 0.0);
  const Eigen::VectorXd lap = graph_laplacian(g, Eigen::Vector2d(0.0, 1.0));
  CHECK(lap[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lap[1] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("json round trip and parse errors") {
  const WeightedGraph g(3, {{0, 1, 1.5}, {1, 2, 2.5}});
  const WeightedGraph h = WeightedGraph::from_json(g.to_json());
  CHECK(h.size() == 3);
  CHECK(h.weight(0, 1) == 1.5);
  CHECK(h.weight(2, 1) == 2.5);
  CHECK_THROWS(WeightedGraph::from_json(nlohmann::json{{"n", 3}}));
  CHECK_THROWS(WeightedGraph::from_json(nlohmann::json::parse(R"({"n":2,"edges":[]})")));
}

TEST_CASE("size mismatches are rejected") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  CHECK_THROWS_AS(gradient(g, Eigen::Vector3d(0, 1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(divergence(g, EdgeField{{1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(graph_laplacian(g, Eigen::Vector3d(0, 1, 2)), std::invalid_argument);
}
