#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "simplex_langevin/dynamics.hpp"
#include "simplex_langevin/markov.hpp"
#include "simplex_langevin/metric.hpp"
#include "support.hpp"

using namespace simplex_langevin;
using namespace simplex_langevin::testing;

TEST_CASE("q matrix: two-point example, detailed balance, exact row sums") {
  const WeightedGraph g2 = WeightedGraph::two_point(1.0);
  const Eigen::MatrixXd q2 = q_matrix(g2);
  CHECK(q2(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(q2(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(q2(1, 0) == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::MatrixXd q = q_matrix(g);
    const Eigen::VectorXd pi = g.volume_vector();
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          off += q(i, j);
          CHECK(q(i, j) >= 0.0);
          // Q_ij pi_i = Q_ji pi_j = w_ij by cancellation.
          CHECK(std::abs(q(i, j) * pi[i] - g.weight(i, j)) <= 1e-14 * (1.0 + g.weight(i, j)));
        }
      }
      CHECK(off + q(i, i) == 0.0);
    }
  }
}

TEST_CASE("phi divergence functional: KL values and derivatives") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  const SimplexFunctional dkl = phi_divergence_functional(phi_from_registry("kl"), g);

  // p = pi gives zero for any admissible phi.
  CHECK(dkl.value(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(phi_divergence_functional(phi_from_registry("quadratic"), g)
            .value(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.0).epsilon(1e-15));

  // Frozen: 0.7 log 1.4 + 0.3 log 0.6.
  CHECK(dkl.value(Eigen::Vector2d(0.7, 0.3)) ==
        doctest::Approx(0.082282878505051846392).epsilon(1e-14));

  // gradient_i = phi'(p_i/pi_i); Hessian is diagonal phi''(p_i/pi_i)/pi_i.
  const Eigen::Vector2d p(0.7, 0.3);
  const Eigen::VectorXd grad = dkl.gradient(p);
  CHECK(grad[0] == doctest::Approx(std::log(1.4) + 1.0).epsilon(1e-14));
  CHECK(grad[1] == doctest::Approx(std::log(0.6) + 1.0).epsilon(1e-14));
  const Eigen::MatrixXd hess = dkl.hessian(p);
  CHECK(hess(0, 0) == doctest::Approx(1.0 / 1.4 / 0.5).epsilon(1e-14));
  CHECK(hess(0, 1) == 0.0);

  // KL extends continuously to the closed simplex.
  CHECK(dkl.value(Eigen::Vector2d(0.0, 1.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("phi divergence derivatives match finite differences") {
  std::mt19937_64 rng(72);
  for (const std::string name : {"kl", "quadratic"}) {
    const PhiDivergence phi = phi_from_registry(name);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 2 + int(rng() % 4);
      const WeightedGraph g = random_connected_graph(rng, n);
      const SimplexFunctional f = phi_divergence_functional(phi, g);
      const Eigen::VectorXd p = random_interior_point(rng, n);
      const Eigen::VectorXd grad = f.gradient(p);
      const Eigen::MatrixXd hess = f.hessian(p);
      for (int m = 0; m + 1 < n; ++m) {
        Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
        sigma[m] = 1.0;
        sigma[n - 1] = -1.0;
        const double fd = directional_fd(f.value, p, sigma);
        CHECK(grad.dot(sigma) == doctest::Approx(fd).epsilon(1e-6));
        const double hfd = directional_fd(
            [&f, &sigma](const Eigen::VectorXd& q) { return f.gradient(q).dot(sigma); }, p, sigma);
        CHECK(sigma.dot(hess * sigma) == doctest::Approx(hfd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("gradient flow right-hand side") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  const Eigen::MatrixXd q = q_matrix(g);
  CHECK(gradient_flow_rhs(q, Eigen::Vector2d(0.5, 0.5)).lpNorm<Eigen::Infinity>() <= 1e-15);
  // x = 0.7: dx/dt = 2(1 - 2x) = -0.8
  CHECK(gradient_flow_rhs(q, Eigen::Vector2d(0.7, 0.3))[0] ==
        doctest::Approx(-0.8).epsilon(1e-14));
}

TEST_CASE("wasserstein Q: beta = 0 recovers Q bitwise") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    const EdgeRates rates = edge_rates_from_counter(g, trial, 0, 1e-3);
    const WassersteinQMatrix qw =
        wasserstein_q(g, MeanFunction::logarithmic(), p, 0.0, rates);
    CHECK((qw.matrix - q_matrix(g)).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("wasserstein Q: row sums exactly zero, off-diagonals nonnegative") {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    const double beta = 0.3 + 0.4 * (trial % 4);
    const EdgeRates rates = edge_rates_from_counter(g, 1000 + trial, trial, 1e-3);
    const WassersteinQMatrix qw =
        wasserstein_q(g, MeanFunction::geometric(), p, beta, rates);
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          CHECK(qw.matrix(i, j) >= 0.0);
          off += qw.matrix(i, j);
        }
      }
      CHECK(off + qw.matrix(i, i) == 0.0);
    }
  }
}

TEST_CASE("wasserstein Q rejects boundary points") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  const EdgeRates rates = edge_rates_from_counter(g, 1, 0, 1e-3);
  CHECK_THROWS_AS(
      wasserstein_q(g, MeanFunction::geometric(), Eigen::Vector2d(0.0, 1.0), 1.0, rates),
      std::invalid_argument);
}

TEST_CASE("step equivalence: the QW master equation reproduces the EM step") {
  std::mt19937_64 rng(75);
  const PhiDivergence phi = phi_from_registry("kl");
  const MeanFunction mean = matched_mean(phi);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const SimplexFunctional pot = phi_divergence_functional(phi, g);
    const Eigen::VectorXd p = random_interior_point(rng, n);

    SdeConfig cfg;
    cfg.beta = 0.25 + 0.5 * (trial % 3);
    cfg.dt = 1e-3;
    cfg.seed = 9000 + trial;
    const std::uint64_t step = trial;

    const Eigen::VectorXd em_increment =
        drift(g, mean, pot, cfg.beta, p) * cfg.dt +
        noise_increment(g, mean, cfg.beta, cfg.dt, p, cfg.seed, step);
    const EdgeRates rates = edge_rates_from_counter(g, cfg.seed, step, cfg.dt);
    const WassersteinQMatrix qw = wasserstein_q(g, mean, p, cfg.beta, rates);
    const Eigen::VectorXd qw_increment = wasserstein_q_rhs(qw, p) * cfg.dt;
    CHECK((em_increment - qw_increment).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("unnormalized stationary density") {
  const double w = 1.6;
  const WeightedGraph g = WeightedGraph::two_point(w);
  const MeanFunction mean = MeanFunction::geometric();
  for (double x : {0.2, 0.5, 0.8}) {
    const Eigen::Vector2d p(x, 1.0 - x);
    const double theta = 2.0 * std::sqrt(x * (1.0 - x));
    // V = 0, beta = 1: Pi^{-1/2} with Pi = 2 w theta.
    const double got = stationary_density_unnormalized(g, mean, zero_functional(), 1.0, p);
    CHECK(got == doctest::Approx(1.0 / std::sqrt(2.0 * w * theta)).epsilon(1e-12));
  }
  // With a potential, the Boltzmann factor multiplies in.
  const SimplexFunctional pot = phi_divergence_functional(phi_from_registry("kl"), g);
  const Eigen::Vector2d p(0.3, 0.7);
  const double beta = 0.8;
  const double direct = stationary_density_unnormalized(g, mean, pot, beta, p);
  const double assembled = std::exp(-pot.value(p) / beta) *
                           stationary_density_unnormalized(g, mean, zero_functional(), 1.0, p);
  CHECK(direct == doctest::Approx(assembled).epsilon(1e-13));
  CHECK_THROWS_AS(stationary_density_unnormalized(g, mean, pot, 0.0, p), std::invalid_argument);
}

TEST_CASE("phi registry validation") {
  CHECK_THROWS_AS(phi_from_registry("unknown"), std::invalid_argument);
  CHECK(matched_mean(phi_from_registry("kl")).kind() == MeanKind::PhiPrime);
  // The matched mean of the quadratic divergence is the constant mean.
  CHECK(matched_mean(phi_from_registry("quadratic"))(0.4, 1.9) ==
        doctest::Approx(1.0).epsilon(1e-14));
}
