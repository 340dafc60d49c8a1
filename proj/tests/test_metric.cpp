#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "simplex_langevin/metric.hpp"
#include "support.hpp"

using namespace simplex_langevin;
using namespace simplex_langevin::testing;

namespace {

std::vector<MeanFunction> interior_means() {
  return {MeanFunction::geometric(), MeanFunction::harmonic(), MeanFunction::logarithmic(),
          MeanFunction::from_name("phi-prime:kl")};
}

}  // namespace

TEST_CASE("two-point laplacian matches the displayed matrix") {
  const double w = 1.7;
  const WeightedGraph g = WeightedGraph::two_point(w);
  const MeanFunction geo = MeanFunction::geometric();
  const Eigen::Vector2d p(0.3, 0.7);
  const double theta = geo(0.3 / 0.5, 0.7 / 0.5);
  const Eigen::MatrixXd l = build_laplacian(g, geo, p).matrix();
  CHECK(l(0, 0) == doctest::Approx(w * theta).epsilon(1e-15));
  CHECK(l(0, 1) == doctest::Approx(-w * theta).epsilon(1e-15));
  CHECK(l(1, 0) == doctest::Approx(-w * theta).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(w * theta).epsilon(1e-15));

  // uniform p: theta(1,1) = 1
  const Eigen::MatrixXd lu = build_laplacian(g, geo, Eigen::Vector2d(0.5, 0.5)).matrix();
  CHECK(lu(0, 0) == doctest::Approx(w).epsilon(1e-15));
}

TEST_CASE("uniform triangle laplacian") {
  const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  const Eigen::MatrixXd l =
      build_laplacian(g, MeanFunction::geometric(), Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3))
          .matrix();
  Eigen::Matrix3d want;
  want << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK((l - want).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("laplacian row sums are exactly zero and the form is PSD") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    for (const MeanFunction& mean : interior_means()) {
      const Eigen::MatrixXd l = build_laplacian(g, mean, p).matrix();
      // The diagonal is the negated in-order off-diagonal sum, so summing the
      // off-diagonals first cancels bitwise.
      for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j != i) off += l(i, j);
        }
        CHECK(off + l(i, i) == 0.0);
      }
      CHECK((l - l.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
      const Eigen::VectorXd phi = random_tangent(rng, n);
      CHECK(phi.dot(l * phi) >= -1e-13);
      // ones^T L phi = 0
      CHECK(Eigen::VectorXd::Ones(n).dot(l * phi) == doctest::Approx(0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("two-point spectral data: pseudo-determinant and pseudo-inverse") {
  const double w = 0.8;
  const WeightedGraph g = WeightedGraph::two_point(w);
  const MeanFunction geo = MeanFunction::geometric();
  const Eigen::Vector2d p(0.3, 0.7);
  const double theta = geo(0.6, 1.4);
  const SpectralData sp = spectral(build_laplacian(g, geo, p));

  CHECK(sp.pseudo_determinant == doctest::Approx(2.0 * w * theta).epsilon(1e-12));
  CHECK(std::abs(sp.eigenvalues[0]) <= 1e-14);

  Eigen::Matrix2d li_want;
  li_want << 1, -1, -1, 1;
  li_want /= 4.0 * w * theta;
  CHECK((sp.pseudo_inverse - li_want).lpNorm<Eigen::Infinity>() ==
        doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("kernel eigenvector is the normalized ones vector") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    const SpectralData sp = spectral(build_laplacian(g, MeanFunction::logarithmic(), p));
    const Eigen::VectorXd u0 = sp.eigenvectors.col(0);
    const double sign = u0.sum() > 0 ? 1.0 : -1.0;
    CHECK((sign * u0 - Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n))))
              .lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("pseudo-inverse identities L L+ L = L and L+ L L+ = L+") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    for (const MeanFunction& mean : interior_means()) {
      const WeightedLaplacian lap = build_laplacian(g, mean, p);
      const SpectralData sp = spectral(lap);
      const Eigen::MatrixXd& l = lap.matrix();
      const Eigen::MatrixXd& li = sp.pseudo_inverse;
      const double scale = l.norm();
      CHECK((l * li * l - l).norm() / scale <= 1e-10);
      CHECK((li * l * li - li).norm() / li.norm() <= 1e-10);
    }
  }
}

TEST_CASE("exactly one near-zero eigenvalue on interior points") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + int(rng() % 4);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    for (const MeanFunction& mean : interior_means()) {
      const SpectralData sp = spectral(build_laplacian(g, mean, p));
      CHECK(sp.eigenvalues[1] > 0.0);
      CHECK(sp.pseudo_determinant > 0.0);
    }
  }
}

TEST_CASE("degenerate spectrum fails loudly") {
  // Near-boundary p drives a second eigenvalue below the threshold.
  const WeightedGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  Eigen::Vector3d p(1e-22, 0.5, 0.5 - 1e-22);
  CHECK_THROWS_AS(spectral(build_laplacian(path, MeanFunction::geometric(), p)),
                  DegenerateSpectrumError);

  // Tampered thresholds break both ways (a sharpened tolerance stops seeing
  // the kernel eigenvalue; a huge one swallows the whole spectrum).
  const WeightedLaplacian lap3 = build_laplacian(path, MeanFunction::geometric(),
                                                 Eigen::Vector3d(0.3, 0.45, 0.25));
  CHECK_THROWS_AS(spectral(lap3, 1e-30), DegenerateSpectrumError);
  const WeightedLaplacian lap = build_laplacian(WeightedGraph::two_point(1.0),
                                                MeanFunction::geometric(),
                                                Eigen::Vector2d(0.4, 0.6));
  CHECK_THROWS_AS(spectral(lap, 10.0), DegenerateSpectrumError);
}

TEST_CASE("grad log Pi on the two-point graph has the chain-rule form") {
  // log Pi = log(2w) + log theta(x), so (d/dx) log Pi = theta'(x)/theta(x);
  // for the geometric mean that is (1/x - 1/(1-x))/2.
  const WeightedGraph g = WeightedGraph::two_point(1.3);
  for (double x : {0.2, 0.5, 0.7}) {
    const Eigen::VectorXd grad =
        grad_log_pseudodet(g, MeanFunction::geometric(), Eigen::Vector2d(x, 1.0 - x));
    const double want = 0.5 * (1.0 / x - 1.0 / (1.0 - x));
    CHECK(grad[0] - grad[1] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("grad log Pi matches tangent-constrained central differences") {
  std::mt19937_64 rng(35);
  std::vector<MeanFunction> means = interior_means();
  means.push_back(MeanFunction::arithmetic());
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    const MeanFunction& mean = means[trial % means.size()];
    const Eigen::VectorXd grad = grad_log_pseudodet(g, mean, p);
    for (int m = 0; m < n - 1; ++m) {
      Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
      sigma[m] = 1.0;
      sigma[n - 1] = -1.0;
      const double fd = directional_fd(
          [&](const Eigen::VectorXd& q) { return log_pseudo_determinant(g, mean, q); }, p, sigma);
      CHECK(grad.dot(sigma) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("grad log Pi has equal entries at the uniform point of a symmetric graph") {
  const WeightedGraph tri(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  const Eigen::VectorXd grad = grad_log_pseudodet(tri, MeanFunction::logarithmic(),
                                                  Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3));
  CHECK(grad[0] == doctest::Approx(grad[1]).epsilon(1e-12));
  CHECK(grad[1] == doctest::Approx(grad[2]).epsilon(1e-12));
}

TEST_CASE("log Pi Hessian agrees with value-level differences along edges") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng() % 4);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    const MeanFunction mean = MeanFunction::geometric();
    const Eigen::MatrixXd h = log_pdet_hessian(g, mean, p);
    CHECK((h - h.transpose()).lpNorm<Eigen::Infinity>() <= 1e-10);
    for (const Edge& e : g.edges()) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      v[e.i] = 1.0;
      v[e.j] = -1.0;
      const double eps = 1e-4;
      const double f0 = log_pseudo_determinant(g, mean, p);
      const double fp = log_pseudo_determinant(g, mean, p + eps * v);
      const double fm = log_pseudo_determinant(g, mean, p - eps * v);
      const double fd = (fp - 2.0 * f0 + fm) / (eps * eps);
      CHECK(v.dot(h * v) == doctest::Approx(fd).epsilon(5e-4));
    }
  }
}

TEST_CASE("metric inner product: zero, two-point value, positivity") {
  const double w = 2.5;
  const WeightedGraph g = WeightedGraph::two_point(w);
  const MeanFunction geo = MeanFunction::geometric();
  const Eigen::Vector2d p(0.4, 0.6);
  const double theta = geo(0.8, 1.2);
  const Eigen::Vector2d sigma(1.0, -1.0);

  CHECK(metric_inner(g, geo, p, Eigen::Vector2d::Zero(), sigma) == 0.0);
  // sigma = (1,-1) is sqrt(2) times the unit eigenvector with eigenvalue
  // 2 w theta, so sigma^T L^+ sigma = 2/(2 w theta) = 1/(w theta).
  CHECK(metric_inner(g, geo, p, sigma, sigma) ==
        doctest::Approx(1.0 / (w * theta)).epsilon(1e-12));

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd s = random_tangent(rng, 2);
    if (s.norm() < 1e-8) continue;
    CHECK(metric_inner(g, geo, p, s, s) > 0.0);
  }
}

TEST_CASE("the three metric routes agree") {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WeightedGraph g = random_connected_graph(rng, n);
    const Eigen::VectorXd p = random_interior_point(rng, n);
    const Eigen::VectorXd s1 = random_tangent(rng, n);
    const Eigen::VectorXd s2 = random_tangent(rng, n);
    for (const MeanFunction& mean : interior_means()) {
      const double a = metric_inner(g, mean, p, s1, s2);
      const double b = metric_inner_potential(g, mean, p, s1, s2);
      const double c = metric_inner_edge_sum(g, mean, p, s1, s2);
      const double scale = 1.0 + std::abs(a);
      CHECK(std::abs(a - b) / scale <= 1e-10);
      CHECK(std::abs(a - c) / scale <= 1e-10);
    }
  }
}

TEST_CASE("non-tangent vectors are rejected") {
  const WeightedGraph g = WeightedGraph::two_point(1.0);
  CHECK_THROWS_AS(metric_inner(g, MeanFunction::geometric(), Eigen::Vector2d(0.5, 0.5),
                               Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, -1.0)),
                  std::invalid_argument);
}

TEST_CASE("probability and tangent validation") {
  CHECK_NOTHROW(check_probability(Eigen::Vector2d(0.5, 0.5)));
  CHECK_THROWS_AS(check_probability(Eigen::Vector2d(0.6, 0.6)), std::invalid_argument);
  CHECK_THROWS_AS(check_probability(Eigen::Vector2d(0.0, 1.0)), std::invalid_argument);
  CHECK_NOTHROW(check_probability(Eigen::Vector2d(0.0, 1.0), /*closed=*/true));
  CHECK_THROWS_AS(check_probability(Eigen::Vector2d(-0.1, 1.1), /*closed=*/true),
                  std::invalid_argument);
  CHECK(is_interior(Eigen::Vector2d(0.5, 0.5)));
  CHECK_FALSE(is_interior(Eigen::Vector2d(0.0, 1.0)));
  CHECK_NOTHROW(check_tangent(Eigen::Vector2d(1.0, -1.0)));
  CHECK_THROWS_AS(check_tangent(Eigen::Vector2d(1.0, 0.0)), std::invalid_argument);
}
