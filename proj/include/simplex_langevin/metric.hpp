#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "simplex_langevin/graph.hpp"
#include "simplex_langevin/mean.hpp"

// The probability-weighted Laplacian L(p), its spectral data, pseudo-inverse
// and pseudo-determinant, the gradient of log Pi, and the finite-state
// Wasserstein-2 inner product.

namespace simplex_langevin {

inline constexpr double kSimplexSumTolerance = 1e-12;
inline constexpr double kSpectralZeroTolerance = 1e-10;

// Raised when more than one eigenvalue of L(p) falls below the zero threshold
// on a supposedly interior point: the metric is degenerate (boundary contact).
struct DegenerateSpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sums to one within tol; interior additionally requires every entry > 0,
// closed allows entries == 0.
void check_probability(const Eigen::VectorXd& p, bool closed = false,
                       double tol = kSimplexSumTolerance);
bool is_interior(const Eigen::VectorXd& p);

// Tangent vectors sum to zero within tol.
void check_tangent(const Eigen::VectorXd& sigma, double tol = kSimplexSumTolerance);

class WeightedLaplacian {
 public:
  WeightedLaplacian(const WeightedGraph& g, const MeanFunction& mean, const Eigen::VectorXd& p);

  const Eigen::MatrixXd& matrix() const { return l_; }
  const WeightedGraph& graph() const { return graph_; }
  const MeanFunction& mean() const { return mean_; }
  const Eigen::VectorXd& point() const { return p_; }
  // theta_ij(p) = theta(p_i/pi_i, p_j/pi_j) in graph edge order.
  const std::vector<double>& edge_theta() const { return theta_; }

 private:
  WeightedGraph graph_;
  MeanFunction mean_;
  Eigen::VectorXd p_;
  std::vector<double> theta_;
  Eigen::MatrixXd l_;
};

struct SpectralData {
  Eigen::VectorXd eigenvalues;   // ascending, eigenvalues[0] ~ 0
  Eigen::MatrixXd eigenvectors;  // orthogonal, column 0 ~ (1,..,1)/sqrt(n)
  double pseudo_determinant = 0.0;
  double log_pseudo_determinant = 0.0;
  Eigen::MatrixXd pseudo_inverse;
};

WeightedLaplacian build_laplacian(const WeightedGraph& g, const MeanFunction& mean,
                                  const Eigen::VectorXd& p);

// Full symmetric eigendecomposition. Exactly one eigenvalue may fall below
// zero_tol * lambda_max; otherwise DegenerateSpectrumError.
SpectralData spectral(const WeightedLaplacian& lap, double zero_tol = kSpectralZeroTolerance);

double log_pseudo_determinant(const WeightedGraph& g, const MeanFunction& mean,
                              const Eigen::VectorXd& p, double zero_tol = kSpectralZeroTolerance);

// d/dp_k log Pi(p) = trace(L(p)^+ dL/dp_k). Valid because the kernel
// eigenvector of L(p) does not depend on p.
Eigen::VectorXd grad_log_pseudodet(const WeightedGraph& g, const MeanFunction& mean,
                                   const Eigen::VectorXd& p,
                                   double zero_tol = kSpectralZeroTolerance);

// Hessian of log Pi from one central-difference layer over the trace-formula
// gradient along an orthonormal tangent basis (step is the FD step). Only the
// tangent-tangent block is determined; the normal-normal entry is set to zero.
// Every operator in this library contracts Hessians along edge directions,
// which are tangent, so the completion is never observed.
Eigen::MatrixXd log_pdet_hessian(const WeightedGraph& g, const MeanFunction& mean,
                                 const Eigen::VectorXd& p, double step = 1e-5,
                                 double zero_tol = kSpectralZeroTolerance);

// g^W(p)(s1, s2) = s1^T L(p)^+ s2. The three routes agree on tangent vectors;
// they are kept separate as mutual oracles.
double metric_inner(const WeightedGraph& g, const MeanFunction& mean, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& sigma1, const Eigen::VectorXd& sigma2);
double metric_inner_potential(const WeightedGraph& g, const MeanFunction& mean,
                              const Eigen::VectorXd& p, const Eigen::VectorXd& sigma1,
                              const Eigen::VectorXd& sigma2);
double metric_inner_edge_sum(const WeightedGraph& g, const MeanFunction& mean,
                             const Eigen::VectorXd& p, const Eigen::VectorXd& sigma1,
                             const Eigen::VectorXd& sigma2);

}  // namespace simplex_langevin
