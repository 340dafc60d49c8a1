#pragma once

#include <functional>
#include <string>
#include <utility>

// Two-argument mean ("activation") functions selecting the geometry of the
// probability-weighted Laplacian: symmetric, nonnegative, C^2 in the interior,
// and for the admissible kinds vanishing when either argument is zero.

namespace simplex_langevin {

enum class MeanKind {
  Arithmetic,            // (x+y)/2            -- does not vanish on the boundary
  Geometric,             // sqrt(xy)
  Harmonic,              // 1/(1/x + 1/y)      -- half the conventional mean
  HarmonicConventional,  // 2/(1/x + 1/y)
  Logarithmic,           // (x-y)/(log x - log y), theta(x,x) = x
  PhiPrime,              // (x-y)/(phi'(x)-phi'(y)), theta(x,x) = 1/phi''(x)
};

class MeanFunction {
 public:
  using ScalarFn = std::function<double(double)>;

  static MeanFunction arithmetic();
  static MeanFunction geometric();
  static MeanFunction harmonic();
  static MeanFunction harmonic_conventional();
  static MeanFunction logarithmic();

  // phi must be convex with phi(1) = 0; phi'' is required for evaluation on
  // the diagonal. Convexity is checked on sampled points.
  static MeanFunction phi_prime(std::string name, ScalarFn phi_prime_fn, ScalarFn phi_second_fn);

  // Registry lookup: "arithmetic", "geometric", "harmonic",
  // "harmonic-conventional", "logarithmic", "phi-prime:<name>" with built-in
  // names "kl" and "quadratic".
  static MeanFunction from_name(const std::string& name);

  // theta(x, y) for x, y >= 0; negative arguments are rejected.
  double operator()(double x, double y) const;

  // (d theta/dx, d theta/dy). Requires x, y > 0 for kinds that vanish on the
  // boundary; the diagonal is handled by the removable-singularity limits.
  std::pair<double, double> partials(double x, double y) const;

  MeanKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // Property (ii): theta(x, y) = 0 whenever xy = 0. False for the arithmetic
  // mean and for phi' means whose phi' is bounded near zero.
  bool vanishes_on_boundary() const { return vanishes_on_boundary_; }

 private:
  MeanFunction(MeanKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  MeanKind kind_;
  std::string name_;
  bool vanishes_on_boundary_ = true;
  ScalarFn phi_prime_;
  ScalarFn phi_second_;
};

// Relative width of the diagonal window in which logarithmic and phi' means
// switch to their series/limit branch.
inline constexpr double kMeanDiagonalWindow = 1e-8;

}  // namespace simplex_langevin
