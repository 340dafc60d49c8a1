#pragma once

#include <Eigen/Dense>

#include <functional>

// Functionals on the probability simplex, carried with caller-supplied
// analytic derivatives. The gradient is the unconstrained coordinate gradient
// in R^n; all simplex operators consume only differences of its entries, so
// the constant-direction ambiguity cancels.

namespace simplex_langevin {

struct SimplexFunctional {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct SimplexVectorFunctional {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
  // jacobian(p)(i, k) = d value_i / d p_k
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

SimplexFunctional zero_functional();

// F(p) = 0.5 p^T A p + b^T p + c with A symmetrized.
SimplexFunctional quadratic_functional(Eigen::MatrixXd a, Eigen::VectorXd b, double c = 0.0);

// Wraps a value-only functional with central-difference derivatives (testing
// helper; perturbs plain coordinates, so the wrapped value must be evaluable
// slightly off the simplex).
SimplexFunctional finite_difference_functional(std::function<double(const Eigen::VectorXd&)> value,
                                               double step = 1e-5);

// Same, for a vector functional's Jacobian.
SimplexVectorFunctional finite_difference_vector_functional(
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value, double step = 1e-5);

}  // namespace simplex_langevin
