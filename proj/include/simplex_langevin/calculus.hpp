#pragma once

#include <Eigen/Dense>

#include "simplex_langevin/functional.hpp"
#include "simplex_langevin/graph.hpp"
#include "simplex_langevin/mean.hpp"

// Riemannian operators on the probability manifold: gradient, divergence,
// Laplace-Beltrami, and the Kolmogorov forward/backward operators of the
// canonical simplex diffusion, evaluated pointwise.
//
// Each operator that involves log Pi exists in two algebraically equal but
// independently evaluated displays (edge sum vs matrix divergence); tests pit
// them against each other.

namespace simplex_langevin {

// grad_W F(p) = L(p) grad F(p), accumulated per edge so the result sums to
// zero exactly.
Eigen::VectorXd grad_w(const WeightedGraph& g, const MeanFunction& mean,
                       const SimplexFunctional& f, const Eigen::VectorXd& p);

// p -> grad_W F(p) with its analytic Jacobian, for composing with div_w.
SimplexVectorFunctional grad_w_functional(const WeightedGraph& g, const MeanFunction& mean,
                                          SimplexFunctional f);

// div_W H(p) = Pi^{1/2} div(Pi^{-1/2} H) = trace(J_H) - 0.5 <grad log Pi, H>.
double div_w(const WeightedGraph& g, const MeanFunction& mean, const SimplexVectorFunctional& h,
             const Eigen::VectorXd& p);

// Three-term edge sum of the Laplace-Beltrami operator.
double laplace_beltrami(const WeightedGraph& g, const MeanFunction& mean,
                        const SimplexFunctional& f, const Eigen::VectorXd& p);

// Kolmogorov forward operator, five-term edge sum.
double kolmogorov_forward(const WeightedGraph& g, const MeanFunction& mean,
                          const SimplexFunctional& density, const Eigen::VectorXd& p);

// Same operator via 0.5 div(P L grad log Pi) + div(L grad P).
double kolmogorov_forward_divergence_form(const WeightedGraph& g, const MeanFunction& mean,
                                          const SimplexFunctional& density,
                                          const Eigen::VectorXd& p);

// Kolmogorov backward operator, three-term edge sum.
double kolmogorov_backward(const WeightedGraph& g, const MeanFunction& mean,
                           const SimplexFunctional& testfn, const Eigen::VectorXd& p);

// Same operator via -0.5 (grad F, L grad log Pi) + div(L grad F).
double kolmogorov_backward_compact_form(const WeightedGraph& g, const MeanFunction& mean,
                                        const SimplexFunctional& testfn,
                                        const Eigen::VectorXd& p);

// exp(-V(p)/beta) Pi(p)^{-1/2} as a functional with analytic gradient and a
// Hessian assembled from the finite-difference layer over grad log Pi. This is
// the (unnormalized) stationary density of the gradient drift-diffusion.
SimplexFunctional gibbs_density_functional(const WeightedGraph& g, const MeanFunction& mean,
                                           SimplexFunctional potential, double beta);

}  // namespace simplex_langevin
