#include "simplex_langevin/functional.hpp"

namespace simplex_langevin {

SimplexFunctional zero_functional() {
  SimplexFunctional f;
  f.value = [](const Eigen::VectorXd&) { return 0.0; };
  f.gradient = [](const Eigen::VectorXd& p) { return Eigen::VectorXd::Zero(p.size()).eval(); };
  f.hessian = [](const Eigen::VectorXd& p) {
    return Eigen::MatrixXd::Zero(p.size(), p.size()).eval();
  };
  return f;
}

SimplexFunctional quadratic_functional(Eigen::MatrixXd a, Eigen::VectorXd b, double c) {
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  SimplexFunctional f;
  f.value = [sym, b, c](const Eigen::VectorXd& p) {
    return 0.5 * p.dot(sym * p) + b.dot(p) + c;
  };
  f.gradient = [sym, b](const Eigen::VectorXd& p) { return (sym * p + b).eval(); };
  f.hessian = [sym](const Eigen::VectorXd&) { return sym; };
  return f;
}

SimplexFunctional finite_difference_functional(std::function<double(const Eigen::VectorXd&)> value,
                                               double step) {
  SimplexFunctional f;
  f.value = value;
  f.gradient = [value, step](const Eigen::VectorXd& p) {
    Eigen::VectorXd g(p.size());
    Eigen::VectorXd q = p;
    for (int k = 0; k < p.size(); ++k) {
      q[k] = p[k] + step;
      const double up = value(q);
      q[k] = p[k] - step;
      const double dn = value(q);
      q[k] = p[k];
      g[k] = (up - dn) / (2.0 * step);
    }
    return g;
  };
  f.hessian = [value, step](const Eigen::VectorXd& p) {
    const int n = static_cast<int>(p.size());
    Eigen::MatrixXd h(n, n);
    Eigen::VectorXd q = p;
    const double f0 = value(p);
    for (int i = 0; i < n; ++i) {
      q[i] = p[i] + step;
      const double up = value(q);
      q[i] = p[i] - step;
      const double dn = value(q);
      q[i] = p[i];
      h(i, i) = (up - 2.0 * f0 + dn) / (step * step);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        q[i] = p[i] + step; q[j] = p[j] + step;
        const double pp = value(q);
        q[j] = p[j] - step;
        const double pm = value(q);
        q[i] = p[i] - step; q[j] = p[j] + step;
        const double mp = value(q);
        q[j] = p[j] - step;
        const double mm = value(q);
        q[i] = p[i]; q[j] = p[j];
        h(i, j) = h(j, i) = (pp - pm - mp + mm) / (4.0 * step * step);
      }
    }
    return h;
  };
  return f;
}

SimplexVectorFunctional finite_difference_vector_functional(
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value, double step) {
  SimplexVectorFunctional h;
  h.value = value;
  h.jacobian = [value, step](const Eigen::VectorXd& p) {
    const int n = static_cast<int>(p.size());
    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd q = p;
    for (int k = 0; k < n; ++k) {
      q[k] = p[k] + step;
      const Eigen::VectorXd up = value(q);
      q[k] = p[k] - step;
      const Eigen::VectorXd dn = value(q);
      q[k] = p[k];
      jac.col(k) = (up - dn) / (2.0 * step);
    }
    return jac;
  };
  return h;
}

}  // namespace simplex_langevin
