#include "simplex_langevin/mean.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace simplex_langevin {

namespace {

void check_nonnegative(double x, double y) {
  if (x < 0.0 || y < 0.0) throw std::domain_error("mean: arguments must be nonnegative");
}

// log(x/y) evaluated as log1p((x-y)/y): keeps full relative precision when
// x and y are close, where the naive difference of logs cancels.
double log_ratio(double x, double y) { return std::log1p((x - y) / y); }

}  // namespace

MeanFunction MeanFunction::arithmetic() {
  MeanFunction m(MeanKind::Arithmetic, "arithmetic");
  m.vanishes_on_boundary_ = false;
  return m;
}

MeanFunction MeanFunction::geometric() { return MeanFunction(MeanKind::Geometric, "geometric"); }

MeanFunction MeanFunction::harmonic() { return MeanFunction(MeanKind::Harmonic, "harmonic"); }

MeanFunction MeanFunction::harmonic_conventional() {
  return MeanFunction(MeanKind::HarmonicConventional, "harmonic-conventional");
}

MeanFunction MeanFunction::logarithmic() { return MeanFunction(MeanKind::Logarithmic, "logarithmic"); }

MeanFunction MeanFunction::phi_prime(std::string name, ScalarFn phi_prime_fn, ScalarFn phi_second_fn) {
  if (!phi_prime_fn || !phi_second_fn)
    throw std::invalid_argument("phi_prime mean: both phi' and phi'' are required");
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    if (!(phi_second_fn(x) > 0.0))
      throw std::invalid_argument("phi_prime mean: phi'' must be positive (convexity)");
  }
  MeanFunction m(MeanKind::PhiPrime, "phi-prime:" + name);
  // Heuristic probe for property (ii): phi' unbounded below near zero.
  m.vanishes_on_boundary_ = phi_prime_fn(1e-300) < phi_prime_fn(1.0) - 30.0;
  m.phi_prime_ = std::move(phi_prime_fn);
  m.phi_second_ = std::move(phi_second_fn);
  return m;
}

MeanFunction MeanFunction::from_name(const std::string& name) {
  if (name == "arithmetic") return arithmetic();
  if (name == "geometric") return geometric();
  if (name == "harmonic") return harmonic();
  if (name == "harmonic-conventional") return harmonic_conventional();
  if (name == "logarithmic") return logarithmic();
  if (name.rfind("phi-prime:", 0) == 0) {
    const std::string phi = name.substr(10);
    if (phi == "kl") {
      return phi_prime("kl", [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; });
    }
    if (phi == "quadratic") {
      return phi_prime("quadratic", [](double x) { return x - 1.0; }, [](double) { return 1.0; });
    }
    throw std::invalid_argument("unknown phi-prime mean: \"" + phi + "\"");
  }
  throw std::invalid_argument("unknown mean function: \"" + name + "\"");
}

double MeanFunction::operator()(double x, double y) const {
  check_nonnegative(x, y);
  if (x * y == 0.0) {
    if (kind_ == MeanKind::Arithmetic) return 0.5 * (x + y);
    return 0.0;  // property (ii); also the continuous limit for every other kind
  }
  switch (kind_) {
    case MeanKind::Arithmetic:
      return 0.5 * (x + y);
    case MeanKind::Geometric:
      return std::sqrt(x * y);
    case MeanKind::Harmonic:
      return x * y / (x + y);
    case MeanKind::HarmonicConventional:
      return 2.0 * x * y / (x + y);
    case MeanKind::Logarithmic: {
      // Evaluate on the ordered pair so symmetry holds bit-for-bit.
      const double a = std::max(x, y), b = std::min(x, y);
      if (a - b < kMeanDiagonalWindow * a) {
        const double m = 0.5 * (a + b);
        const double t = (a - b) / (a + b);
        return m * (1.0 - t * t / 3.0);
      }
      return (a - b) / log_ratio(a, b);
    }
    case MeanKind::PhiPrime: {
      const double a = std::max(x, y), b = std::min(x, y);
      if (a - b < kMeanDiagonalWindow * a) {
        return 1.0 / phi_second_(0.5 * (a + b));
      }
      return (a - b) / (phi_prime_(a) - phi_prime_(b));
    }
  }
  return 0.0;  // unreachable
}

std::pair<double, double> MeanFunction::partials(double x, double y) const {
  check_nonnegative(x, y);
  if (kind_ == MeanKind::Arithmetic) return {0.5, 0.5};
  if (x * y == 0.0) throw std::domain_error("mean partials: undefined on the simplex boundary");
  switch (kind_) {
    case MeanKind::Geometric:
      return {0.5 * std::sqrt(y / x), 0.5 * std::sqrt(x / y)};
    case MeanKind::Harmonic: {
      const double s = x + y;
      return {y * y / (s * s), x * x / (s * s)};
    }
    case MeanKind::HarmonicConventional: {
      const double s = x + y;
      return {2.0 * y * y / (s * s), 2.0 * x * x / (s * s)};
    }
    case MeanKind::Logarithmic: {
      const bool swapped = x < y;
      const double a = swapped ? y : x, b = swapped ? x : y;
      double da, db;
      if (a - b < kMeanDiagonalWindow * a) {
        const double t = (a - b) / (a + b);
        da = 0.5 * (1.0 - 2.0 * t / 3.0);
        db = 0.5 * (1.0 + 2.0 * t / 3.0);
      } else {
        const double d = log_ratio(a, b);
        da = (d - (a - b) / a) / (d * d);
        db = ((a - b) / b - d) / (d * d);
      }
      return swapped ? std::pair{db, da} : std::pair{da, db};
    }
    case MeanKind::PhiPrime: {
      const bool swapped = x < y;
      const double a = swapped ? y : x, b = swapped ? x : y;
      double da, db;
      // The ratio form loses all precision near the diagonal (the numerator
      // is O((a-b)^2) while phi'(a)-phi'(b) carries the rounding of phi'
      // itself), so a much wider series window is needed than for eval:
      //   d theta/da = -phi'''/(2 phi''^2) - s phi''''/(6 phi''^2) + O(s^2),
      // s = (a-b)/2, with phi''' and phi'''' from differences of phi''.
      if (a - b < 1e-4 * a) {
        const double m = 0.5 * (a + b);
        const double s = 0.5 * (a - b);
        const double h = 3e-6 * std::max(m, 1e-6);
        const double up = phi_second_(m + h), mid = phi_second_(m), dn = phi_second_(m - h);
        const double third = (up - dn) / (2.0 * h);
        const double fourth = (up - 2.0 * mid + dn) / (h * h);
        const double base = -0.5 * third / (mid * mid);
        const double tilt = s * fourth / (6.0 * mid * mid);
        da = base - tilt;
        db = base + tilt;
      } else {
        const double d = phi_prime_(a) - phi_prime_(b);
        da = (d - (a - b) * phi_second_(a)) / (d * d);
        db = ((a - b) * phi_second_(b) - d) / (d * d);
      }
      return swapped ? std::pair{db, da} : std::pair{da, db};
    }
    default:
      break;
  }
  return {0.5, 0.5};  // unreachable
}

}  // namespace simplex_langevin
