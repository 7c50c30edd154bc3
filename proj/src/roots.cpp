#include "pascaltri/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pascaltri/error.hpp"

namespace pascaltri {

namespace {

struct Evaluation {
  Complex value;
  Complex derivative;
  double rounding_bound;  // bound on the error of `value` from Horner
};

Evaluation horner(std::span<const Complex> coefficients, Complex t) {
  Complex p = 1.0;
  Complex dp = 0.0;
  double bound = 1.0;
  const double at = std::abs(t);
  for (const auto& c : coefficients) {
    dp = dp * t + p;
    p = p * t + c;
    bound = bound * at + std::abs(c);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {p, dp, 4.0 * eps * static_cast<double>(coefficients.size() + 1) * bound};
}

double initial_radius(std::span<const Complex> coefficients) {
  // Within a factor of 2 of the Fujiwara bound; good enough to enclose every
  // root in a ring the iteration contracts quickly.
  double radius = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double magnitude = std::abs(coefficients[i]);
    if (magnitude > 0.0) {
      radius = std::max(radius, std::pow(magnitude, 1.0 / static_cast<double>(i + 1)));
    }
  }
  return radius;
}

}  // namespace

Complex evaluate_monic(std::span<const Complex> coefficients, Complex t) {
  return horner(coefficients, t).value;
}

RootResult aberth_roots(std::span<const Complex> coefficients, const RootOptions& options) {
  const std::size_t degree = coefficients.size();
  if (degree == 0) throw ValidationError("polynomial degree must be at least 1");
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw NumericalError("polynomial coefficient is not finite");
    }
  }

  RootResult result;
  result.roots.resize(degree);
  if (degree == 1) {
    result.roots[0] = -coefficients[0];
    result.residuals = {0.0};
    result.converged = true;
    return result;
  }

  const double radius = initial_radius(coefficients);
  if (radius == 0.0) {
    // t^s: every root is zero.
    result.residuals.assign(degree, 0.0);
    result.converged = true;
    return result;
  }
  constexpr double kOffset = 0.4;
  for (std::size_t k = 0; k < degree; ++k) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + kOffset;
    result.roots[k] = std::polar(radius, angle);
  }

  auto& z = result.roots;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    bool done = true;
    for (std::size_t k = 0; k < degree; ++k) {
      const Evaluation e = horner(coefficients, z[k]);
      const bool at_rounding_level = std::abs(e.value) <= e.rounding_bound;
      Complex step = 0.0;
      if (e.value != 0.0) {
        Complex repulsion = 0.0;
        for (std::size_t j = 0; j < degree; ++j) {
          if (j != k && z[j] != z[k]) repulsion += 1.0 / (z[k] - z[j]);
        }
        if (e.derivative != 0.0) {
          const Complex ratio = e.value / e.derivative;
          step = ratio / (1.0 - ratio * repulsion);
        } else {
          step = 1.0 / repulsion;
        }
      }
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = 0.0;
      if (!at_rounding_level) z[k] -= step;
      const bool small_step = std::abs(step) <= options.tolerance * (1.0 + std::abs(z[k]));
      if (!small_step && !at_rounding_level) done = false;
    }
    if (done) {
      result.converged = true;
      break;
    }
  }

  result.residuals.resize(degree);
  for (std::size_t k = 0; k < degree; ++k) {
    result.residuals[k] = std::abs(horner(coefficients, z[k]).value);
  }
  return result;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coefficients,
                                      const RootOptions& options) {
  RootResult result = aberth_roots(coefficients, options);
  if (!result.converged) {
    std::ostringstream os;
    os.precision(17);
    os << "root finder did not converge after " << result.iterations << " iterations; best iterate:";
    for (std::size_t k = 0; k < result.roots.size(); ++k) {
      os << ' ' << result.roots[k] << " (|P|=" << result.residuals[k] << ')';
    }
    throw NumericalError(os.str());
  }
  return std::move(result.roots);
}

}  // namespace pascaltri
