#pragma once

#include <span>
#include <vector>

#include "pascaltri/cloud.hpp"

namespace pascaltri {

struct RootOptions {
  int max_iterations = 200;
  double tolerance = 1e-14;  // relative to 1 + |root|
};

struct RootResult {
  std::vector<Complex> roots;
  std::vector<double> residuals;  // |P(root)|
  int iterations = 0;
  bool converged = false;
};

// Evaluates the monic polynomial t^s + c_1 t^{s-1} + ... + c_s.
Complex evaluate_monic(std::span<const Complex> coefficients, Complex t);

// Aberth-Ehrlich simultaneous iteration on the monic polynomial with the
// given trailing coefficients. Starting points lie on a circle whose radius
// comes from the coefficient magnitudes, with a fixed angular offset, so
// runs are deterministic.
RootResult aberth_roots(std::span<const Complex> coefficients, const RootOptions& options = {});

// Like aberth_roots but throws NumericalError (with the best iterate in the
// message) if the iteration does not converge.
std::vector<Complex> polynomial_roots(std::span<const Complex> coefficients,
                                      const RootOptions& options = {});

}  // namespace pascaltri
