#pragma once

#include <stdexcept>
#include <string>

namespace pascaltri {

// Bad input: malformed files, violated preconditions, inconsistent data.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input was well formed but the computation could not be carried out
// reliably (overflow, ill conditioning, non-convergence, rank mismatch).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pascaltri
