#pragma once

#include <stdexcept>
#include <string>

namespace mci {

// Bad input: unparseable files, malformed graphs, out-of-range arguments.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: singular matrices, non-positive-definite covariances,
// integer overflow in imset arithmetic.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mci
