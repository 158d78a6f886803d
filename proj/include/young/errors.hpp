#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace young {

// Error taxonomy shared by the library and the CLI. The CLI maps
// precondition_error to exit code 2 and divergence_error/numerical_error
// to exit code 3.

class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite state or failed factorization; carries no index.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Blow-up on the grid. index() is the first grid index with a non-finite
// value, or the iteration count for fixed-point divergence.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(const std::string& what, std::ptrdiff_t index)
      : std::runtime_error(what), index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class calibration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class experiment_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace young
