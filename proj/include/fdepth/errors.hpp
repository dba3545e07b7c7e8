#pragma once

#include <stdexcept>
#include <string>

namespace fdepth {

// Bad user input: unknown model, out-of-domain parameter, malformed file.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failure of a numerical procedure on admissible input: non-PSD covariance,
// infeasible regularization, degenerate test data. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fdepth
