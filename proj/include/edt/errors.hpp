#pragma once

#include <stdexcept>
#include <string>

namespace edt {

/// A numerical routine could not reach its accuracy target.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration: over-budget sizes, out-of-regime parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edt
