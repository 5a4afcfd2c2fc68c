#pragma once

#include <stdexcept>
#include <string>

namespace catchannel {

/// Base for every numerical failure. `module()` names the library module
/// that raised it (the CLI prints it on exit code 3).
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class DegreeExceeded : public Error {
 public:
  explicit DegreeExceeded(const std::string& what) : Error("numerics", what) {}
};

/// The block being integrated does not have a positive-definite real part.
class NotIntegrable : public Error {
 public:
  explicit NotIntegrable(const std::string& what) : Error("gkernel", what) {}
};

class DegenerateProbability : public Error {
 public:
  explicit DegenerateProbability(const std::string& what) : Error("analytic", what) {}
};

class TruncationInadequate : public Error {
 public:
  explicit TruncationInadequate(const std::string& what) : Error("fock-oracle", what) {}
};

/// Bad parameter values (as opposed to numerical failure).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace catchannel
