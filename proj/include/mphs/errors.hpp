#pragma once

#include <stdexcept>
#include <string>

namespace mphs {

// Root of the library's error taxonomy. Every throw site provides a short
// machine-readable code (stable across releases) and a human-readable detail.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

// Violated structural invariant (skew-symmetry, definiteness, dimension
// mismatch, inconsistent algebraic rows, ...). The code names the failed
// check, e.g. "StructureError(skew)".
class StructureError : public Error {
public:
  StructureError(const std::string& check, const std::string& detail)
      : Error("StructureError(" + check + ")", detail) {}
};

// Iterative solver failed to reach its tolerance.
class NonConvergence : public Error {
public:
  NonConvergence(double residual, const std::string& detail)
      : Error("NonConvergence", detail + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// Linearized step system (or a requested direct solve) is rank deficient.
class SingularFlowMap : public Error {
public:
  explicit SingularFlowMap(const std::string& detail) : Error("SingularFlowMap", detail) {}
};

class PortMismatch : public Error {
public:
  explicit PortMismatch(const std::string& detail) : Error("PortMismatch", detail) {}
};

// Caller passed an argument outside an operation's documented domain.
class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& detail) : Error("InvalidArgument", detail) {}
};

// A linear system that the operation must solve has no unique solution.
class SingularSystem : public Error {
public:
  explicit SingularSystem(const std::string& detail) : Error("SingularSystem", detail) {}
};

}  // namespace mphs
