#pragma once

#include <stdexcept>
#include <string>

namespace rsk {

/// Process exit codes shared by the CLI and the error hierarchy.
enum class ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
};

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used in CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what, ExitCode code)
      : std::runtime_error(what), kind_(std::move(kind)), code_(code) {}

  const std::string& kind() const noexcept { return kind_; }
  ExitCode exit_code() const noexcept { return code_; }

 private:
  std::string kind_;
  ExitCode code_;
};

// Shapes that cannot be combined (mismatched stimulus counts, non-square input).
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error("dimension", what, ExitCode::kData) {}
};

// A caller passed data that violates a preprocessing or metric contract.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what)
      : Error("contract", what, ExitCode::kUsage) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error("parse", what, ExitCode::kData) {}
};

class DegenerateColumnError : public Error {
 public:
  DegenerateColumnError(std::size_t column, const std::string& what)
      : Error("degenerate_column", what, ExitCode::kData), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error("infeasible", what, ExitCode::kData) {}
};

/// Iterative routine failed to converge or a result is numerically invalid.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error("numerical", what, ExitCode::kNumerical) {}
};

/// Matrix logarithm requested for a rotation with an angle at pi.
class BranchError : public Error {
 public:
  explicit BranchError(const std::string& what)
      : Error("branch_ambiguity", what, ExitCode::kNumerical) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what)
      : Error("solver_failure", what, ExitCode::kNumerical) {}
};

}  // namespace rsk
