#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flexsky {

using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Numerical slack used by the feasibility, dominance and LP tests.
struct Tolerances {
  double feasibility = 1e-9;
  double vertex = 1e-9;
  double lp = 1e-7;
  double dominance = 1e-9;
  double potential_optimality = 1e-9;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

// Malformed input data: bad CSV cells, unknown columns, arity mismatches.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constraint text that does not follow the grammar; carries 1-based location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// The constrained weight region contains no point.
class EmptyRegionError : public std::runtime_error {
 public:
  EmptyRegionError() : std::runtime_error("empty weight region") {}
};

// Vertex enumeration requested beyond its dimension/constraint budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flexsky
