#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace gelato {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  degenerate_column,
  degenerate_variance,
  not_positive_definite,
  numeric_failure,
  solver_failure,
  mle_nonexistence,
  convergence_failure,
  degenerate_draw,
  tuning_failure,
  parse_error,
  config_error,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. `index()` carries the offending
// column, pivot, node or line when one is meaningful; `value()` carries a
// residual such as the last KKT gap.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<long> index = std::nullopt,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(message), kind_(kind), index_(index), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<long> index() const noexcept { return index_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<long> index_;
  std::optional<double> value_;
};

}  // namespace gelato
