#pragma once

#include <stdexcept>
#include <string>

namespace kolmonet {

/// Raised when array or network dimensions do not fit together.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numeric argument lies outside the admissible range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the network reader; carries the JSON path of the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Raised when the budget planner cannot produce representable step or path counts.
class PlannerOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace kolmonet
