#pragma once

#include <stdexcept>
#include <string>

namespace nlgeom {

/// A field or geometry was evaluated outside its domain (sqrt cusp, division
/// by zero, barrier penetration, ...). `kind()` names the offending
/// sub-expression class.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string kind, const std::string& detail)
      : std::domain_error(kind + ": " + detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// A mass matrix or energy tensor is too ill-conditioned to invert.
class SingularMassError : public std::runtime_error {
 public:
  explicit SingularMassError(double condition)
      : std::runtime_error("singular mass matrix (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Input rejected before any computation started.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nlgeom
