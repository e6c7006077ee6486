// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace idel {

/// Violated precondition or broken invariant on a caller-supplied value.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Operand shapes do not conform for the named operation.
class DimensionError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// Argument outside the mathematical domain of the function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A loss or estimate became non-finite during optimization.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Problem size exceeds a fixed solver budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idel
