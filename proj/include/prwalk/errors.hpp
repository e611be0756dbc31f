#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace prwalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Covers invalid moves, invalid lambda, out-of-range indices and domain errors.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : Error(what + " (required " + std::to_string(required) + ", budget " +
              std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

class UnsupportedCharacteristic : public Error {
 public:
  using Error::Error;
};

class NotPTorsion : public Error {
 public:
  using Error::Error;
};

class ReversibilityViolation : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace prwalk
