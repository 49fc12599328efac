#pragma once

#include <stdexcept>
#include <string>

namespace skewalg {

// A mathematical precondition was violated (CLI exit code 2).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public MathError {
 public:
  DivisionByZero() : MathError("division by zero") {}
};

class FieldMismatch : public MathError {
 public:
  FieldMismatch() : MathError("operands live in different coefficient fields") {}
};

class ContextMismatch : public MathError {
 public:
  explicit ContextMismatch(const std::string& what = "operands live in different rings")
      : MathError(what) {}
};

class UnitIdealHasNoDimension : public MathError {
 public:
  UnitIdealHasNoDimension() : MathError("the unit ideal has no Krull dimension") {}
};

// Buchberger (or a search built on it) ran out of its step budget (CLI exit code 3).
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::size_t budget)
      : std::runtime_error("step budget of " + std::to_string(budget) + " exhausted"),
        budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

}  // namespace skewalg
