#pragma once

#include <stdexcept>
#include <string>

namespace betacurv {

// Malformed external input: bad CSV, inconsistent dimensions, invalid
// generator parameters. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An exact enumeration would exceed the configured term budget. Callers
// should fall back to the Monte Carlo path or raise the budget explicitly;
// nothing is ever silently truncated.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double required, double budget)
      : std::runtime_error(what), required_terms(required), budget_terms(budget) {}

  double required_terms;
  double budget_terms;
};

}  // namespace betacurv
