#pragma once

#include <stdexcept>
#include <string>

namespace khsheet {

/// 1 + 2*eta fell to or below the admissible floor (the sheet is about to
/// touch the origin) or another pointwise precondition failed.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A frequency needed for the complex change of variables or a divisor
/// vanished (or went unstable).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A combinatorial enumeration request exceeded its budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace khsheet
