#pragma once

#include <stdexcept>
#include <string>

namespace betadyn {

// A digit word fails the admissibility test where the operation requires an
// admissible one.
class InadmissibleWord : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operands belong to different BetaContext instances.
class ContextMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exhaustive enumeration would exceed its word budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A schedule search ran past its bound without finding a feasible index.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checkpoint or stage lies beyond what can be materialized or scanned.
class Unreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace betadyn
