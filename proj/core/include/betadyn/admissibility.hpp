#pragma once

// Admissible words, cylinder geometry and fullness.
//
// Two independent admissibility tests are provided. ParryChecker compares
// every shift of a word lexicographically against the expansion of 1. The
// follower recursion tracks R(w), the right end of T^n(I_n(w)) = (0, R(w)]:
//
//   R(empty) = 1,   R(w a) = min(1, beta R(w) - a),
//
// with w a admissible iff beta R(w) - a > 0. The cylinder I_n(w) is then the
// left-open interval starting at sum w_i beta^-i of length beta^-n R(w), and
// w is full iff R(w) = 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "betadyn/expansion.hpp"
#include "betadyn/numerics.hpp"

namespace betadyn {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 2'000'000;

class ParryChecker {
 public:
  explicit ParryChecker(BetaPtr context);

  // sigma^i w <=_lex (first |w|-i digits of the expansion of 1) for every
  // shift i >= 0.
  bool admissible(std::span<const Digit> word);

  UnitExpansion& unit() { return unit_; }

 private:
  BetaPtr context_;
  UnitExpansion unit_;
};

// One step of the follower recursion; nullopt when w a is inadmissible.
std::optional<ExactReal> follower_step(const ExactReal& follower, Digit next);

// R(w), or nullopt when w is inadmissible.
std::optional<ExactReal> follower_value(const BetaPtr& context, std::span<const Digit> word);

struct Cylinder {
  DigitWord word;
  ExactReal left;
  ExactReal follower;
  ExactReal length;
  bool full;
};

// Throws InadmissibleWord.
Cylinder cylinder(const BetaPtr& context, std::span<const Digit> word);
bool is_full(const BetaPtr& context, std::span<const Digit> word);

struct AdmissibleWord {
  DigitWord word;
  ExactReal follower;
};

// Depth-first, lexicographically ordered walk of the admissible words of
// length n. `first_digit`, when set, restricts the walk to words starting
// with it. Throws BudgetExceeded once more than `budget` words are produced.
void for_each_admissible(const BetaPtr& context, std::size_t n, std::uint64_t budget,
                         const std::function<void(std::span<const Digit>, const ExactReal&)>& visit,
                         std::optional<Digit> first_digit = std::nullopt);

std::vector<AdmissibleWord> enumerate_words(const BetaPtr& context, std::size_t n,
                                            std::uint64_t budget = kDefaultEnumerationBudget);

struct CensusRecord {
  std::size_t n = 0;
  std::uint64_t count = 0;
  std::uint64_t full_count = 0;
  bool lower_bound_ok = false;  // beta^n <= count
  bool upper_bound_ok = false;  // count <= beta^(n+1) / (beta - 1)
  bool pigeonhole_ok = false;   // every n+1 consecutive cylinders hold a full one

  bool bounds_ok() const { return lower_bound_ok && upper_bound_ok; }
  bool all_ok() const { return bounds_ok() && pigeonhole_ok; }
};

CensusRecord census(const BetaPtr& context, std::size_t n, std::uint64_t budget = kDefaultEnumerationBudget);

// Smallest k >= 2 with (1, 0^(k-2), 1) admissible. Throws Infeasible past `cap`.
unsigned find_h(const BetaPtr& context, unsigned cap = 1u << 20);

}  // namespace betadyn
