#pragma once

// Point constructions with prescribed run-length oscillation.
//
// E_p: level k contributes a block of tau_k words drawn from M_{d_{k-1}}
// (full words of length d_{k-1} starting with 1) followed by a zero tail,
// so the prefix through n_k is a concatenation of full words.
//
// U: an arbitrary admissible prefix of length k is padded with zeros to n_k
// and followed by 2k blocks omega_i alternating between a single long zero
// run (odd i) and repetitions of the spacer (1, 0^(h-1)) (even i).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betadyn/admissibility.hpp"
#include "betadyn/enclosure.hpp"
#include "betadyn/phi.hpp"
#include "betadyn/plan.hpp"

namespace betadyn {

struct SearchLimits {
  unsigned max_bits = 1u << 16;         // bit-length cap on schedule entries
  std::uint64_t max_scan = 1'000'000;   // linear steps after the monotone searches
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
};

// prod base_i^exp_i kept unevaluated; canonical (sorted bases > 1, positive
// exponents).
class PowerProduct {
 public:
  PowerProduct() = default;
  static PowerProduct power(const Integer& base, const Integer& exponent);

  PowerProduct& operator*=(const PowerProduct& other);
  friend PowerProduct operator*(PowerProduct a, const PowerProduct& b) { return a *= b; }
  bool operator==(const PowerProduct& other) const = default;

  const std::vector<std::pair<Integer, Integer>>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  // Upper estimate of the number of decimal digits.
  Integer decimal_digits_bound() const;
  // Exact value, or nullopt when it would exceed `max_digits` decimal digits.
  std::optional<Integer> value(std::size_t max_digits = 100'000) const;
  Enclosure ln(unsigned bits) const;
  // Decimal when small enough, otherwise "b1^e1*b2^e2".
  std::string to_string(std::size_t max_digits = 100'000) const;

 private:
  std::vector<std::pair<Integer, Integer>> factors_;
};

// All full words of length d starting with 1, lex ordered.
std::shared_ptr<const WordSet> enumerate_M(const BetaPtr& context, std::size_t d,
                                           std::uint64_t budget = kDefaultEnumerationBudget);

struct EpLevel {
  Integer n;
  unsigned long d = 0;  // floor(ln n)
  Integer tau;          // 0 at level 1
  Integer tail;         // zero tail closing the level
  // M_{d}; null when the enumeration is beyond budget (only allowed at the
  // last level, whose words are never drawn).
  std::shared_ptr<const WordSet> M;
};

struct EpSchedule {
  BetaPtr context;
  unsigned p = 2;
  Phi phi = Phi::sqrt();
  unsigned h = 0;
  std::vector<EpLevel> levels;

  std::size_t size() const { return levels.size(); }
  // 1-based.
  const EpLevel& level(std::size_t k) const { return levels.at(k - 1); }
  std::optional<Integer> a(std::size_t k) const;
  PowerProduct g(std::size_t k) const;
  PowerProduct b(std::size_t k) const;
  Rational p_k(std::size_t k) const;
};

EpSchedule build_ep_schedule(const BetaPtr& context, unsigned p, const Phi& phi, std::size_t levels,
                             const SearchLimits& limits = {});

// Rechecks every schedule invariant; throws Infeasible naming the first
// violated condition.
void validate(const EpSchedule& schedule);

class EpPointStream {
 public:
  EpPointStream(std::shared_ptr<const EpSchedule> schedule, std::uint64_t seed);

  const EpSchedule& schedule() const { return *schedule_; }
  std::uint64_t seed() const { return seed_; }
  const std::shared_ptr<const BlockPlan>& plan() const { return plan_; }
  PlanCursor cursor() const { return PlanCursor(plan_); }
  DigitWord materialize(std::uint64_t length) const;

 private:
  std::shared_ptr<const EpSchedule> schedule_;
  std::uint64_t seed_;
  std::shared_ptr<const BlockPlan> plan_;
};

EpPointStream ep_stream(std::shared_ptr<const EpSchedule> schedule, std::uint64_t seed);

struct CheckpointRow {
  unsigned k = 0;
  Integer n;
  Integer r_lo;
  Integer r_hi;
  std::string relation;  // "<", "<=", ">", ">="
  Rational bound;
  bool pass = false;
  std::optional<Enclosure> ratio;  // r / phi(n)

  std::string r_string() const;
};

struct CheckpointReport {
  std::vector<CheckpointRow> rows;
  bool all_pass() const;
};

// Odd k = 2j-1: r_{n_k} > n_k / p. Even k = 2j: r_{n_k} < 2 n_{k-1}.
CheckpointReport verify_ep_checkpoints(const EpPointStream& stream, std::size_t j_max);

struct OmegaBlock {
  unsigned index = 0;  // i in 1..2k
  Integer length;
  bool odd = true;
  Integer repetitions;  // even blocks: floor(length / h)
  Integer zeros;        // trailing zeros
};

struct USchedule {
  BetaPtr context;
  Phi phi = Phi::sqrt();
  unsigned h = 0;
  DigitWord prefix;
  std::vector<Integer> n;  // n_0 = 0, n_1, ..., n_{3k}
  std::vector<std::uint64_t> gamma;  // Gamma_1..Gamma_{3k}
  std::vector<OmegaBlock> omega;

  std::size_t k() const { return prefix.size(); }
};

// `stages` beyond 1 requires k' = n_{3k}, which exceeds any addressable
// length; Unreachable is thrown in that case.
USchedule build_u_schedule(const BetaPtr& context, const DigitWord& prefix, const Phi& phi,
                           const SearchLimits& limits = {}, std::size_t stages = 1);

void validate(const USchedule& schedule);

class UPointStream {
 public:
  explicit UPointStream(std::shared_ptr<const USchedule> schedule);

  const USchedule& schedule() const { return *schedule_; }
  const std::shared_ptr<const BlockPlan>& plan() const { return plan_; }
  PlanCursor cursor() const { return PlanCursor(plan_); }
  DigitWord materialize(std::uint64_t length) const;

 private:
  std::shared_ptr<const USchedule> schedule_;
  std::shared_ptr<const BlockPlan> plan_;
};

UPointStream u_stream(std::shared_ptr<const USchedule> schedule);

// Stage k: r_{n_{3k-1}} >= n_{3k-1} - n_{3k-2} and
// r_{n_{3k}} <= max{k + Gamma_k, 2h, n_{3k-1} - n_{3k-2}}.
CheckpointReport verify_u_checkpoints(const UPointStream& stream, std::size_t stages);

struct DensityWitness {
  DigitWord prefix;  // first l digits of x
  std::size_t generated_digits = 0;
  Rational distance_upper;  // certified upper bound on |y_m - x|
  bool pass = false;        // |y_m - x| <= beta^-l
};

// Builds the U point for the first l digits of x and checks that a prefix
// of it lies within beta^-l of x.
DensityWitness density_witness(const BetaPtr& context, const ExactReal& x, std::size_t l, const Phi& phi,
                               const SearchLimits& limits = {});

}  // namespace betadyn
