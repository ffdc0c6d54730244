#pragma once

// The beta-transformation T(x) = beta*x - ceil(beta*x) + 1 on (0, 1], its
// digit sequence, the expansion of 1, and the run-length function.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "betadyn/numerics.hpp"

namespace betadyn {

using DigitWord = std::vector<Digit>;

// Comma-separated digit listing ("0,1,0").
std::string format_digits(std::span<const Digit> digits);
DigitWord parse_digits(std::string_view text);

// Throws std::invalid_argument if any digit exceeds the alphabet of `context`.
void check_alphabet(const BetaContext& context, std::span<const Digit> digits);

// Requires 0 < x <= 1.
ExactReal beta_transform(const ExactReal& x);

// Lazy digit cursor over the orbit of x. The constant zero stream is used for
// x = 0. Single owner; not safe to share across threads.
class DigitStream {
 public:
  // Requires 0 <= x <= 1.
  explicit DigitStream(ExactReal x);

  Digit next();
  DigitWord take(std::size_t count);

  const ExactReal& origin() const { return origin_; }
  // T^n x after n digits (0 for the zero stream).
  const ExactReal& orbit() const { return orbit_; }
  std::uint64_t position() const { return position_; }
  bool is_zero_stream() const { return zero_; }

 private:
  ExactReal origin_;
  ExactReal orbit_;
  ExactReal beta_;
  std::uint64_t position_ = 0;
  bool zero_ = false;
};

DigitStream digit_stream(const ExactReal& x);

// The expansion of 1 with its tail-zero runs t_n and running maxima Gamma_n.
// Digits are cached and extended on demand.
class UnitExpansion {
 public:
  static constexpr std::size_t kDefaultReadAhead = 1'000'000;

  explicit UnitExpansion(BetaPtr context, std::size_t read_ahead_cap = kDefaultReadAhead);

  const BetaPtr& context() const { return context_; }

  // 1-based digit of the expansion of 1.
  Digit digit(std::size_t index);
  std::span<const Digit> prefix(std::size_t length);

  // t_n = max{k >= 0 : digits n+1..n+k are all 0}. Throws Unreachable when
  // the zero run outlasts the read-ahead cap.
  std::uint64_t tail_zero_run(std::size_t n);
  // Gamma_n = max_{1<=k<=n} t_k.
  std::uint64_t gamma(std::size_t n);

 private:
  void extend_to(std::size_t length);

  BetaPtr context_;
  std::size_t read_ahead_cap_;
  DigitStream stream_;
  DigitWord digits_;
  std::vector<std::uint64_t> gamma_;
};

struct ExpansionOfOne {
  DigitWord digits;                // first n digits
  std::vector<std::uint64_t> t;    // t_1..t_n
  std::vector<std::uint64_t> gamma;  // Gamma_1..Gamma_n
};

ExpansionOfOne expansion_of_one(const BetaPtr& context, std::size_t n);

// Partial sum sum_i digit_i * beta^-i.
ExactReal evaluate(const BetaPtr& context, std::span<const Digit> digits);

// Incremental longest zero run.
struct RunLengthState {
  std::uint64_t consumed = 0;
  std::uint64_t trailing = 0;
  std::uint64_t longest = 0;

  void push(Digit d) {
    ++consumed;
    if (d == 0) {
      if (++trailing > longest) longest = trailing;
    } else {
      trailing = 0;
    }
  }
};

// r_n over the first n digits; requires n <= digits.size().
std::uint64_t run_length(std::span<const Digit> digits, std::size_t n);
inline std::uint64_t run_length(std::span<const Digit> digits) { return run_length(digits, digits.size()); }

}  // namespace betadyn
