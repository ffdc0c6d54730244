#include "betadyn/expansion.hpp"

#include <charconv>
#include <stdexcept>

#include "betadyn/errors.hpp"

namespace betadyn {

std::string format_digits(std::span<const Digit> digits) {
  std::string out;
  out.reserve(digits.size() * 2);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(static_cast<unsigned>(digits[i]));
  }
  return out;
}

DigitWord parse_digits(std::string_view text) {
  DigitWord out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text.substr(start, end - start);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || value > 255) {
      throw std::invalid_argument("malformed digit '" + std::string(token) + "'");
    }
    out.push_back(static_cast<Digit>(value));
    start = end + 1;
  }
  return out;
}

void check_alphabet(const BetaContext& context, std::span<const Digit> digits) {
  for (Digit d : digits) {
    if (d > context.alphabet_top()) {
      throw std::invalid_argument("digit " + std::to_string(d) + " outside the alphabet {0.." +
                                  std::to_string(context.alphabet_top()) + "}");
    }
  }
}

namespace {

bool in_unit_interval(const ExactReal& x) { return certified_sign(x) > 0 && certified_compare(x, Rational(1)) <= 0; }

}  // namespace

ExactReal beta_transform(const ExactReal& x) {
  if (!in_unit_interval(x)) throw std::invalid_argument("beta_transform requires 0 < x <= 1");
  ExactReal y = x * x.context()->beta();
  return y - Rational(certified_ceil(y)) + Rational(1);
}

DigitStream::DigitStream(ExactReal x)
    : origin_(x), orbit_(x), beta_(x.context()->beta()) {
  const int s = certified_sign(x);
  if (s < 0 || certified_compare(x, Rational(1)) > 0) {
    throw std::invalid_argument("digit_stream requires 0 <= x <= 1");
  }
  zero_ = s == 0;
}

Digit DigitStream::next() {
  ++position_;
  if (zero_) return 0;
  ExactReal y = orbit_ * beta_;
  const Integer c = certified_ceil(y);
  orbit_ = y - Rational(c) + Rational(1);
  return static_cast<Digit>(c.get_ui() - 1);
}

DigitWord DigitStream::take(std::size_t count) {
  DigitWord out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

DigitStream digit_stream(const ExactReal& x) { return DigitStream(x); }

// ---------------------------------------------------------------------------

UnitExpansion::UnitExpansion(BetaPtr context, std::size_t read_ahead_cap)
    : context_(std::move(context)), read_ahead_cap_(read_ahead_cap), stream_(context_->one()) {}

void UnitExpansion::extend_to(std::size_t length) {
  while (digits_.size() < length) digits_.push_back(stream_.next());
}

Digit UnitExpansion::digit(std::size_t index) {
  if (index == 0) throw std::out_of_range("digits are 1-based");
  extend_to(index);
  return digits_[index - 1];
}

std::span<const Digit> UnitExpansion::prefix(std::size_t length) {
  extend_to(length);
  return std::span<const Digit>(digits_).first(length);
}

std::uint64_t UnitExpansion::tail_zero_run(std::size_t n) {
  std::uint64_t k = 0;
  while (digit(n + k + 1) == 0) {
    if (++k > read_ahead_cap_) {
      throw Unreachable("zero run in the expansion of 1 exceeds the read-ahead cap");
    }
  }
  return k;
}

std::uint64_t UnitExpansion::gamma(std::size_t n) {
  if (n == 0) throw std::out_of_range("Gamma_n is defined for n >= 1");
  while (gamma_.size() < n) {
    const std::uint64_t t = tail_zero_run(gamma_.size() + 1);
    gamma_.push_back(gamma_.empty() ? t : std::max(gamma_.back(), t));
  }
  return gamma_[n - 1];
}

ExpansionOfOne expansion_of_one(const BetaPtr& context, std::size_t n) {
  if (n == 0) throw std::invalid_argument("expansion_of_one requires n >= 1");
  UnitExpansion unit(context);
  ExpansionOfOne out;
  const auto prefix = unit.prefix(n);
  out.digits.assign(prefix.begin(), prefix.end());
  for (std::size_t k = 1; k <= n; ++k) {
    out.t.push_back(unit.tail_zero_run(k));
    out.gamma.push_back(unit.gamma(k));
  }
  return out;
}

ExactReal evaluate(const BetaPtr& context, std::span<const Digit> digits) {
  const ExactReal inv = context->beta_inverse();
  ExactReal acc = context->zero();
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    acc = (acc + Rational(*it)) * inv;
  }
  return acc;
}

std::uint64_t run_length(std::span<const Digit> digits, std::size_t n) {
  if (n > digits.size()) throw std::out_of_range("run_length beyond the available digits");
  RunLengthState state;
  for (std::size_t i = 0; i < n; ++i) state.push(digits[i]);
  return state.longest;
}

}  // namespace betadyn
