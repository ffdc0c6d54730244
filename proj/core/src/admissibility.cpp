#include "betadyn/admissibility.hpp"

#include <stdexcept>
#include <string>

#include "betadyn/errors.hpp"

namespace betadyn {

ParryChecker::ParryChecker(BetaPtr context) : context_(context), unit_(std::move(context)) {}

bool ParryChecker::admissible(std::span<const Digit> word) {
  check_alphabet(*context_, word);
  const std::size_t n = word.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    for (std::size_t j = 0; shift + j < n; ++j) {
      const Digit a = word[shift + j];
      const Digit b = unit_.digit(j + 1);
      if (a < b) break;
      if (a > b) return false;
    }
  }
  return true;
}

std::optional<ExactReal> follower_step(const ExactReal& follower, Digit next) {
  ExactReal v = follower * follower.context()->beta() - Rational(static_cast<unsigned long>(next));
  if (certified_sign(v) <= 0) return std::nullopt;
  if (certified_compare(v, Rational(1)) >= 0) return follower.context()->one();
  return v;
}

std::optional<ExactReal> follower_value(const BetaPtr& context, std::span<const Digit> word) {
  check_alphabet(*context, word);
  std::optional<ExactReal> r = context->one();
  for (Digit d : word) {
    r = follower_step(*r, d);
    if (!r) return std::nullopt;
  }
  return r;
}

Cylinder cylinder(const BetaPtr& context, std::span<const Digit> word) {
  auto r = follower_value(context, word);
  if (!r) throw InadmissibleWord("word " + format_digits(word) + " is not admissible");
  const bool full = *r == context->one();
  ExactReal length = context->power(-static_cast<long long>(word.size())) * *r;
  return Cylinder{DigitWord(word.begin(), word.end()), evaluate(context, word), std::move(*r), std::move(length),
                  full};
}

bool is_full(const BetaPtr& context, std::span<const Digit> word) {
  auto r = follower_value(context, word);
  if (!r) throw InadmissibleWord("word " + format_digits(word) + " is not admissible");
  return *r == context->one();
}

void for_each_admissible(const BetaPtr& context, std::size_t n, std::uint64_t budget,
                         const std::function<void(std::span<const Digit>, const ExactReal&)>& visit,
                         std::optional<Digit> first_digit) {
  if (n == 0) throw std::invalid_argument("word length must be at least 1");
  const Digit top = context->alphabet_top();
  if (first_digit && *first_digit > top) return;

  DigitWord word(n, 0);
  // followers[i] = R(word[0..i)); next_digit[i] = candidate for position i.
  std::vector<ExactReal> followers;
  followers.reserve(n + 1);
  followers.push_back(context->one());
  std::vector<int> next_digit(n, 0);
  next_digit[0] = first_digit ? *first_digit : 0;
  const int first_limit = first_digit ? *first_digit : top;

  std::uint64_t produced = 0;
  std::size_t depth = 0;
  while (true) {
    const int limit = depth == 0 ? first_limit : top;
    if (next_digit[depth] > limit) {
      if (depth == 0) return;
      followers.pop_back();
      --depth;
      continue;
    }
    const Digit d = static_cast<Digit>(next_digit[depth]++);
    auto r = follower_step(followers.back(), d);
    // Digits are tried in increasing order and beta R - a decreases in a, so
    // the first failure ends this branch.
    if (!r) {
      next_digit[depth] = limit + 1;
      continue;
    }
    word[depth] = d;
    if (depth + 1 == n) {
      if (++produced > budget) {
        throw BudgetExceeded("enumeration of length-" + std::to_string(n) + " words exceeds the budget of " +
                             std::to_string(budget));
      }
      visit(word, *r);
      continue;
    }
    followers.push_back(std::move(*r));
    ++depth;
    next_digit[depth] = 0;
  }
}

std::vector<AdmissibleWord> enumerate_words(const BetaPtr& context, std::size_t n, std::uint64_t budget) {
  std::vector<AdmissibleWord> out;
  for_each_admissible(context, n, budget, [&](std::span<const Digit> w, const ExactReal& r) {
    out.push_back(AdmissibleWord{DigitWord(w.begin(), w.end()), r});
  });
  return out;
}

CensusRecord census(const BetaPtr& context, std::size_t n, std::uint64_t budget) {
  CensusRecord rec;
  rec.n = n;
  const ExactReal one = context->one();
  std::uint64_t gap = 0;  // consecutive non-full cylinders
  std::uint64_t longest_gap = 0;
  for_each_admissible(context, n, budget, [&](std::span<const Digit>, const ExactReal& r) {
    ++rec.count;
    if (r == one) {
      ++rec.full_count;
      gap = 0;
    } else {
      longest_gap = std::max(longest_gap, ++gap);
    }
  });
  const Rational count(Integer(std::to_string(rec.count)));
  const ExactReal beta_n = context->power(static_cast<long long>(n));
  rec.lower_bound_ok = certified_compare(beta_n, count) <= 0;
  // count <= beta^(n+1)/(beta-1)  <=>  count (beta - 1) <= beta^(n+1)
  rec.upper_bound_ok = certified_compare((context->beta() - Rational(1)) * count, beta_n * context->beta()) <= 0;
  rec.pigeonhole_ok = longest_gap < n + 1;
  return rec;
}

unsigned find_h(const BetaPtr& context, unsigned cap) {
  const DigitWord one_word{1};
  auto r = follower_value(context, one_word);
  if (!r) throw Infeasible("the word (1) is not admissible");
  for (unsigned k = 2; k <= cap; ++k) {
    if (follower_step(*r, 1)) return k;
    r = follower_step(*r, 0);
  }
  throw Infeasible("no k <= " + std::to_string(cap) + " makes (1,0^(k-2),1) admissible");
}

}  // namespace betadyn
