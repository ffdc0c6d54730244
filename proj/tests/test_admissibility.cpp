#include <gtest/gtest.h>

#include "betadyn/admissibility.hpp"
#include "betadyn/errors.hpp"
#include "support.hpp"

namespace betadyn {
namespace {

using test::golden;
using test::two;

// Lexicographic shift test written directly against the expansion of 1.
bool lex_admissible(std::span<const Digit> w, std::span<const Digit> unit) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; i + j < w.size(); ++j) {
      if (w[i + j] < unit[j]) break;
      if (w[i + j] > unit[j]) return false;
    }
  }
  return true;
}

template <typename F>
void for_each_word(Digit top, std::size_t n, F&& f) {
  DigitWord w(n, 0);
  while (true) {
    f(std::span<const Digit>(w));
    std::size_t i = n;
    while (i > 0 && w[i - 1] == top) w[--i] = 0;
    if (i == 0) return;
    ++w[i - 1];
  }
}

TEST(Parry, Examples) {
  ParryChecker two_checker(two());
  EXPECT_TRUE(two_checker.admissible(DigitWord{1, 1, 1, 0, 1}));
  ParryChecker g(golden());
  EXPECT_FALSE(g.admissible(DigitWord{1, 1}));
  EXPECT_TRUE(g.admissible(DigitWord{1, 0, 1}));
}

class AdmissibilityOracles : public ::testing::TestWithParam<const char*> {};

TEST_P(AdmissibilityOracles, ParryFollowerAndLexAgree) {
  const auto ctx = test::beta_of(GetParam());
  ParryChecker parry(ctx);
  const DigitWord unit(parry.unit().prefix(10).begin(), parry.unit().prefix(10).end());
  for (std::size_t n = 1; n <= 10; ++n) {
    for_each_word(ctx->alphabet_top(), n, [&](std::span<const Digit> w) {
      const bool p = parry.admissible(w);
      EXPECT_EQ(p, follower_value(ctx, w).has_value()) << format_digits(w);
      EXPECT_EQ(p, lex_admissible(w, unit)) << format_digits(w);
    });
  }
}

INSTANTIATE_TEST_SUITE_P(Betas, AdmissibilityOracles, ::testing::Values("2", "golden", "9/5", "3/2", "5/2", "tribonacci"));

TEST(Follower, Examples) {
  const auto g = golden();
  EXPECT_EQ(*follower_value(g, DigitWord{1, 0}), g->one());
  EXPECT_EQ(*follower_value(g, DigitWord{0, 1}), g->beta() - g->one());
  EXPECT_FALSE(follower_value(g, DigitWord{1, 1}).has_value());
  const auto b = two();
  for_each_word(1, 6, [&](std::span<const Digit> w) { EXPECT_EQ(*follower_value(b, w), b->one()); });
}

TEST(Cylinder, Examples) {
  const auto g = golden();
  const Cylinder c10 = cylinder(g, DigitWord{1, 0});
  EXPECT_EQ(c10.left, g->beta_inverse());
  EXPECT_EQ(c10.length, g->power(-2));
  EXPECT_TRUE(c10.full);
  EXPECT_EQ(c10.left + c10.length, g->one());

  const Cylinder c01 = cylinder(g, DigitWord{0, 1});
  EXPECT_EQ(c01.length, g->power(-2) * (g->beta() - g->one()));
  EXPECT_TRUE(certified_compare(c01.length, g->power(-2)) < 0);
  EXPECT_FALSE(c01.full);

  const auto b = two();
  const Cylinder c11 = cylinder(b, DigitWord{1, 1});
  EXPECT_EQ(c11.left, b->from_rational(Rational(3, 4)));
  EXPECT_EQ(c11.length, b->from_rational(Rational(1, 4)));
  EXPECT_TRUE(c11.full);

  EXPECT_THROW(cylinder(g, DigitWord{1, 1}), InadmissibleWord);
}

TEST(IsFull, Examples) {
  const auto g = golden();
  EXPECT_TRUE(is_full(g, DigitWord{0, 0}));
  EXPECT_FALSE(is_full(g, DigitWord{0, 1}));
  EXPECT_TRUE(is_full(g, DigitWord{1, 0, 1, 0}));
  EXPECT_THROW(is_full(g, DigitWord{1, 1}), InadmissibleWord);
}

TEST(Enumerate, Examples) {
  const auto g = golden();
  const auto w2 = enumerate_words(g, 2);
  ASSERT_EQ(w2.size(), 3u);
  EXPECT_EQ(w2[0].word, (DigitWord{0, 0}));
  EXPECT_EQ(w2[1].word, (DigitWord{0, 1}));
  EXPECT_EQ(w2[2].word, (DigitWord{1, 0}));
  EXPECT_EQ(enumerate_words(g, 3).size(), 5u);
  EXPECT_EQ(enumerate_words(two(), 3).size(), 8u);
  EXPECT_THROW(enumerate_words(two(), 12, 100), BudgetExceeded);
}

TEST(Enumerate, GoldenCountsAreFibonacci) {
  // No "11" words of length n are counted by F_{n+2}.
  for (unsigned n = 1; n <= 14; ++n) {
    EXPECT_EQ(enumerate_words(golden(), n).size(), test::fibonacci(n + 2)) << n;
  }
}

TEST(Enumerate, FirstDigitBranchesMergeInOrder) {
  const auto ctx = test::beta_of("5/2");
  const auto all = enumerate_words(ctx, 7);
  std::vector<DigitWord> merged;
  for (Digit d = 0; d <= ctx->alphabet_top(); ++d) {
    for_each_admissible(ctx, 7, kDefaultEnumerationBudget,
                        [&](std::span<const Digit> w, const ExactReal&) { merged.emplace_back(w.begin(), w.end()); },
                        d);
  }
  ASSERT_EQ(merged.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(merged[i], all[i].word);
  EXPECT_TRUE(std::is_sorted(merged.begin(), merged.end()));
}

class Partition : public ::testing::TestWithParam<const char*> {};

TEST_P(Partition, CylindersTelescopeToUnitInterval) {
  const auto ctx = test::beta_of(GetParam());
  for (std::size_t n = 1; n <= 10; ++n) {
    ExactReal next_left = ctx->zero();
    for (const auto& w : enumerate_words(ctx, n)) {
      const Cylinder c = cylinder(ctx, w.word);
      ASSERT_EQ(c.left, next_left) << format_digits(w.word);
      ASSERT_TRUE(certified_compare(c.length, ctx->power(-static_cast<long long>(n))) <= 0);
      EXPECT_EQ(c.full, c.length == ctx->power(-static_cast<long long>(n)));
      next_left = c.left + c.length;
    }
    EXPECT_EQ(next_left, ctx->one()) << "n=" << n;
  }
}

INSTANTIATE_TEST_SUITE_P(Betas, Partition, ::testing::Values("2", "golden", "9/5", "tribonacci"));

TEST(Concatenation, FullPrefixesMultiplyLengths) {
  const auto g = golden();
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& w : enumerate_words(g, n)) {
      const Cylinder cw = cylinder(g, w.word);
      for (std::size_t m = 1; m <= 6; ++m) {
        bool blocked = false;
        for (const auto& v : enumerate_words(g, m)) {
          DigitWord wv = w.word;
          wv.insert(wv.end(), v.word.begin(), v.word.end());
          const auto r = follower_value(g, wv);
          if (cw.full) {
            ASSERT_TRUE(r.has_value()) << format_digits(wv);
            EXPECT_EQ(cylinder(g, wv).length, cw.length * cylinder(g, v.word).length);
          } else if (!r) {
            blocked = true;
          }
        }
        if (!cw.full && m == 6) EXPECT_TRUE(blocked) << format_digits(w.word);
      }
    }
  }
}

TEST(Concatenation, ZeroPadding) {
  for (const char* name : {"golden", "9/5", "tribonacci"}) {
    const auto ctx = test::beta_of(name);
    UnitExpansion unit(ctx);
    for (std::size_t n = 1; n <= 8; ++n) {
      for (const auto& w : enumerate_words(ctx, n)) {
        const bool full = w.follower == ctx->one();
        for (std::size_t l = 0; l <= 8; ++l) {
          DigitWord padded = w.word;
          padded.resize(n + l, 0);
          if (full) EXPECT_TRUE(is_full(ctx, padded));
        }
        DigitWord padded = w.word;
        padded.resize(n + unit.gamma(n) + 1, 0);
        EXPECT_TRUE(is_full(ctx, padded)) << name << " " << format_digits(w.word);
      }
    }
  }
}

TEST(Census, Examples) {
  const CensusRecord g3 = census(golden(), 3);
  EXPECT_EQ(g3.count, 5u);
  EXPECT_TRUE(g3.all_ok());
  const CensusRecord b5 = census(two(), 5);
  EXPECT_EQ(b5.count, 32u);
  EXPECT_EQ(b5.full_count, 32u);
  EXPECT_EQ(census(golden(), 12).count, 377u);
}

TEST(Census, BoundsAndPigeonholeAgreeWithOracles) {
  for (const char* name : {"2", "golden", "9/5"}) {
    const auto ctx = test::beta_of(name);
    const double beta = approximate(ctx->beta(), 60).get_d();
    for (std::size_t n = 1; n <= 12; ++n) {
      const CensusRecord rec = census(ctx, n);
      EXPECT_TRUE(rec.all_ok()) << name << " n=" << n;
      EXPECT_GE(rec.full_count, rec.count / (n + 1));
      // Floating oracle for the counting bounds, away from ties.
      EXPECT_LE(std::pow(beta, n), rec.count * (1 + 1e-12));
      EXPECT_LE(rec.count, std::pow(beta, n + 1) / (beta - 1) * (1 + 1e-12));
      // Direct window scan.
      const auto words = enumerate_words(ctx, n);
      std::size_t since_full = 0;
      bool ok = true;
      for (const auto& w : words) {
        since_full = w.follower == ctx->one() ? 0 : since_full + 1;
        if (since_full >= n + 1) ok = false;
      }
      EXPECT_EQ(ok, rec.pigeonhole_ok);
    }
  }
}

TEST(FindH, Examples) {
  EXPECT_EQ(find_h(two()), 2u);
  EXPECT_EQ(find_h(golden()), 3u);
  EXPECT_EQ(find_h(test::beta_of("3/2")), 3u);
}

}  // namespace
}  // namespace betadyn
