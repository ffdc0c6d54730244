#include <gtest/gtest.h>

#include "betadyn/constructions.hpp"
#include "betadyn/errors.hpp"
#include "support.hpp"

namespace betadyn {
namespace {

using test::golden;
using test::two;

std::shared_ptr<const EpSchedule> golden_ep(std::size_t levels = 2, unsigned p = 3) {
  const auto g = golden();
  return std::make_shared<const EpSchedule>(build_ep_schedule(g, p, Phi::sqrt(), levels));
}

Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

TEST(Phi, ParseNameRoundTrip) {
  const auto g = golden();
  for (const char* text : {"sqrt", "power:1/3", "power:2/3", "log", "linear_over_log", "table:60=10,20000=120"}) {
    const Phi phi = Phi::parse(text, g);
    EXPECT_EQ(Phi::parse(phi.name(), g).name(), phi.name()) << text;
  }
  EXPECT_EQ(Phi::parse("linear", g).family(), Phi::Family::power);
  EXPECT_THROW(Phi::parse("power:3/2", g), std::invalid_argument);
  EXPECT_THROW(Phi::parse("table:4=3,5=2", g), std::invalid_argument);
  EXPECT_THROW(Phi::parse("cubic", g), std::invalid_argument);
}

TEST(Phi, ExactComparisons) {
  const Phi s = Phi::sqrt();
  EXPECT_EQ(s.compare(12100, 110), std::strong_ordering::equal);
  EXPECT_EQ(s.compare(12099, 110), std::strong_ordering::less);
  EXPECT_EQ(s.compare(12101, 110), std::strong_ordering::greater);
  const Phi cube = Phi::power(Rational(1, 3));
  EXPECT_EQ(cube.compare(1000, 10), std::strong_ordering::equal);
  EXPECT_EQ(cube.compare(999, 10), std::strong_ordering::less);
  const Phi lg = Phi::log_base_beta(two());
  EXPECT_EQ(lg.compare(1024, 10), std::strong_ordering::equal);
  EXPECT_EQ(lg.compare(1025, 10), std::strong_ordering::greater);
  const Phi glog = Phi::log_base_beta(golden());
  EXPECT_EQ(glog.compare(7, 4), std::strong_ordering::greater);  // beta^4 = 6.85
  EXPECT_EQ(glog.compare(6, 4), std::strong_ordering::less);
}

TEST(Phi, MonotoneWithNestedEnclosures) {
  const auto g = golden();
  for (const char* text : {"sqrt", "power:1/3", "log", "linear_over_log", "table:3=1,10=2,100=5"}) {
    const Phi phi = Phi::parse(text, g);
    Enclosure prev{-1, -1};
    for (Integer n = std::max<Integer>(phi.domain_start(), 3); n <= 100; n += 1) {
      if (phi.family() == Phi::Family::table && !phi.table_values().count(n)) continue;
      const Enclosure coarse = phi.enclose(n, 24);
      const Enclosure fine = phi.enclose(n, 96);
      EXPECT_TRUE(coarse.contains(fine)) << text << " n=" << n.get_str();
      EXPECT_GT(fine.lo, prev.hi) << text << " n=" << n.get_str();
      prev = fine;
    }
  }
}

TEST(EnumerateM, Examples) {
  const auto m = enumerate_M(golden(), 4);
  EXPECT_NE(std::find(m->words().begin(), m->words().end(), DigitWord{1, 0, 0, 0}), m->words().end());
  // (1,0,1,0) is the concatenation of two full words (1,0), hence full.
  EXPECT_NE(std::find(m->words().begin(), m->words().end(), DigitWord{1, 0, 1, 0}), m->words().end());
  EXPECT_EQ(m->size(), 2u);
  EXPECT_EQ(enumerate_M(two(), 3)->size(), 4u);
}

TEST(EnumerateM, MatchesBruteForce) {
  for (const char* name : {"golden", "9/5", "tribonacci"}) {
    const auto ctx = test::beta_of(name);
    for (std::size_t d = 4; d <= 9; ++d) {
      std::vector<DigitWord> expected;
      DigitWord w(d, 0);
      w[0] = 1;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == d) {
          const auto r = follower_value(ctx, w);
          if (r && *r == ctx->one()) expected.push_back(w);
          return;
        }
        for (Digit a = 0; a <= ctx->alphabet_top(); ++a) {
          w[i] = a;
          rec(i + 1);
        }
      };
      rec(1);
      EXPECT_EQ(enumerate_M(ctx, d)->words(), expected) << name << " d=" << d;
    }
  }
}

TEST(EpSchedule, GoldenSqrtExamples) {
  const auto s = golden_ep(2);
  EXPECT_EQ(s->h, 3u);
  EXPECT_EQ(s->level(1).n, Integer(static_cast<long>(std::ceil(std::exp(4.0)))));
  EXPECT_EQ(s->level(1).n, 55);
  EXPECT_EQ(s->level(1).d, static_cast<unsigned long>(std::log(55.0)));
  EXPECT_EQ(s->level(2).n, 12100);
  EXPECT_EQ(s->level(2).tau, 12045 / 4);
  EXPECT_EQ(s->level(2).tau, 3011);
}

TEST(EpSchedule, LinearPhiIsInfeasible) {
  EXPECT_THROW(build_ep_schedule(golden(), 3, Phi::parse("linear", golden()), 2), Infeasible);
}

TEST(EpSchedule, RejectsBadArguments) {
  EXPECT_THROW(build_ep_schedule(golden(), 1, Phi::sqrt(), 2), std::invalid_argument);
  EXPECT_THROW(build_ep_schedule(golden(), 3, Phi::sqrt(), 0), std::invalid_argument);
}

// Independent sqrt schedule: phi(n) >= c <=> n >= c^2 and n >= k sqrt(n) <=> n >= k^2.
TEST(EpSchedule, SqrtScheduleMatchesIntegerOracle) {
  for (const char* name : {"2", "golden", "9/5"}) {
    const auto ctx = test::beta_of(name);
    const unsigned h = find_h(ctx);
    for (unsigned p : {2u, 3u, 5u}) {
      const EpSchedule s = build_ep_schedule(ctx, p, Phi::sqrt(), 3);
      Integer prev = static_cast<long>(std::ceil(std::exp(h + 1.0)));
      EXPECT_EQ(s.level(1).n, prev);
      unsigned long d_prev = floor_ln(prev).get_ui();
      for (unsigned k = 2; k <= 3; ++k) {
        Integer n = std::max<Integer>(prev + 1, Integer(k * prev) * Integer(k * prev));
        n = std::max<Integer>(n, Integer(k * k));
        while (true) {
          const Integer span = k % 2 == 0 ? Integer(n - prev) : Integer(floor(Rational(Integer((p - 1) * n), p)) - prev);
          const Integer tau = span / d_prev;
          const Integer tail = n - prev - tau * d_prev;
          const bool odd_ok = k % 2 == 0 || p * tail > n;
          if (tau >= 1 && floor_ln(n) > h && odd_ok) break;
          ++n;
        }
        EXPECT_EQ(s.level(k).n, n) << name << " p=" << p << " k=" << k;
        EXPECT_GE(isqrt(n), k * prev);
        prev = n;
        d_prev = floor_ln(n).get_ui();
      }
    }
  }
}

struct FamilyCase {
  const char* beta;
  const char* phi;
  std::size_t levels;
};

void PrintTo(const FamilyCase& c, std::ostream* os) { *os << c.beta << " " << c.phi << " levels=" << c.levels; }

class EpScheduleInvariants : public ::testing::TestWithParam<FamilyCase> {};

TEST_P(EpScheduleInvariants, HoldForEveryEmittedSchedule) {
  const FamilyCase c = GetParam();
  const auto ctx = test::beta_of(c.beta);
  const Phi phi = Phi::parse(c.phi, ctx);
  for (unsigned p : {2u, 3u, 5u}) {
    const EpSchedule s = build_ep_schedule(ctx, p, phi, c.levels);
    EXPECT_NO_THROW(validate(s));
    EXPECT_GE(s.level(1).n, ceil_exp(s.h + 1));
    EXPECT_NE(phi.compare(s.level(1).n, Rational(s.level(1).n)), std::strong_ordering::greater);
    for (std::size_t k = 2; k <= s.size(); ++k) {
      const EpLevel& lv = s.level(k);
      const EpLevel& prev = s.level(k - 1);
      EXPECT_GT(lv.n, prev.n);
      EXPECT_NE(phi.compare(lv.n, Rational(lv.n)), std::strong_ordering::greater);
      EXPECT_NE(phi.compare(lv.n, Rational(Integer(k * prev.n))), std::strong_ordering::less);
      EXPECT_NE(phi.compare(lv.n, Rational(lv.n, k)), std::strong_ordering::greater);
      EXPECT_GE(lv.tau, 1);
      EXPECT_GE(lv.tail, 0);
      EXPECT_EQ(lv.n - prev.n, lv.tau * prev.d + lv.tail);
      EXPECT_GT(lv.d, s.h);
      EXPECT_EQ(lv.d, floor_ln(lv.n).get_ui());
      if (k % 2 == 1) EXPECT_GT(p * lv.tail, lv.n);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Families, EpScheduleInvariants,
                         ::testing::Values(FamilyCase{"golden", "sqrt", 3}, FamilyCase{"golden", "power:1/3", 3},
                                           FamilyCase{"golden", "power:2/3", 3}, FamilyCase{"golden", "log", 2},
                                           FamilyCase{"golden", "linear_over_log", 4}, FamilyCase{"2", "sqrt", 3},
                                           FamilyCase{"9/5", "linear_over_log", 4},
                                           FamilyCase{"golden", "table:60=10,200=50,20000=140,10000000=300000", 3}),
                         [](const ::testing::TestParamInfo<FamilyCase>& info) {
                           std::string name = std::string(info.param.beta) + "_" + info.param.phi;
                           for (char& c : name) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return name.substr(0, name.find("_table_") == std::string::npos ? name.size() : name.find("_table_") + 6);
                         });

TEST(EpSchedule, ValidateRejectsTampering) {
  EpSchedule s = *golden_ep(2);
  s.levels[1].tau += 1;
  EXPECT_THROW(validate(s), Infeasible);
}

TEST(EpStream, FirstLevelAndFullPrefixes) {
  const auto s = golden_ep(2);
  const EpPointStream stream = ep_stream(s, 42);
  const DigitWord digits = stream.materialize(12100);
  DigitWord u1(55, 0);
  u1[0] = 1;
  EXPECT_TRUE(std::equal(u1.begin(), u1.end(), digits.begin()));
  EXPECT_EQ(stream.plan()->boundary(1), 55);
  EXPECT_EQ(stream.plan()->boundary(2), 12100);
  EXPECT_EQ(stream.plan()->length(), 12100);
  const auto g = golden();
  ExactReal r = g->one();
  for (std::size_t i = 0; i < digits.size(); ++i) {
    auto next = follower_step(r, digits[i]);
    ASSERT_TRUE(next.has_value()) << "position " << i + 1;
    r = *next;
    if (i + 1 == 55 || i + 1 == 12100) EXPECT_EQ(r, g->one());
  }
  ParryChecker parry(g);
  EXPECT_TRUE(parry.admissible(digits));
}

TEST(EpStream, DeterministicPerSeed) {
  const auto s = golden_ep(2);
  EXPECT_EQ(ep_stream(s, 42).materialize(12100), ep_stream(s, 42).materialize(12100));
  EXPECT_NE(ep_stream(s, 42).materialize(12100), ep_stream(s, 43).materialize(12100));
}

TEST(EpStream, DrawsAreFromTheWordSet) {
  const auto s = golden_ep(2);
  const DigitWord digits = ep_stream(s, 7).materialize(12100);
  const auto& words = s->level(1).M->words();
  for (std::size_t i = 0; i < 3011; ++i) {
    const DigitWord w(digits.begin() + 55 + 4 * i, digits.begin() + 55 + 4 * (i + 1));
    EXPECT_NE(std::find(words.begin(), words.end(), w), words.end());
  }
  for (std::size_t i = 55 + 4 * 3011; i < 12100; ++i) EXPECT_EQ(digits[i], 0);
}

TEST(DrawSequence, UniformOverWords) {
  const auto words = enumerate_M(two(), 3);
  DrawSequence draws(words, 5, 2, Integer(40000));
  std::vector<int> counts(words->size());
  for (long i = 0; i < 40000; ++i) ++counts[draws.index(Integer(i))];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(SymbolicRunlengths, AgreeWithMaterialized) {
  const auto s = golden_ep(3);
  const EpPointStream stream = ep_stream(s, 42);
  const DigitWord digits = stream.materialize(12100);
  const auto sym = symbolic_runlengths(*stream.plan(), {Integer(55), Integer(12100), s->level(3).n});
  EXPECT_EQ(sym.at(55).longest_lo, 54);
  EXPECT_TRUE(sym.at(55).exact());
  EXPECT_TRUE(sym.at(12100).exact());
  EXPECT_EQ(sym.at(12100).longest_lo, run_length(digits, 12100));
  EXPECT_EQ(sym.at(55).longest_lo, run_length(digits, 55));
  EXPECT_THROW(symbolic_runlengths(*stream.plan(), {Integer(56)}), std::invalid_argument);
}

TEST(SymbolicRunlengths, AgreeAtEveryReachableBoundary) {
  // A long schedule whose boundaries stay below 10^7 digits.
  for (const char* name : {"2", "9/5", "golden"}) {
    const auto ctx = test::beta_of(name);
    auto s = std::make_shared<const EpSchedule>(build_ep_schedule(ctx, 3, Phi::linear_over_log(), 5));
    for (std::uint64_t seed : {1u, 2u}) {
      const EpPointStream stream = ep_stream(s, seed);
      std::vector<Integer> points;
      for (const auto& b : stream.plan()->boundaries()) {
        if (b.position <= 10'000'000) points.push_back(b.position);
      }
      ASSERT_FALSE(points.empty());
      const DigitWord digits = stream.materialize(points.back().get_ui());
      const auto sym = symbolic_runlengths(*stream.plan(), points);
      for (const auto& n : points) {
        EXPECT_TRUE(sym.at(n).exact());
        EXPECT_EQ(sym.at(n).longest_lo, run_length(digits, n.get_ui())) << name << " n=" << n.get_str();
      }
    }
  }
}

TEST(RunSummary, ComposesLikeConcatenation) {
  std::mt19937_64 rng(31);
  std::bernoulli_distribution zero(0.8);
  for (int t = 0; t < 200; ++t) {
    DigitWord a(rng() % 20), b(rng() % 20);
    for (auto& d : a) d = zero(rng) ? 0 : 1;
    for (auto& d : b) d = zero(rng) ? 0 : 1;
    DigitWord ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const RunSummary s = RunSummary::of(a).then(RunSummary::of(b));
    EXPECT_EQ(s.longest_lo, run_length(ab));
    EXPECT_EQ(s.length, ab.size());
    DigitWord aaa;
    for (int i = 0; i < 3; ++i) aaa.insert(aaa.end(), a.begin(), a.end());
    EXPECT_EQ(RunSummary::of(a).repeated(3).longest_lo, run_length(aaa));
  }
  EXPECT_EQ(RunSummary::zeros(Integer("1000000000000")).longest_lo, Integer("1000000000000"));
}

TEST(PlanCursor, ReadMatchesNext) {
  const auto s = golden_ep(2);
  const EpPointStream stream = ep_stream(s, 3);
  PlanCursor a = stream.cursor();
  PlanCursor b = stream.cursor();
  DigitWord bulk(12100);
  std::size_t got = 0;
  while (got < bulk.size()) got += b.read(std::span<Digit>(bulk.data() + got, std::min<std::size_t>(777, bulk.size() - got)));
  for (std::size_t i = 0; i < bulk.size(); ++i) ASSERT_EQ(a.next(), bulk[i]);
  EXPECT_TRUE(a.done());
}

TEST(EpCheckpoints, GoldenExamples) {
  const auto s = golden_ep(3);
  const EpPointStream stream = ep_stream(s, 42);
  const CheckpointReport report = verify_ep_checkpoints(stream, 2);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_TRUE(report.all_pass());
  EXPECT_EQ(report.rows[0].r_lo, 54);
  EXPECT_EQ(report.rows[0].relation, ">");
  EXPECT_EQ(report.rows[0].bound, Rational(55, 3));
  EXPECT_NEAR(report.rows[0].ratio->approx(), 54 / std::sqrt(55.0), 1e-9);
  EXPECT_LT(report.rows[1].r_hi, 110);
  EXPECT_EQ(report.rows[1].bound, 110);
  EXPECT_TRUE(verify_ep_checkpoints(stream, 0).rows.empty());
  EXPECT_THROW(verify_ep_checkpoints(stream, 3), Unreachable);
}

TEST(EpCheckpoints, PassAcrossSeedsAndParameters) {
  for (unsigned p : {2u, 3u, 5u}) {
    auto s = std::make_shared<const EpSchedule>(build_ep_schedule(golden(), p, Phi::linear_over_log(), 5));
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      EXPECT_TRUE(verify_ep_checkpoints(ep_stream(s, seed), 3).all_pass()) << "p=" << p << " seed=" << seed;
    }
  }
}

std::shared_ptr<const USchedule> golden_u() {
  return std::make_shared<const USchedule>(build_u_schedule(golden(), DigitWord{1, 0, 1}, Phi::sqrt()));
}

TEST(USchedule, GoldenPrefixExample) {
  const auto s = golden_u();
  ASSERT_EQ(s->n.size(), 10u);
  EXPECT_EQ(s->n[0], 0);
  EXPECT_GT(s->n[1] - s->n[0], std::max<Integer>(2 * 3, 1 + 1));
  EXPECT_EQ(s->n[1], 7);
  EXPECT_EQ(s->n[2], 49);
  EXPECT_EQ(s->n[3], 9604);
  EXPECT_EQ(s->n[4], 830131344);
  EXPECT_NO_THROW(validate(*s));
  for (unsigned i = 1; i <= 9; ++i) {
    const Integer gap = s->n[i] - s->n[i - 1];
    EXPECT_GT(gap, std::max<Integer>(2 * s->h, i + s->gamma[i - 1]));
    EXPECT_NE(s->phi.compare(s->n[i], Rational(Integer((i - 1) * s->n[i - 1]))), std::strong_ordering::less);
    EXPECT_NE(s->phi.compare(s->n[i], Rational(s->n[i], i)), std::strong_ordering::greater);
  }
}

TEST(USchedule, OmegaBlockShapes) {
  const auto s = golden_u();
  ASSERT_EQ(s->omega.size(), 6u);
  for (const OmegaBlock& b : s->omega) {
    EXPECT_EQ(b.length, s->n[3 + b.index] - s->n[2 + b.index]);
    EXPECT_EQ(b.odd, b.index % 2 == 1);
    if (b.odd) {
      EXPECT_EQ(b.zeros, b.length - 1);
    } else {
      EXPECT_EQ(b.repetitions, b.length / 3);
      EXPECT_EQ(b.zeros, b.length - 3 * (b.length / 3));
    }
  }
  const UPointStream stream = u_stream(s);
  EXPECT_EQ(stream.plan()->boundary(3), 9604);
  // omega_1 = (1, 0^(n_4 - n_3 - 1)) starts right after n_3.
  const DigitWord digits = stream.materialize(9604 + 100);
  EXPECT_EQ(digits[9604], 1);
  for (std::size_t i = 9605; i < digits.size(); ++i) EXPECT_EQ(digits[i], 0);
}

TEST(USchedule, EvenBlocksRepeatTheSpacer) {
  // A prefix length 1 keeps n_{k+2} small enough to materialize an even block.
  const auto s = std::make_shared<const USchedule>(build_u_schedule(golden(), DigitWord{1}, Phi::sqrt()));
  const UPointStream stream = u_stream(s);
  const OmegaBlock& even = s->omega[1];
  ASSERT_FALSE(even.odd);
  const Integer start = s->n[2];
  ASSERT_LT(s->n[3], 5'000'000);
  const DigitWord digits = stream.materialize(s->n[3].get_ui());
  for (Integer i = 0; i < even.length; ++i) {
    const Digit expected = i < 3 * even.repetitions && i % 3 == 0 ? 1 : 0;
    ASSERT_EQ(digits[Integer(start + i).get_ui()], expected) << i.get_str();
  }
}

TEST(UStream, PrefixZerosAndAdmissibility) {
  const auto s = golden_u();
  const UPointStream stream = u_stream(s);
  const DigitWord digits = stream.materialize(20000);
  EXPECT_EQ(DigitWord(digits.begin(), digits.begin() + 3), (DigitWord{1, 0, 1}));
  for (std::size_t i = 3; i < 9604; ++i) ASSERT_EQ(digits[i], 0) << i;
  EXPECT_TRUE(follower_value(golden(), digits).has_value());
  EXPECT_EQ(stream.plan()->boundary(9), s->n[9]);
}

TEST(UCheckpoints, RowsAndKnownOffByOne) {
  const auto s = golden_u();
  const UPointStream stream = u_stream(s);
  const CheckpointReport report = verify_u_checkpoints(stream, 1);
  ASSERT_EQ(report.rows.size(), 2u);
  const Integer gap = s->n[8] - s->n[7];
  // The odd block before n_8 is (1, 0^(gap-1)), so its zero run is gap - 1.
  EXPECT_EQ(report.rows[0].r_lo, gap - 1);
  EXPECT_EQ(report.rows[0].relation, ">=");
  EXPECT_FALSE(report.rows[0].pass);
  EXPECT_TRUE(report.rows[1].pass);
  EXPECT_EQ(report.rows[1].bound, Rational(gap));
  EXPECT_TRUE(verify_u_checkpoints(stream, 0).rows.empty());
  EXPECT_THROW(verify_u_checkpoints(stream, 2), Unreachable);
  EXPECT_THROW(build_u_schedule(golden(), DigitWord{1, 0, 1}, Phi::sqrt(), {}, 2), Unreachable);
}

TEST(USchedule, RejectsInadmissiblePrefix) {
  EXPECT_THROW(build_u_schedule(golden(), DigitWord{1, 1}, Phi::sqrt()), InadmissibleWord);
}

TEST(DensityWitness, RandomTargets) {
  const auto g = golden();
  EXPECT_TRUE(density_witness(g, g->from_rational(Rational(1, 3)), 4, Phi::sqrt()).pass);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    const Rational x(static_cast<long>(rng() % 997) + 1, 998);
    for (std::size_t l : {1u, 2u, 4u}) {
      const DensityWitness w = density_witness(g, g->from_rational(x), l, Phi::sqrt());
      EXPECT_TRUE(w.pass) << to_string(x) << " l=" << l;
      EXPECT_EQ(w.prefix, DigitStream(g->from_rational(x)).take(l));
    }
  }
}

TEST(PowerProduct, CanonicalAndValued) {
  const PowerProduct a = PowerProduct::power(4, 3) * PowerProduct::power(2, 1);
  EXPECT_EQ(*a.value(), 128);
  EXPECT_TRUE(PowerProduct::power(7, 0).is_one());
  EXPECT_EQ(PowerProduct::power(2, 3011).to_string(10), "2^3011");
  EXPECT_FALSE(PowerProduct::power(21, 97605322).value().has_value());
  EXPECT_NEAR(PowerProduct::power(21, 97605322).ln(64).approx(), 97605322 * std::log(21.0), 1e-3);
}

}  // namespace
}  // namespace betadyn
