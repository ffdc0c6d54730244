#include "betadyn/analysis.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "betadyn/errors.hpp"

namespace betadyn {

namespace {

using Factorization = std::map<Integer, Integer>;

Integer integer_of(std::uint64_t v) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

// Trial division; cofactors beyond 10^12 are kept whole, which only costs
// canonicity for bases far larger than any word count.
void factor_into(Integer n, const Integer& exponent, Factorization& out) {
  const Integer limit = Integer("1000000000000");
  for (Integer p = 2; p * p <= n && p <= limit; ++p) {
    while (n % p == 0) {
      out[p] += exponent;
      n /= p;
    }
  }
  if (n > 1) out[n] += exponent;
}

struct Canonical {
  Integer numerator;
  Factorization denominator;
  bool operator==(const Canonical&) const = default;
};

Canonical canonical(const Mass& m) {
  Canonical c;
  if (m.numerator == 0) {
    c.numerator = 0;
    return c;
  }
  for (const auto& [b, e] : m.denominator.factors()) factor_into(b, e, c.denominator);
  Factorization num;
  factor_into(m.numerator, 1, num);
  c.numerator = 1;
  for (auto& [p, e] : num) {
    auto it = c.denominator.find(p);
    Integer cancel = 0;
    if (it != c.denominator.end()) {
      cancel = std::min(it->second, e);
      it->second -= cancel;
      if (it->second == 0) c.denominator.erase(it);
    }
    Integer rest;
    mpz_pow_ui(rest.get_mpz_t(), p.get_mpz_t(), Integer(e - cancel).get_ui());
    c.numerator *= rest;
  }
  return c;
}

// Scale factor turning denominator `from` into `to` (to must dominate).
Integer scale_between(const Factorization& from, const Factorization& to) {
  Integer out = 1;
  for (const auto& [p, e] : to) {
    const auto it = from.find(p);
    const Integer diff = e - (it == from.end() ? Integer(0) : it->second);
    if (diff > 4096) throw std::runtime_error("mass denominators differ by too large a power");
    Integer f;
    mpz_pow_ui(f.get_mpz_t(), p.get_mpz_t(), diff.get_ui());
    out *= f;
  }
  return out;
}

PowerProduct from_factorization(const Factorization& f) {
  PowerProduct out;
  for (const auto& [p, e] : f) out *= PowerProduct::power(p, e);
  return out;
}

}  // namespace

bool Mass::is_one() const { return same_value(*this, Mass{}); }

std::optional<Rational> Mass::value(std::size_t max_digits) const {
  const auto d = denominator.value(max_digits);
  if (!d) return std::nullopt;
  Rational q(numerator, *d);
  q.canonicalize();
  return q;
}

Enclosure Mass::ln(unsigned bits) const {
  if (numerator <= 0) throw std::domain_error("log of a zero mass");
  return ln_enclosure(Rational(numerator), bits) - denominator.ln(bits);
}

std::string Mass::to_string() const {
  if (numerator == 0) return "0";
  if (denominator.is_one()) return numerator.get_str();
  return numerator.get_str() + "/" + denominator.to_string();
}

bool same_value(const Mass& a, const Mass& b) { return canonical(a) == canonical(b); }

Mass operator+(const Mass& a, const Mass& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Canonical ca = canonical(a);
  const Canonical cb = canonical(b);
  Factorization common = ca.denominator;
  for (const auto& [p, e] : cb.denominator) {
    auto& slot = common[p];
    if (slot < e) slot = e;
  }
  Mass out;
  out.numerator = ca.numerator * scale_between(ca.denominator, common) +
                  cb.numerator * scale_between(cb.denominator, common);
  out.denominator = from_factorization(common);
  return out;
}

MassAssignment::MassAssignment(std::shared_ptr<const EpSchedule> schedule) : schedule_(std::move(schedule)) {}

Mass MassAssignment::level_mass(std::size_t k) const { return Mass{1, schedule_->b(k)}; }

Mass MassAssignment::of_prefix(std::span<const Digit> word) const { return evaluate(word, 0); }

Mass MassAssignment::evaluate(std::span<const Digit> word, std::uint64_t trusted) const {
  const EpSchedule& s = *schedule_;
  const Integer n = integer_of(word.size());
  const Integer& n1 = s.level(1).n;
  if (n < n1) throw std::out_of_range("mass is defined from n_1 = " + n1.get_str() + " on");
  const Mass zero{0, {}};

  // Level 1: (1, 0^(n_1 - 1)).
  const std::uint64_t n1u = n1.get_ui();
  for (std::uint64_t i = std::min<std::uint64_t>(trusted, n1u); i < n1u; ++i) {
    if (word[i] != (i == 0 ? 1 : 0)) return zero;
  }
  if (n == n1) return Mass{};

  for (std::size_t k = 1; k < s.size(); ++k) {
    const EpLevel& lv = s.level(k);
    const EpLevel& next = s.level(k + 1);
    if (n > next.n) {
      if (k + 1 == s.size()) break;
    }
    const std::uint64_t start = lv.n.get_ui();
    const std::uint64_t end = std::min<std::uint64_t>(word.size(), next.n.get_ui());
    const std::uint64_t d = lv.d;
    const std::uint64_t draws_end = start + next.tau.get_ui() * d;
    const WordSet& m = *lv.M;
    // Validate from the chunk containing `trusted`.
    std::uint64_t pos = start;
    if (trusted > start) {
      pos = trusted >= draws_end ? draws_end : start + (trusted - start) / d * d;
      if (trusted >= next.n.get_ui()) pos = end;
    }
    while (pos < std::min(end, draws_end)) {
      const std::uint64_t len = std::min<std::uint64_t>(d, end - pos);
      if (m.count_with_prefix(word.subspan(pos, len)) == 0) return zero;
      pos += len;
    }
    for (; pos < end; ++pos) {
      if (word[pos] != 0) return zero;
    }
    if (word.size() <= next.n.get_ui()) {
      const std::uint64_t offset = word.size() - start;
      const Integer a = integer_of(m.size());
      if (word.size() >= draws_end) return Mass{1, s.b(k + 1)};
      const std::uint64_t whole = offset / d;
      const std::uint64_t rem = offset % d;
      if (rem == 0) return Mass{1, s.b(k) * PowerProduct::power(a, integer_of(whole))};
      const std::uint64_t c = m.count_with_prefix(word.subspan(start + whole * d, rem));
      return Mass{integer_of(c), s.b(k) * PowerProduct::power(a, integer_of(whole + 1))};
    }
  }
  throw Unreachable("prefix of length " + n.get_str() + " extends past the last scheduled level");
}

std::optional<std::uint64_t> MassAssignment::check_conservation(std::span<const Digit> digits, std::uint64_t from,
                                                                std::uint64_t to) const {
  if (to > digits.size()) throw std::out_of_range("conservation range exceeds the digits");
  const Digit top = schedule_->context->alphabet_top();
  DigitWord buffer(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(to));
  for (std::uint64_t n = from + 1; n <= to; ++n) {
    const std::span<const Digit> parent_word(buffer.data(), n - 1);
    const Mass parent = evaluate(parent_word, n - 1 > 0 ? n - 2 : 0);
    Mass sum{0, {}};
    const Digit original = buffer[n - 1];
    for (unsigned delta = 0; delta <= top; ++delta) {
      buffer[n - 1] = static_cast<Digit>(delta);
      sum = sum + evaluate(std::span<const Digit>(buffer.data(), n), n - 1);
    }
    buffer[n - 1] = original;
    if (!same_value(sum, parent)) return n;
  }
  return std::nullopt;
}

std::vector<DimensionSample> local_dimension_profile(const MassAssignment& mass, std::span<const Digit> digits,
                                                     const std::vector<std::uint64_t>& points, unsigned bits) {
  const BetaPtr& ctx = mass.schedule().context;
  std::vector<std::uint64_t> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  std::vector<DimensionSample> out;
  if (sorted.empty()) return out;
  if (sorted.back() > digits.size()) throw Unreachable("profile point beyond the materialized digits");

  const Enclosure ln_b = ln_beta(*ctx, bits);
  ExactReal follower = ctx->one();
  std::uint64_t consumed = 0;
  for (std::uint64_t n : sorted) {
    for (; consumed < n; ++consumed) {
      auto next = follower_step(follower, digits[consumed]);
      if (!next) throw InadmissibleWord("profile digits are not admissible");
      follower = std::move(*next);
    }
    DimensionSample sample;
    sample.n = n;
    sample.mass = mass.of_prefix(digits.subspan(0, n));
    if (sample.mass.is_zero()) throw std::invalid_argument("profile digits leave the construction");
    if (sample.mass.is_one()) {
      sample.log_ratio = Enclosure::point(0);
    } else {
      Enclosure ln_r = Enclosure::point(0);
      if (!(follower == ctx->one())) {
        for (unsigned b = bits;; b *= 2) {
          const RationalInterval r = follower.enclose(b);
          if (r.lo > 0) {
            ln_r = ln_enclosure(r.lo, r.hi, b);
            break;
          }
        }
      }
      const Enclosure ln_len = ln_r - Rational(integer_of(n)) * ln_b;
      sample.log_ratio = sample.mass.ln(bits) / ln_len;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

Enclosure cover_exponent(const EpSchedule& schedule, std::size_t k, unsigned bits) {
  const PowerProduct b = schedule.b(k);
  if (b.is_one()) return Enclosure::point(0);
  return b.ln(bits) / (Rational(schedule.level(k).n) * ln_beta(*schedule.context, bits));
}

std::vector<CountReport> verify_counts(const EpSchedule& schedule, std::size_t k_max, std::uint64_t budget) {
  if (k_max > schedule.size()) {
    throw Unreachable("k = " + std::to_string(k_max) + " exceeds the " + std::to_string(schedule.size()) +
                      " scheduled levels");
  }
  std::vector<CountReport> out;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const EpLevel& lv = schedule.level(k);
    const auto a = schedule.a(k);
    if (!a) throw BudgetExceeded("a_" + std::to_string(k) + " is beyond the enumeration budget");
    CountReport rep;
    rep.k = k;
    rep.a = *a;
    rep.g = schedule.g(k);
    rep.b = schedule.b(k);
    rep.p_k = schedule.p_k(k);
    rep.m = lv.d - schedule.h;
    std::uint64_t count = 0;
    for_each_admissible(schedule.context, rep.m, budget, [&](std::span<const Digit>, const ExactReal&) { ++count; });
    rep.sigma_count = count;
    rep.count_bound = integer_of(count / (rep.m + 1));
    rep.bound_ok = rep.a >= rep.count_bound;

    const Enclosure ln_a = ln_enclosure(Rational(rep.a), 64);
    const Rational d(static_cast<unsigned long>(lv.d));
    rep.beta_bar = Enclosure{exp_enclosure(ln_a.lo / d, 64).lo, exp_enclosure(ln_a.hi / d, 64).hi};

    for (unsigned bits = 64; bits <= 4096; bits *= 2) {
      rep.cover = cover_exponent(schedule, k, bits);
      if (rep.cover.lo >= 0 && rep.cover.hi <= 1) {
        rep.cover_in_unit = true;
        break;
      }
      if (rep.cover.hi < 0 || rep.cover.lo > 1) break;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace betadyn
