#include <random>
#include <stdexcept>

#include "betadyn/analysis.hpp"

namespace betadyn {

namespace {

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(attempt)};
  return std::mt19937_64(seq);
}

Integer random_bits(std::mt19937_64& engine, unsigned bits) {
  std::vector<std::uint64_t> words((bits + 63) / 64);
  for (auto& w : words) w = engine();
  Integer out;
  mpz_import(out.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
  mpz_fdiv_r_2exp(out.get_mpz_t(), out.get_mpz_t(), bits);
  return out;
}

std::optional<Enclosure> law_ratio(std::uint64_t r, std::uint64_t n, const Enclosure& ln_b) {
  if (n < 2) return std::nullopt;
  const Enclosure ln_n = ln_enclosure(Rational(static_cast<unsigned long>(n)), 64);
  return Rational(static_cast<unsigned long>(r)) * ln_b / ln_n;
}

unsigned sample_precision(const BetaContext& context, std::uint64_t n) {
  const Rational hi = context.enclosure(32).hi;
  const Enclosure log2_beta = ln_enclosure(hi, 64) / ln_enclosure(Rational(2), 64);
  const Integer p = ceil(Rational(static_cast<unsigned long>(n)) * log2_beta.hi);
  return static_cast<unsigned>(p.get_ui()) + 64;
}

}  // namespace

std::string to_string(McMode mode) { return mode == McMode::exact ? "exact" : "direct-bits"; }

McMode parse_mc_mode(std::string_view text) {
  if (text == "exact") return McMode::exact;
  if (text == "direct-bits") return McMode::direct_bits;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected exact or direct-bits)");
}

std::optional<DigitWord> interval_digits(const BetaContext& context, const Integer& m, unsigned precision,
                                         std::uint64_t n, unsigned work) {
  if (work < precision) throw std::invalid_argument("work precision below sample precision");
  const RationalInterval beta = context.enclosure(work + 16);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, work);
  const Integer b_lo = floor(beta.lo * Rational(scale));
  const Integer b_hi = ceil(beta.hi * Rational(scale));

  Integer x_lo = m + 1;
  mpz_mul_2exp(x_lo.get_mpz_t(), x_lo.get_mpz_t(), work - precision);
  Integer x_hi = x_lo;
  Integer y_lo, y_hi, c_lo, c_hi, shifted;
  DigitWord digits;
  digits.reserve(n);
  const unsigned two_q = 2 * work;
  for (std::uint64_t i = 0; i < n; ++i) {
    mpz_mul(y_lo.get_mpz_t(), b_lo.get_mpz_t(), x_lo.get_mpz_t());
    mpz_mul(y_hi.get_mpz_t(), b_hi.get_mpz_t(), x_hi.get_mpz_t());
    mpz_cdiv_q_2exp(c_lo.get_mpz_t(), y_lo.get_mpz_t(), two_q);
    mpz_cdiv_q_2exp(c_hi.get_mpz_t(), y_hi.get_mpz_t(), two_q);
    if (c_lo != c_hi || c_lo < 1) return std::nullopt;
    const unsigned long digit = c_lo.get_ui() - 1;
    if (digit > context.alphabet_top()) return std::nullopt;
    digits.push_back(static_cast<Digit>(digit));
    // T x = beta x - digit, rounded outward at precision `work`.
    mpz_mul_2exp(shifted.get_mpz_t(), Integer(digit).get_mpz_t(), two_q);
    y_lo -= shifted;
    y_hi -= shifted;
    mpz_fdiv_q_2exp(x_lo.get_mpz_t(), y_lo.get_mpz_t(), work);
    mpz_cdiv_q_2exp(x_hi.get_mpz_t(), y_hi.get_mpz_t(), work);
    if (x_hi > scale) x_hi = scale;
    if (x_lo < 0) x_lo = 0;
  }
  return digits;
}

McReport mc_law(const BetaPtr& context, std::uint64_t n, std::uint64_t samples, std::uint64_t seed, McMode mode) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  if (mode == McMode::direct_bits && !(context->is_rational() && context->rational_value() == 2)) {
    throw std::invalid_argument("direct-bits mode requires beta = 2");
  }
  McReport report;
  report.beta = context->label();
  report.n = n;
  report.samples = samples;
  report.seed = seed;
  report.mode = mode;
  const Enclosure ln_b = ln_beta(*context, 64);
  const unsigned precision = mode == McMode::exact ? sample_precision(*context, n) : 0;

  for (std::uint64_t i = 0; i < samples; ++i) {
    McSample row;
    row.index = i;
    if (mode == McMode::direct_bits) {
      auto engine = sample_engine(seed, i, 0);
      std::uint64_t run = 0, longest = 0, left = n;
      while (left > 0) {
        std::uint64_t word = engine();
        const unsigned take = left < 64 ? static_cast<unsigned>(left) : 64;
        for (unsigned b = 0; b < take; ++b, word >>= 1) {
          if (word & 1) {
            run = 0;
          } else if (++run > longest) {
            longest = run;
          }
        }
        left -= take;
      }
      row.run_length = longest;
    } else {
      std::optional<DigitWord> digits;
      for (std::uint64_t attempt = 0; !digits; ++attempt) {
        if (attempt == 16) throw std::runtime_error("sample " + std::to_string(i) + " could not be certified");
        auto engine = sample_engine(seed, i, attempt);
        const Integer m = random_bits(engine, precision);
        digits = interval_digits(*context, m, precision, n, precision);
        if (!digits) {
          ++row.restarts;
          digits = interval_digits(*context, m, precision, n, 2 * precision);
        }
        if (!digits) ++row.redraws;
      }
      row.run_length = run_length(*digits);
    }
    row.ratio = law_ratio(row.run_length, n, ln_b);
    report.restarts += row.restarts;
    report.redraws += row.redraws;
    if (row.redraws > 0) ++report.uncertified;
    report.rows.push_back(std::move(row));
  }

  Enclosure sum = Enclosure::point(0);
  std::uint64_t defined = 0;
  for (const auto& row : report.rows) {
    if (!row.ratio) continue;
    sum = sum + *row.ratio;
    ++defined;
    if (!report.min) {
      report.min = row.ratio;
      report.max = row.ratio;
    } else {
      report.min = Enclosure{std::min(report.min->lo, row.ratio->lo), std::min(report.min->hi, row.ratio->hi)};
      report.max = Enclosure{std::max(report.max->lo, row.ratio->lo), std::max(report.max->hi, row.ratio->hi)};
    }
  }
  if (defined > 0) {
    const Rational count(static_cast<unsigned long>(defined));
    report.mean = Enclosure{sum.lo / count, sum.hi / count};
  }
  return report;
}

}  // namespace betadyn
