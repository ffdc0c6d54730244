#include "betadyn/phi.hpp"

#include <stdexcept>

namespace betadyn {

namespace {

constexpr unsigned kMaxEnclosureBits = 1u << 20;
constexpr unsigned long kExactLogExponentCap = 100'000;

std::strong_ordering sign_to_ordering(int s) {
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Integer pow(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

}  // namespace

Phi Phi::sqrt() { return power(Rational(1, 2)); }

Phi Phi::power(const Rational& alpha) {
  if (alpha <= 0 || alpha > 1) throw std::invalid_argument("power exponent must lie in (0, 1]");
  if (alpha.get_num() > 64 || alpha.get_den() > 64) {
    throw std::invalid_argument("power exponent numerator and denominator must be at most 64");
  }
  Phi phi;
  phi.family_ = Family::power;
  phi.alpha_ = alpha;
  return phi;
}

Phi Phi::log_base_beta(BetaPtr context) {
  if (!context) throw std::invalid_argument("log phi needs a beta context");
  Phi phi;
  phi.family_ = Family::log_base_beta;
  phi.context_ = std::move(context);
  return phi;
}

Phi Phi::linear_over_log() {
  Phi phi;
  phi.family_ = Family::linear_over_log;
  return phi;
}

Phi Phi::table(std::map<Integer, Rational> values) {
  if (values.empty()) throw std::invalid_argument("phi table is empty");
  const Rational* prev = nullptr;
  for (const auto& [n, v] : values) {
    if (n < 1) throw std::invalid_argument("phi table keys must be positive integers");
    if (v <= 0) throw std::invalid_argument("phi table values must be positive");
    if (prev && v <= *prev) throw std::invalid_argument("phi table must be strictly increasing");
    prev = &v;
  }
  Phi phi;
  phi.family_ = Family::table;
  phi.table_ = std::move(values);
  return phi;
}

Phi Phi::parse(std::string_view text, const BetaPtr& context) {
  if (text == "sqrt") return sqrt();
  if (text == "linear") return power(Rational(1));
  if (text == "log") return log_base_beta(context);
  if (text == "linear_over_log") return linear_over_log();
  if (text.substr(0, 6) == "power:") return power(parse_rational(text.substr(6)));
  if (text.substr(0, 6) == "table:") {
    std::map<Integer, Rational> values;
    std::string_view body = text.substr(6);
    while (!body.empty()) {
      const auto comma = body.find(',');
      const std::string_view entry = body.substr(0, comma);
      const auto eq = entry.find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("phi table entries must be n=value");
      const Rational key = parse_rational(entry.substr(0, eq));
      if (key.get_den() != 1) throw std::invalid_argument("phi table keys must be integers");
      values[key.get_num()] = parse_rational(entry.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return table(std::move(values));
  }
  throw std::invalid_argument("unknown phi '" + std::string(text) + "'");
}

std::string Phi::name() const {
  switch (family_) {
    case Family::power:
      if (alpha_ == Rational(1, 2)) return "sqrt";
      if (alpha_ == 1) return "linear";
      return "power:" + to_string(alpha_);
    case Family::log_base_beta: return "log";
    case Family::linear_over_log: return "linear_over_log";
    case Family::table: {
      std::string out = "table:";
      bool first = true;
      for (const auto& [n, v] : table_) {
        if (!first) out += ',';
        first = false;
        out += n.get_str() + "=" + to_string(v);
      }
      return out;
    }
  }
  return "";
}

Integer Phi::domain_start() const {
  switch (family_) {
    case Family::power: return 1;
    case Family::log_base_beta: return 2;
    case Family::linear_over_log: return 3;
    case Family::table: return table_.begin()->first;
  }
  return 1;
}

std::strong_ordering Phi::compare(const Integer& n, const Rational& q) const {
  if (n < domain_start()) throw std::out_of_range("phi is undefined at n = " + n.get_str());
  switch (family_) {
    case Family::power: {
      if (q <= 0) return std::strong_ordering::greater;
      // n^(a/b) <=> u/v  iff  n^a v^b <=> u^b
      const unsigned long a = alpha_.get_num().get_ui();
      const unsigned long b = alpha_.get_den().get_ui();
      const Integer lhs = pow(n, a) * pow(q.get_den(), b);
      const Integer rhs = pow(q.get_num(), b);
      return sign_to_ordering(cmp(lhs, rhs));
    }
    case Family::table: {
      const auto it = table_.find(n);
      if (it == table_.end()) throw std::out_of_range("phi table has no entry for n = " + n.get_str());
      return sign_to_ordering(cmp(it->second, q));
    }
    case Family::log_base_beta: {
      if (q <= 0) return std::strong_ordering::greater;
      // log_beta n <=> u/v  iff  v ln n - u ln beta <=> 0  iff  n^v <=> beta^u
      const Integer& u = q.get_num();
      const Integer& v = q.get_den();
      bool tried_exact = false;
      for (unsigned bits = 64; bits <= kMaxEnclosureBits; bits *= 2) {
        const unsigned work = bits + static_cast<unsigned>(mpz_sizeinbase(u.get_mpz_t(), 2)) +
                              static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
        const Enclosure diff = Rational(v) * ln_enclosure(Rational(n), work) - Rational(u) * ln_beta(*context_, work);
        if (diff.lo > 0) return std::strong_ordering::greater;
        if (diff.hi < 0) return std::strong_ordering::less;
        if (!tried_exact && u.fits_ulong_p() && u.get_ui() <= kExactLogExponentCap && v.fits_ulong_p() &&
            v.get_ui() <= kExactLogExponentCap) {
          tried_exact = true;
          const ExactReal lhs = context_->from_rational(Rational(pow(n, v.get_ui())));
          const ExactReal rhs = context_->power(static_cast<long long>(u.get_ui()));
          if (lhs == rhs) return std::strong_ordering::equal;
        }
      }
      throw std::runtime_error("log phi comparison did not resolve");
    }
    case Family::linear_over_log: {
      if (q <= 0) return std::strong_ordering::greater;
      // n / ln n <=> q  iff  n - q ln n <=> 0 (ln n > 0); ln n is irrational.
      for (unsigned bits = 64; bits <= kMaxEnclosureBits; bits *= 2) {
        const unsigned work = bits + static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2)) +
                              static_cast<unsigned>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
        const Enclosure diff = Enclosure::point(Rational(n)) - q * ln_enclosure(Rational(n), work);
        if (diff.lo > 0) return std::strong_ordering::greater;
        if (diff.hi < 0) return std::strong_ordering::less;
      }
      throw std::runtime_error("linear_over_log phi comparison did not resolve");
    }
  }
  throw std::logic_error("unknown phi family");
}

Enclosure Phi::enclose(const Integer& n, unsigned bits) const {
  if (n < domain_start()) throw std::out_of_range("phi is undefined at n = " + n.get_str());
  switch (family_) {
    case Family::power: return pow_enclosure(n, alpha_, bits);
    case Family::table: {
      const auto it = table_.find(n);
      if (it == table_.end()) throw std::out_of_range("phi table has no entry for n = " + n.get_str());
      return Enclosure::point(it->second);
    }
    case Family::log_base_beta: return ln_enclosure(Rational(n), bits) / ln_beta(*context_, bits);
    case Family::linear_over_log: return Enclosure::point(Rational(n)) / ln_enclosure(Rational(n), bits);
  }
  throw std::logic_error("unknown phi family");
}

}  // namespace betadyn
