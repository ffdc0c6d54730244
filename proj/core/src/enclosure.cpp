#include "betadyn/enclosure.hpp"

#include <algorithm>
#include <stdexcept>

#include <mpfr.h>

namespace betadyn {

namespace {

class Mpfr {
 public:
  explicit Mpfr(unsigned bits) { mpfr_init2(value_, static_cast<mpfr_prec_t>(std::max(bits, 16u))); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return value_; }

  Rational to_rational() {
    if (!mpfr_number_p(value_)) throw std::domain_error("non-finite value in enclosure");
    Rational q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
  }

 private:
  mpfr_t value_;
};

unsigned bit_length(const Integer& n) { return static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2)); }

}  // namespace

std::string Enclosure::to_string() const {
  return "[" + betadyn::to_string(lo) + ", " + betadyn::to_string(hi) + "]";
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  const Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("enclosure division by an interval containing zero");
  return a * Enclosure{1 / b.hi, 1 / b.lo};
}

Enclosure operator*(const Rational& q, const Enclosure& a) {
  if (q >= 0) return {q * a.lo, q * a.hi};
  return {q * a.hi, q * a.lo};
}

Enclosure ln_enclosure(const Rational& lo, const Rational& hi, unsigned bits) {
  if (lo <= 0) throw std::domain_error("logarithm of a non-positive value");
  Mpfr x(bits), lower(bits), upper(bits);
  mpfr_set_q(x.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_log(lower.get(), x.get(), MPFR_RNDD);
  mpfr_set_q(x.get(), hi.get_mpq_t(), MPFR_RNDU);
  mpfr_log(upper.get(), x.get(), MPFR_RNDU);
  return {lower.to_rational(), upper.to_rational()};
}

Enclosure ln_enclosure(const Rational& x, unsigned bits) {
  if (x == 1) return Enclosure::point(0);
  return ln_enclosure(x, x, bits);
}

Enclosure exp_enclosure(const Rational& x, unsigned bits) {
  if (x == 0) return Enclosure::point(1);
  Mpfr arg(bits), lower(bits), upper(bits);
  mpfr_set_q(arg.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_exp(lower.get(), arg.get(), MPFR_RNDD);
  mpfr_set_q(arg.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_exp(upper.get(), arg.get(), MPFR_RNDU);
  return {lower.to_rational(), upper.to_rational()};
}

Enclosure sqrt_enclosure(const Integer& n, unsigned bits) {
  Integer root;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  if (root * root == n) return Enclosure::point(Rational(root));
  const unsigned prec = bits + bit_length(n);
  Mpfr x(prec), lower(prec), upper(prec);
  mpfr_set_z(x.get(), n.get_mpz_t(), MPFR_RNDN);  // exact at this precision
  mpfr_sqrt(lower.get(), x.get(), MPFR_RNDD);
  mpfr_sqrt(upper.get(), x.get(), MPFR_RNDU);
  return {lower.to_rational(), upper.to_rational()};
}

Enclosure pow_enclosure(const Integer& x, const Rational& alpha, unsigned bits) {
  if (x < 1) throw std::domain_error("pow_enclosure expects x >= 1");
  if (x == 1) return Enclosure::point(1);
  if (alpha.get_den() == 1) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), x.get_mpz_t(), alpha.get_num().get_ui());
    return Enclosure::point(Rational(out));
  }
  // x^alpha = exp(alpha * ln x), x >= 2 so ln x > 0 and alpha > 0.
  const unsigned prec = bits + bit_length(x);
  const Enclosure l = ln_enclosure(Rational(x), prec);
  const Enclosure e = alpha * l;
  const Enclosure lower = exp_enclosure(e.lo, prec);
  const Enclosure upper = exp_enclosure(e.hi, prec);
  return {lower.lo, upper.hi};
}

Enclosure ln_beta(const BetaContext& context, unsigned bits) {
  const RationalInterval b = context.enclosure(bits + 8);
  return ln_enclosure(b.lo, b.hi, bits);
}

Integer floor_ln(const Integer& n) {
  if (n < 1) throw std::domain_error("floor_ln expects n >= 1");
  if (n == 1) return 0;
  // ln n is irrational for n >= 2, so refinement decides the floor.
  for (unsigned bits = 64;; bits *= 2) {
    const Enclosure e = ln_enclosure(Rational(n), bits + bit_length(n));
    Integer lo = floor(e.lo);
    if (lo == floor(e.hi)) return lo;
  }
}

Integer ceil_exp(unsigned long k) {
  if (k == 0) return 1;
  // e^k is irrational for k >= 1.
  for (unsigned bits = 64;; bits *= 2) {
    const Enclosure e = exp_enclosure(Rational(static_cast<long>(k)), bits + static_cast<unsigned>(2 * k));
    Integer hi = ceil(e.hi);
    if (hi == ceil(e.lo)) return hi;
  }
}

}  // namespace betadyn
