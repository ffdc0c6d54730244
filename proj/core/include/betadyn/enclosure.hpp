#pragma once

// Certified rational enclosures of transcendental quantities.
//
// Logarithms and exponentials are evaluated with directed rounding and the
// resulting bounds are returned as exact rationals, so every comparison made
// downstream is a comparison of rationals.

#include <string>

#include "betadyn/numerics.hpp"

namespace betadyn {

struct Enclosure {
  Rational lo;
  Rational hi;

  static Enclosure point(const Rational& q) { return {q, q}; }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  double approx() const { return midpoint().get_d(); }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool contains(const Enclosure& inner) const { return lo <= inner.lo && inner.hi <= hi; }
  // "[lo, hi]" with exact rational endpoints.
  std::string to_string() const;
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
// Throws std::domain_error when `b` contains zero.
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Rational& q, const Enclosure& a);

// ln over the interval [lo, hi], 0 < lo <= hi, at working precision `bits`.
Enclosure ln_enclosure(const Rational& lo, const Rational& hi, unsigned bits);
Enclosure ln_enclosure(const Rational& x, unsigned bits);
Enclosure exp_enclosure(const Rational& x, unsigned bits);
Enclosure sqrt_enclosure(const Integer& n, unsigned bits);
// x^alpha for x >= 1 integer and rational alpha > 0.
Enclosure pow_enclosure(const Integer& x, const Rational& alpha, unsigned bits);
Enclosure ln_beta(const BetaContext& context, unsigned bits);

// floor(ln n) for n >= 1, exact.
Integer floor_ln(const Integer& n);
// ceil(e^k) for integer k >= 0, exact.
Integer ceil_exp(unsigned long k);

}  // namespace betadyn
