#pragma once

// Exact arithmetic in Q(beta).
//
// Every real quantity in the library (orbit points, cylinder endpoints and
// lengths, follower values) is an ExactReal: a coefficient vector over the
// power basis 1, beta, ..., beta^(d-1), reduced modulo the minimal polynomial
// of beta. Equality is decided symbolically; strict order is decided by
// refining a rational isolating interval of beta until the sign of the
// difference is certified.
//
// The symbolic zero test is sound only when the supplied polynomial is the
// minimal polynomial of beta. Irreducibility is not checked; the built-in
// registry polynomials are irreducible.

#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace betadyn {

using Integer = mpz_class;
using Rational = mpq_class;
using Digit = std::uint8_t;

struct RationalBeta {
  Integer numerator;
  Integer denominator{1};
};

struct AlgebraicBeta {
  // c_0, c_1, ..., c_d (lowest degree first).
  std::vector<Integer> coefficients;
  Rational lo;
  Rational hi;
};

struct BetaSpec {
  std::variant<RationalBeta, AlgebraicBeta> kind;
  std::string label;

  static BetaSpec rational(Integer numerator, Integer denominator = 1);
  // `coefficients` lowest degree first.
  static BetaSpec algebraic(std::vector<Integer> coefficients, Rational lo, Rational hi);

  // Named specs: "golden", "tribonacci", "plastic".
  static std::optional<BetaSpec> registry(std::string_view name);

  // Accepts "p/q" (or an integer), "poly:c_d,...,c_0@lo,hi", or a registry
  // name. Throws std::invalid_argument on malformed input.
  static BetaSpec parse(std::string_view text);

  std::string to_string() const;
};

// Parses "p/q", an integer, or a finite decimal ("1.25") into a Rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

class ExactReal;
class BetaContext;
using BetaPtr = std::shared_ptr<const BetaContext>;

// Closed rational interval [lo, hi].
struct RationalInterval {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
};

class BetaContext : public std::enable_shared_from_this<BetaContext> {
 public:
  struct Token;
  BetaContext(Token, const BetaSpec& spec);

  const BetaSpec& spec() const { return spec_; }
  const std::string& label() const { return label_; }
  int degree() const { return degree_; }
  bool is_rational() const { return degree_ == 1; }
  Digit alphabet_top() const { return alphabet_top_; }

  // Exact value of beta when it is rational.
  const Rational& rational_value() const { return rational_value_; }

  // beta^d expressed in the power basis (lowest degree first).
  const std::vector<Rational>& reduction() const { return reduction_; }

  // Minimal polynomial with rational coefficients, lowest degree first.
  const std::vector<Rational>& polynomial() const { return polynomial_; }

  // An interval containing beta of width at most 2^-bits. Refines the cached
  // isolating interval by bisection when needed; safe to call concurrently.
  RationalInterval enclosure(unsigned bits) const;

  ExactReal zero() const;
  ExactReal one() const;
  ExactReal beta() const;
  ExactReal beta_inverse() const;
  ExactReal from_rational(const Rational& q) const;
  // beta^e for any integer e.
  ExactReal power(long long e) const;

 private:
  void refine_locked(unsigned bits) const;
  int poly_sign(const Rational& x) const;

  BetaSpec spec_;
  std::string label_;
  int degree_ = 1;
  Digit alphabet_top_ = 0;
  Rational rational_value_;
  std::vector<Rational> polynomial_;
  std::vector<Rational> reduction_;
  std::vector<Rational> inverse_coefficients_;

  mutable std::mutex mutex_;
  mutable Rational lo_;
  mutable Rational hi_;
  mutable int sign_at_lo_ = 0;
};

// Validates `spec` and builds a context. Throws std::invalid_argument when
// beta <= 1, the polynomial is not square-free, the interval does not isolate
// exactly one root, or a denominator is zero.
BetaPtr make_beta(const BetaSpec& spec);

class ExactReal {
 public:
  ExactReal(BetaPtr context, std::vector<Rational> coefficients);

  const BetaPtr& context() const { return context_; }
  std::span<const Rational> coefficients() const { return coefficients_; }

  bool is_zero() const;
  // True when the value lies in Q (all non-constant coefficients vanish).
  bool is_rational() const;
  const Rational& constant_term() const { return coefficients_.front(); }

  // An interval containing the value, evaluated with beta refined to `bits`.
  RationalInterval enclose(unsigned bits) const;

  ExactReal& operator+=(const ExactReal& other);
  ExactReal& operator-=(const ExactReal& other);
  ExactReal& operator*=(const ExactReal& other);
  ExactReal& operator*=(const Rational& scalar);

  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const ExactReal& b) { return a *= b; }
  friend ExactReal operator*(ExactReal a, const Rational& q) { return a *= q; }
  friend ExactReal operator*(const Rational& q, ExactReal a) { return a *= q; }
  ExactReal operator-() const;

  ExactReal operator+(const Rational& q) const;
  ExactReal operator-(const Rational& q) const;

  // Symbolic equality.
  friend bool operator==(const ExactReal& a, const ExactReal& b);
  // Certified order.
  friend std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b);

  std::string to_string() const;

 private:
  void check_context(const ExactReal& other) const;

  BetaPtr context_;
  std::vector<Rational> coefficients_;
};

enum class FieldOp { add, sub, mul };
ExactReal field_arith(const ExactReal& a, const ExactReal& b, FieldOp op);

// -1, 0 or +1.
int certified_sign(const ExactReal& a);
std::strong_ordering certified_compare(const ExactReal& a, const ExactReal& b);
std::strong_ordering certified_compare(const ExactReal& a, const Rational& q);
Integer certified_ceil(const ExactReal& a);
Integer certified_floor(const ExactReal& a);

// A rational within 2^-bits of `a`.
Rational approximate(const ExactReal& a, unsigned bits);

// Floor and ceiling of rationals.
Integer floor(const Rational& q);
Integer ceil(const Rational& q);

}  // namespace betadyn
