#include "betadyn/numerics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "betadyn/errors.hpp"
#include "polynomial.hpp"

namespace betadyn {

struct BetaContext::Token {};

namespace {

constexpr unsigned kInitialBits = 64;

Rational dyadic(long exponent) {
  Rational q = 1;
  if (exponent >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return q;
}

Integer parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  std::string s(text);
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed integer '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(text.substr(0, slash));
    const Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string_view digits = (negative || (!whole.empty() && whole[0] == '+')) ? whole.substr(1) : whole;
    const Integer int_part = digits.empty() ? Integer(0) : parse_integer(digits);
    Integer scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational q(int_part * scale + parse_integer(frac), scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BetaSpec BetaSpec::rational(Integer numerator, Integer denominator) {
  BetaSpec spec{RationalBeta{std::move(numerator), std::move(denominator)}, {}};
  spec.label = spec.to_string();
  return spec;
}

BetaSpec BetaSpec::algebraic(std::vector<Integer> coefficients, Rational lo, Rational hi) {
  BetaSpec spec{AlgebraicBeta{std::move(coefficients), std::move(lo), std::move(hi)}, {}};
  spec.label = spec.to_string();
  return spec;
}

std::optional<BetaSpec> BetaSpec::registry(std::string_view name) {
  std::optional<BetaSpec> spec;
  if (name == "golden") {
    spec = algebraic({-1, -1, 1}, Rational(3, 2), Rational(2));
  } else if (name == "tribonacci") {
    spec = algebraic({-1, -1, -1, 1}, Rational(3, 2), Rational(2));
  } else if (name == "plastic") {
    spec = algebraic({-1, -1, 0, 1}, Rational(5, 4), Rational(3, 2));
  }
  if (spec) spec->label = std::string(name);
  return spec;
}

BetaSpec BetaSpec::parse(std::string_view text) {
  if (auto named = registry(text)) return *named;
  if (text.substr(0, 5) == "poly:") {
    const std::string_view body = text.substr(5);
    const auto at = body.find('@');
    if (at == std::string_view::npos) {
      throw std::invalid_argument("algebraic beta needs '@lo,hi': '" + std::string(text) + "'");
    }
    std::vector<Integer> coefficients;
    for (auto part : split(body.substr(0, at), ',')) coefficients.push_back(parse_integer(part));
    std::reverse(coefficients.begin(), coefficients.end());
    const auto bounds = split(body.substr(at + 1), ',');
    if (bounds.size() != 2) {
      throw std::invalid_argument("isolating interval must be 'lo,hi': '" + std::string(text) + "'");
    }
    return algebraic(std::move(coefficients), parse_rational(bounds[0]), parse_rational(bounds[1]));
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos && text.find('.') != std::string_view::npos) {
    const Rational q = parse_rational(text);
    return rational(q.get_num(), q.get_den());
  }
  if (slash == std::string_view::npos) return rational(parse_integer(text), 1);
  return rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

std::string BetaSpec::to_string() const {
  if (const auto* r = std::get_if<RationalBeta>(&kind)) {
    if (r->denominator == 1) return r->numerator.get_str();
    return r->numerator.get_str() + "/" + r->denominator.get_str();
  }
  const auto& a = std::get<AlgebraicBeta>(kind);
  std::ostringstream out;
  out << "poly:";
  for (std::size_t i = a.coefficients.size(); i-- > 0;) {
    out << a.coefficients[i].get_str() << (i == 0 ? "" : ",");
  }
  out << '@' << betadyn::to_string(a.lo) << ',' << betadyn::to_string(a.hi);
  return out.str();
}

// ---------------------------------------------------------------------------

BetaContext::BetaContext(Token, const BetaSpec& spec) : spec_(spec), label_(spec.label) {
  if (label_.empty()) label_ = spec.to_string();

  auto set_rational = [this](Rational value) {
    if (value <= 1) throw std::invalid_argument("beta must be greater than 1, got " + betadyn::to_string(value));
    degree_ = 1;
    rational_value_ = value;
    polynomial_ = {-value, Rational(1)};
    reduction_ = {value};
    inverse_coefficients_ = {Rational(1) / value};
    lo_ = hi_ = value;
    sign_at_lo_ = 0;
    const Integer top = ceil(value) - 1;
    if (top > 255) throw std::invalid_argument("alphabets beyond 256 digits are not supported");
    alphabet_top_ = static_cast<Digit>(top.get_ui());
  };

  if (const auto* r = std::get_if<RationalBeta>(&spec.kind)) {
    if (r->denominator == 0) throw std::invalid_argument("beta has a zero denominator");
    Rational value(r->numerator, r->denominator);
    value.canonicalize();
    set_rational(value);
    return;
  }

  const auto& a = std::get<AlgebraicBeta>(spec.kind);
  poly::Poly p;
  for (const auto& c : a.coefficients) p.emplace_back(c);
  poly::trim(p);
  const int deg = poly::degree(p);
  if (deg < 1) throw std::invalid_argument("minimal polynomial must have degree at least 1");
  if (a.lo >= a.hi) throw std::invalid_argument("isolating interval must satisfy lo < hi");
  if (a.lo <= 1) throw std::invalid_argument("isolating interval must satisfy lo > 1");

  if (deg == 1) {
    const Rational root = -p[0] / p[1];
    if (!(a.lo < root && root < a.hi)) throw std::invalid_argument("no root in the isolating interval");
    set_rational(root);
    return;
  }
  if (p[0] == 0) throw std::invalid_argument("minimal polynomial is divisible by x");
  if (poly::degree(poly::gcd(p, poly::derivative(p))) > 0) {
    throw std::invalid_argument("minimal polynomial is not square-free");
  }
  if (poly::sign_at(p, a.lo) == 0 || poly::sign_at(p, a.hi) == 0) {
    throw std::invalid_argument("isolating interval endpoint is a root");
  }
  const int roots = poly::count_roots(p, a.lo, a.hi);
  if (roots == 0) throw std::invalid_argument("no root in the isolating interval");
  if (roots > 1) throw std::invalid_argument("multiple roots in the isolating interval");

  degree_ = deg;
  polynomial_ = p;
  const Rational lead = p[static_cast<std::size_t>(deg)];
  reduction_.resize(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) reduction_[static_cast<std::size_t>(i)] = -p[static_cast<std::size_t>(i)] / lead;

  // beta^{-1} = (beta^{d-1} - sum_{i=1}^{d-1} r_i beta^{i-1}) / r_0
  inverse_coefficients_.assign(static_cast<std::size_t>(deg), Rational(0));
  inverse_coefficients_[static_cast<std::size_t>(deg - 1)] = 1;
  for (int i = 1; i < deg; ++i) inverse_coefficients_[static_cast<std::size_t>(i - 1)] -= reduction_[static_cast<std::size_t>(i)];
  for (auto& c : inverse_coefficients_) c /= reduction_[0];

  lo_ = a.lo;
  hi_ = a.hi;
  sign_at_lo_ = poly::sign_at(p, lo_);

  // Certify ceil(beta): refine until no integer sits inside the interval.
  unsigned bits = 8;
  while (true) {
    std::lock_guard lock(mutex_);
    refine_locked(bits);
    if (lo_ == hi_) {
      const Integer top = ceil(lo_) - 1;
      if (top > 255) throw std::invalid_argument("alphabets beyond 256 digits are not supported");
      alphabet_top_ = static_cast<Digit>(top.get_ui());
      break;
    }
    const Integer fl = floor(lo_);
    if (fl == floor(hi_) && Rational(fl) != lo_) {
      if (fl > 255) throw std::invalid_argument("alphabets beyond 256 digits are not supported");
      alphabet_top_ = static_cast<Digit>(fl.get_ui());
      break;
    }
    bits *= 2;
  }
}

int BetaContext::poly_sign(const Rational& x) const { return poly::sign_at(polynomial_, x); }

void BetaContext::refine_locked(unsigned bits) const {
  if (lo_ == hi_) return;
  const Rational target = dyadic(-static_cast<long>(bits));
  Rational width = hi_ - lo_;
  while (width > target) {
    Rational mid = (lo_ + hi_) / 2;
    const int s = poly_sign(mid);
    if (s == 0) {
      lo_ = hi_ = mid;
      return;
    }
    if (s == sign_at_lo_) {
      lo_ = std::move(mid);
    } else {
      hi_ = std::move(mid);
    }
    mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), 1);
  }
}

RationalInterval BetaContext::enclosure(unsigned bits) const {
  std::lock_guard lock(mutex_);
  refine_locked(bits);
  return {lo_, hi_};
}

ExactReal BetaContext::zero() const {
  return ExactReal(shared_from_this(), std::vector<Rational>(static_cast<std::size_t>(degree_)));
}

ExactReal BetaContext::one() const { return from_rational(1); }

ExactReal BetaContext::from_rational(const Rational& q) const {
  std::vector<Rational> c(static_cast<std::size_t>(degree_));
  c[0] = q;
  return ExactReal(shared_from_this(), std::move(c));
}

ExactReal BetaContext::beta() const {
  if (degree_ == 1) return from_rational(rational_value_);
  std::vector<Rational> c(static_cast<std::size_t>(degree_));
  c[1] = 1;
  return ExactReal(shared_from_this(), std::move(c));
}

ExactReal BetaContext::beta_inverse() const { return ExactReal(shared_from_this(), inverse_coefficients_); }

ExactReal BetaContext::power(long long e) const {
  ExactReal base = e >= 0 ? beta() : beta_inverse();
  unsigned long long k = e >= 0 ? static_cast<unsigned long long>(e) : static_cast<unsigned long long>(-(e + 1)) + 1;
  ExactReal acc = one();
  while (k > 0) {
    if (k & 1ULL) acc *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return acc;
}

BetaPtr make_beta(const BetaSpec& spec) {
  return std::make_shared<const BetaContext>(BetaContext::Token{}, spec);
}

// ---------------------------------------------------------------------------

ExactReal::ExactReal(BetaPtr context, std::vector<Rational> coefficients)
    : context_(std::move(context)), coefficients_(std::move(coefficients)) {
  if (!context_) throw std::invalid_argument("ExactReal needs a context");
  if (coefficients_.size() != static_cast<std::size_t>(context_->degree())) {
    throw std::invalid_argument("coefficient count does not match the field degree");
  }
}

void ExactReal::check_context(const ExactReal& other) const {
  if (context_ != other.context_) throw ContextMismatch("operands belong to different beta contexts");
}

bool ExactReal::is_zero() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const Rational& c) { return c == 0; });
}

bool ExactReal::is_rational() const {
  return std::all_of(coefficients_.begin() + 1, coefficients_.end(), [](const Rational& c) { return c == 0; });
}

RationalInterval ExactReal::enclose(unsigned bits) const {
  if (is_rational()) return {coefficients_[0], coefficients_[0]};
  const RationalInterval b = context_->enclosure(bits);
  RationalInterval out{coefficients_[0], coefficients_[0]};
  Rational lo_pow = 1;
  Rational hi_pow = 1;
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    lo_pow *= b.lo;
    hi_pow *= b.hi;
    const Rational& c = coefficients_[i];
    if (c > 0) {
      out.lo += c * lo_pow;
      out.hi += c * hi_pow;
    } else if (c < 0) {
      out.lo += c * hi_pow;
      out.hi += c * lo_pow;
    }
  }
  return out;
}

ExactReal& ExactReal::operator+=(const ExactReal& other) {
  check_context(other);
  for (std::size_t i = 0; i < coefficients_.size(); ++i) coefficients_[i] += other.coefficients_[i];
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other) {
  check_context(other);
  for (std::size_t i = 0; i < coefficients_.size(); ++i) coefficients_[i] -= other.coefficients_[i];
  return *this;
}

ExactReal& ExactReal::operator*=(const Rational& scalar) {
  for (auto& c : coefficients_) c *= scalar;
  return *this;
}

ExactReal& ExactReal::operator*=(const ExactReal& other) {
  check_context(other);
  const std::size_t d = coefficients_.size();
  if (d == 1) {
    coefficients_[0] *= other.coefficients_[0];
    return *this;
  }
  std::vector<Rational> product(2 * d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    if (coefficients_[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (other.coefficients_[j] == 0) continue;
      product[i + j] += coefficients_[i] * other.coefficients_[j];
    }
  }
  const auto& red = context_->reduction();
  for (std::size_t k = 2 * d - 2; k >= d; --k) {
    if (product[k] == 0) continue;
    const Rational t = product[k];
    product[k] = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (red[i] != 0) product[k - d + i] += t * red[i];
    }
  }
  product.resize(d);
  coefficients_ = std::move(product);
  return *this;
}

ExactReal ExactReal::operator-() const {
  ExactReal out = *this;
  for (auto& c : out.coefficients_) c = -c;
  return out;
}

ExactReal ExactReal::operator+(const Rational& q) const {
  ExactReal out = *this;
  out.coefficients_[0] += q;
  return out;
}

ExactReal ExactReal::operator-(const Rational& q) const {
  ExactReal out = *this;
  out.coefficients_[0] -= q;
  return out;
}

bool operator==(const ExactReal& a, const ExactReal& b) {
  a.check_context(b);
  return a.coefficients_ == b.coefficients_;
}

std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b) { return certified_compare(a, b); }

std::string ExactReal::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i] == 0) continue;
    if (!first) out << " + ";
    first = false;
    out << '(' << betadyn::to_string(coefficients_[i]) << ')';
    if (i == 1) out << "*b";
    if (i > 1) out << "*b^" << i;
  }
  if (first) out << '0';
  return out.str();
}

ExactReal field_arith(const ExactReal& a, const ExactReal& b, FieldOp op) {
  switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::sub: return a - b;
    case FieldOp::mul: return a * b;
  }
  throw std::invalid_argument("unknown field operation");
}

int certified_sign(const ExactReal& a) {
  if (a.is_rational()) return sgn(a.constant_term());
  // A nonzero element has nonzero value at the simple root, so this loop
  // terminates once the enclosure is narrower than |a|.
  for (unsigned bits = kInitialBits;; bits *= 2) {
    const RationalInterval iv = a.enclose(bits);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
  }
}

std::strong_ordering certified_compare(const ExactReal& a, const ExactReal& b) {
  if (a == b) return std::strong_ordering::equal;
  const int s = certified_sign(a - b);
  return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::strong_ordering certified_compare(const ExactReal& a, const Rational& q) {
  const int s = certified_sign(a - q);
  if (s == 0) return std::strong_ordering::equal;
  return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

Integer certified_floor(const ExactReal& a) {
  if (a.is_rational()) return floor(a.constant_term());
  // Irrational, so floor(lo) == floor(hi) pins floor(a).
  for (unsigned bits = kInitialBits;; bits *= 2) {
    const RationalInterval iv = a.enclose(bits);
    Integer fl = floor(iv.lo);
    if (fl == floor(iv.hi)) return fl;
  }
}

Integer certified_ceil(const ExactReal& a) {
  if (a.is_rational()) return ceil(a.constant_term());
  return certified_floor(a) + 1;
}

Rational approximate(const ExactReal& a, unsigned bits) {
  if (a.is_rational()) return a.constant_term();
  const Rational tolerance = dyadic(-static_cast<long>(bits) + 1);
  for (unsigned b = bits + kInitialBits;; b *= 2) {
    const RationalInterval iv = a.enclose(b);
    if (iv.width() <= tolerance) return (iv.lo + iv.hi) / 2;
  }
}

}  // namespace betadyn
