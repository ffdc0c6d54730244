#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>

#include "betadyn/enclosure.hpp"
#include "betadyn/numerics.hpp"

namespace betadyn {

// A monotonically increasing phi: N -> R+.
//
// Comparisons phi(n) <=> q are exact for the algebraic families and decided
// by refining certified enclosures for the transcendental ones; the log
// family falls back to an exact field comparison n^v <=> beta^u on ties.
class Phi {
 public:
  enum class Family { power, log_base_beta, linear_over_log, table };

  static Phi sqrt();
  // n^alpha with 0 < alpha <= 1 (alpha = 1 is the identity).
  static Phi power(const Rational& alpha);
  static Phi log_base_beta(BetaPtr context);
  static Phi linear_over_log();
  // Finite map; keys and values must be strictly increasing together.
  static Phi table(std::map<Integer, Rational> values);

  // "sqrt", "linear", "power:a/b", "log", "linear_over_log",
  // "table:n1=v1,n2=v2,...". The context is needed by "log".
  static Phi parse(std::string_view text, const BetaPtr& context);

  Family family() const { return family_; }
  // Inverse of parse.
  std::string name() const;

  // Smallest n at which phi is defined.
  Integer domain_start() const;

  // phi(n) <=> q. Throws std::out_of_range outside the domain.
  std::strong_ordering compare(const Integer& n, const Rational& q) const;

  Enclosure enclose(const Integer& n, unsigned bits) const;

  // Whether n / phi(n) is nondecreasing on the domain, which makes
  // n >= c * phi(n) an upward-closed condition.
  bool ratio_nondecreasing() const { return family_ != Family::table; }

  const std::map<Integer, Rational>& table_values() const { return table_; }

 private:
  Phi() = default;

  Family family_ = Family::power;
  Rational alpha_{1, 2};
  BetaPtr context_;
  std::map<Integer, Rational> table_;
};

}  // namespace betadyn
