#pragma once

#include <cmath>
#include <random>

#include "betadyn/numerics.hpp"

namespace betadyn::test {

inline BetaPtr beta_of(std::string_view text) { return make_beta(BetaSpec::parse(text)); }
inline BetaPtr two() { return beta_of("2"); }
inline BetaPtr golden() { return beta_of("golden"); }
inline BetaPtr nine_fifths() { return beta_of("9/5"); }

inline double golden_double() { return (1.0 + std::sqrt(5.0)) / 2.0; }

// A field element with small random rational coefficients.
inline ExactReal random_element(const BetaPtr& ctx, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 9);
  std::vector<Rational> c;
  for (int i = 0; i < ctx->degree(); ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    c.push_back(q);
  }
  return ExactReal(ctx, c);
}

// Independent double evaluation of sum c_i beta^i.
inline double as_double(const ExactReal& a, double beta) {
  double v = 0, p = 1;
  for (const auto& c : a.coefficients()) {
    v += c.get_d() * p;
    p *= beta;
  }
  return v;
}

inline std::uint64_t fibonacci(unsigned n) {
  std::uint64_t a = 0, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    const std::uint64_t t = a + b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace betadyn::test
