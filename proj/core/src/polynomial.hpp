#pragma once

// Dense univariate polynomials over Q, lowest degree first. Only what the
// isolating-interval validation needs.

#include <vector>

#include <gmpxx.h>

namespace betadyn::poly {

using Poly = std::vector<mpq_class>;

void trim(Poly& p);
int degree(const Poly& p);
mpq_class eval(const Poly& p, const mpq_class& x);
int sign_at(const Poly& p, const mpq_class& x);
Poly derivative(const Poly& p);
Poly remainder(Poly a, const Poly& b);
Poly gcd(Poly a, Poly b);

// Standard Sturm chain p, p', -rem(p, p'), ...
std::vector<Poly> sturm_chain(const Poly& p);
int sign_variations(const std::vector<Poly>& chain, const mpq_class& x);

// Number of distinct real roots in the half-open interval (lo, hi].
int count_roots(const Poly& p, const mpq_class& lo, const mpq_class& hi);

}  // namespace betadyn::poly
