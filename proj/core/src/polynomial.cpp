#include "polynomial.hpp"

#include <stdexcept>

namespace betadyn::poly {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

mpq_class eval(const Poly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int sign_at(const Poly& p, const mpq_class& x) { return sgn(eval(p, x)); }

Poly derivative(const Poly& p) {
  Poly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<unsigned long>(i));
  trim(out);
  return out;
}

Poly remainder(Poly a, const Poly& b) {
  const int db = degree(b);
  if (db < 0) throw std::domain_error("polynomial division by zero");
  trim(a);
  while (degree(a) >= db) {
    const int da = degree(a);
    const mpq_class factor = a[static_cast<std::size_t>(da)] / b[static_cast<std::size_t>(db)];
    const int shift = da - db;
    for (int i = 0; i <= db; ++i) {
      a[static_cast<std::size_t>(i + shift)] -= factor * b[static_cast<std::size_t>(i)];
    }
    a[static_cast<std::size_t>(da)] = 0;
    trim(a);
  }
  return a;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (degree(b) >= 0) {
    Poly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, derivative(p)};
  trim(chain[0]);
  while (degree(chain.back()) > 0) {
    Poly r = remainder(chain[chain.size() - 2], chain.back());
    if (degree(r) < 0) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

int sign_variations(const std::vector<Poly>& chain, const mpq_class& x) {
  int count = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = sign_at(q, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int count_roots(const Poly& p, const mpq_class& lo, const mpq_class& hi) {
  const auto chain = sturm_chain(p);
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

}  // namespace betadyn::poly
