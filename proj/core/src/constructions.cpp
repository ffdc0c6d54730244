#include "betadyn/constructions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "betadyn/errors.hpp"

namespace betadyn {

namespace {

unsigned bit_length(const Integer& n) { return static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2)); }

Integer integer_of(std::uint64_t v) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

// Smallest n >= start with pred(n), assuming pred is monotone from false to
// true. nullopt once the candidates outgrow max_bits.
std::optional<Integer> first_true(const Integer& start, const std::function<bool(const Integer&)>& pred,
                                  unsigned max_bits) {
  if (bit_length(start) > max_bits) return std::nullopt;
  if (pred(start)) return start;
  Integer lo = start;  // pred(lo) is false
  Integer step = 1;
  Integer hi = start + step;
  while (!pred(hi)) {
    lo = hi;
    step *= 2;
    hi = start + step;
    if (bit_length(hi) > max_bits) return std::nullopt;
  }
  while (hi - lo > 1) {
    const Integer mid = (lo + hi) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

bool phi_at_least(const Phi& phi, const Integer& n, const Rational& q) { return phi.compare(n, q) >= 0; }
bool phi_at_most(const Phi& phi, const Integer& n, const Rational& q) { return phi.compare(n, q) <= 0; }

std::string describe(const char* condition, std::size_t k) {
  return std::string(condition) + " at level " + std::to_string(k);
}

// Scans candidates from `from` (table keys for a table phi) for the first n
// passing `check`, which returns the violated condition or an empty string.
Integer scan(const Phi& phi, const Integer& from, const SearchLimits& limits,
             const std::function<std::string(const Integer&)>& check) {
  std::string last_failure = "no candidate";
  if (phi.family() == Phi::Family::table) {
    const auto& table = phi.table_values();
    for (auto it = table.lower_bound(from); it != table.end(); ++it) {
      last_failure = check(it->first);
      if (last_failure.empty()) return it->first;
    }
    throw Infeasible("no phi table entry satisfies the schedule conditions (last failure: " + last_failure + ")");
  }
  Integer n = from;
  for (std::uint64_t step = 0; step < limits.max_scan; ++step, ++n) {
    if (bit_length(n) > limits.max_bits) break;
    last_failure = check(n);
    if (last_failure.empty()) return n;
  }
  throw Infeasible("schedule search exhausted its bound (last failure: " + last_failure + ")");
}

Integer start_of(const Phi& phi, const Integer& candidate) {
  const Integer lo = phi.domain_start();
  return candidate < lo ? lo : candidate;
}

// Monotone pre-search to the first n >= from with phi(n) >= target and
// n >= c phi(n); the exact conditions are rechecked by `scan` afterwards.
Integer presearch(const Phi& phi, Integer from, const Rational& target, unsigned long c, const SearchLimits& limits,
                  std::size_t level) {
  if (phi.family() == Phi::Family::table) return from;
  if (target > 0) {
    auto n = first_true(from, [&](const Integer& m) { return phi_at_least(phi, m, target); }, limits.max_bits);
    if (!n) throw Infeasible(describe("phi(n) >= target unreachable within the bit bound", level));
    from = *n;
  }
  if (c > 0 && phi.ratio_nondecreasing()) {
    auto n = first_true(
        from, [&](const Integer& m) { return phi_at_most(phi, m, Rational(m) / static_cast<unsigned long>(c)); },
        limits.max_bits);
    if (!n) throw Infeasible(describe("n >= k*phi(n) unreachable within the bit bound", level));
    from = *n;
  }
  return from;
}

unsigned long checked_floor_ln(const Integer& n) {
  const Integer d = floor_ln(n);
  return d.get_ui();
}

}  // namespace

PowerProduct PowerProduct::power(const Integer& base, const Integer& exponent) {
  if (base < 1) throw std::invalid_argument("power product bases must be positive");
  if (exponent < 0) throw std::invalid_argument("power product exponents must be nonnegative");
  PowerProduct out;
  if (base != 1 && exponent != 0) out.factors_.emplace_back(base, exponent);
  return out;
}

PowerProduct& PowerProduct::operator*=(const PowerProduct& other) {
  std::map<Integer, Integer> merged;
  for (const auto& [b, e] : factors_) merged[b] += e;
  for (const auto& [b, e] : other.factors_) merged[b] += e;
  factors_.assign(merged.begin(), merged.end());
  return *this;
}

Integer PowerProduct::decimal_digits_bound() const {
  Integer digits = 1;
  for (const auto& [b, e] : factors_) digits += e * static_cast<unsigned long>(mpz_sizeinbase(b.get_mpz_t(), 10));
  return digits;
}

std::optional<Integer> PowerProduct::value(std::size_t max_digits) const {
  if (decimal_digits_bound() > integer_of(max_digits)) return std::nullopt;
  Integer out = 1;
  for (const auto& [b, e] : factors_) {
    Integer p;
    mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), e.get_ui());
    out *= p;
  }
  return out;
}

Enclosure PowerProduct::ln(unsigned bits) const {
  Enclosure out = Enclosure::point(0);
  for (const auto& [b, e] : factors_) {
    out = out + Rational(e) * ln_enclosure(Rational(b), bits + bit_length(e));
  }
  return out;
}

std::string PowerProduct::to_string(std::size_t max_digits) const {
  if (auto v = value(max_digits)) return v->get_str();
  std::string out;
  for (const auto& [b, e] : factors_) {
    if (!out.empty()) out += '*';
    out += b.get_str() + "^" + e.get_str();
  }
  return out;
}

std::shared_ptr<const WordSet> enumerate_M(const BetaPtr& context, std::size_t d, std::uint64_t budget) {
  // The walk visits (1, 0^(h-1)) followed by every admissible word of length
  // d - h, at least beta^(d-h) words; skip it when that already exceeds the budget.
  const unsigned h = find_h(context);
  if (d > h) {
    const Rational visits_ln = Rational(static_cast<unsigned long>(d - h)) * ln_beta(*context, 64).lo;
    if (visits_ln > ln_enclosure(Rational(Integer(std::to_string(budget))), 64).hi) {
      throw BudgetExceeded("M_" + std::to_string(d) + " has more than " + std::to_string(budget) + " candidate words");
    }
  }
  std::vector<DigitWord> words;
  const ExactReal one = context->one();
  for_each_admissible(
      context, d, budget,
      [&](std::span<const Digit> w, const ExactReal& r) {
        if (r == one) words.emplace_back(w.begin(), w.end());
      },
      Digit{1});
  return std::make_shared<const WordSet>(d, std::move(words));
}

std::optional<Integer> EpSchedule::a(std::size_t k) const {
  const auto& m = level(k).M;
  if (!m) return std::nullopt;
  return integer_of(m->size());
}

PowerProduct EpSchedule::g(std::size_t k) const {
  if (k == 1) return PowerProduct{};
  const auto prev = a(k - 1);
  if (!prev) throw BudgetExceeded("a_" + std::to_string(k - 1) + " is beyond the enumeration budget");
  return PowerProduct::power(*prev, level(k).tau);
}

PowerProduct EpSchedule::b(std::size_t k) const {
  PowerProduct out;
  for (std::size_t i = 1; i <= k; ++i) out *= g(i);
  return out;
}

Rational EpSchedule::p_k(std::size_t k) const {
  if (k == 0 || k > size()) throw std::out_of_range("p_k index out of range");
  const std::size_t j = k / 2;
  Rational odd_sum = 0;
  for (std::size_t i = 1; i <= j; ++i) odd_sum += Rational(level(2 * i - 1).n);
  Integer d_sum = 0;
  const std::size_t d_terms = (k % 2 == 0) ? 2 * j - 1 : 2 * j;
  for (std::size_t i = 1; i <= d_terms; ++i) d_sum += level(i).d;
  const Rational pp(p);
  if (k % 2 == 0) return Rational(level(k).n) - odd_sum / pp - Rational(d_sum);
  return Rational(p - 1, p) * Rational(level(k).n) - odd_sum / pp - Rational(d_sum);
}

namespace {

void fill_level(EpSchedule& s, std::size_t k) {
  EpLevel& lv = s.levels[k - 1];
  lv.d = checked_floor_ln(lv.n);
  if (k == 1) {
    lv.tau = 0;
    lv.tail = lv.n - 1;
    return;
  }
  const EpLevel& prev = s.levels[k - 2];
  const Integer gap = lv.n - prev.n;
  if (k % 2 == 0) {
    lv.tau = gap / prev.d;
  } else {
    lv.tau = floor((Rational(s.p - 1, s.p) * Rational(lv.n) - Rational(prev.n)) / Rational(prev.d));
  }
  lv.tail = gap - lv.tau * prev.d;
}

// Empty when level k of `s` (with n set) satisfies every condition.
std::string level_violation(const EpSchedule& s, std::size_t k) {
  const EpLevel& lv = s.levels[k - 1];
  if (k == 1) {
    if (lv.n < ceil_exp(s.h + 1)) return "n_1 >= ceil(e^(h+1))";
    if (s.phi.compare(lv.n, Rational(lv.n)) > 0) return "phi(n_1) <= n_1";
    return {};
  }
  const EpLevel& prev = s.levels[k - 2];
  if (lv.n <= prev.n) return describe("n_k > n_{k-1}", k);
  if (s.phi.compare(lv.n, Rational(prev.n * static_cast<unsigned long>(k))) < 0) {
    return describe("phi(n_k) >= k*n_{k-1}", k);
  }
  if (s.phi.compare(lv.n, Rational(lv.n)) > 0) return describe("phi(n_k) <= n_k", k);
  if (s.phi.compare(lv.n, Rational(lv.n) / static_cast<unsigned long>(k)) > 0) return describe("n_k >= k*phi(n_k)", k);
  if (lv.d <= s.h) return describe("d_k > h", k);
  if (lv.tau < 1) return describe("tau_k >= 1", k);
  if (lv.tail < 0) return describe("zero tail >= 0", k);
  if (k % 2 == 1 && lv.tail * s.p <= lv.n) return describe("p*tail > n_k", k);
  return {};
}

}  // namespace

EpSchedule build_ep_schedule(const BetaPtr& context, unsigned p, const Phi& phi, std::size_t levels,
                             const SearchLimits& limits) {
  if (p < 2) throw std::invalid_argument("p must be at least 2");
  if (levels < 1) throw std::invalid_argument("levels must be at least 1");
  EpSchedule s;
  s.context = context;
  s.p = p;
  s.phi = phi;
  s.h = find_h(context);
  s.levels.resize(levels);

  for (std::size_t k = 1; k <= levels; ++k) {
    const auto check = [&](const Integer& n) {
      s.levels[k - 1].n = n;
      fill_level(s, k);
      return level_violation(s, k);
    };
    Integer from;
    if (k == 1) {
      from = start_of(phi, ceil_exp(s.h + 1));
    } else {
      const Integer& prev = s.levels[k - 2].n;
      from = presearch(phi, start_of(phi, prev + 1), Rational(prev * static_cast<unsigned long>(k)),
                       static_cast<unsigned long>(k), limits, k);
    }
    const Integer n = scan(phi, from, limits, check);
    s.levels[k - 1].n = n;
    fill_level(s, k);
  }

  for (std::size_t k = 1; k <= levels; ++k) {
    try {
      s.levels[k - 1].M = enumerate_M(context, s.levels[k - 1].d, limits.enumeration_budget);
    } catch (const BudgetExceeded&) {
      // Words of M_{d_k} are drawn only at level k+1.
      if (k < levels) throw;
    }
  }
  return s;
}

void validate(const EpSchedule& s) {
  if (s.p < 2) throw Infeasible("p >= 2");
  if (s.levels.empty()) throw Infeasible("schedule has no levels");
  if (s.h != find_h(s.context)) throw Infeasible("h does not match beta");
  EpSchedule copy = s;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    fill_level(copy, k);
    const EpLevel& want = copy.level(k);
    const EpLevel& got = s.level(k);
    if (want.d != got.d || want.tau != got.tau || want.tail != got.tail) {
      throw Infeasible(describe("d, tau and tail must follow from n", k));
    }
    if (auto v = level_violation(s, k); !v.empty()) throw Infeasible(v);
    if (k < s.size() && !got.M) throw Infeasible(describe("M_{d_k} must be enumerated below the last level", k));
  }
}

namespace {

std::shared_ptr<const BlockPlan> make_ep_plan(const EpSchedule& s, std::uint64_t seed) {
  auto plan = std::make_shared<BlockPlan>();
  const EpLevel& first = s.level(1);
  plan->append(Literal{DigitWord{1}});
  plan->append(ZeroRun{first.n - 1});
  plan->mark(1);
  for (std::size_t k = 2; k <= s.size(); ++k) {
    const EpLevel& lv = s.level(k);
    plan->append(Draws{DrawSequence(s.level(k - 1).M, seed, static_cast<unsigned>(k), lv.tau)});
    plan->append(ZeroRun{lv.tail});
    plan->mark(static_cast<unsigned>(k));
  }
  return plan;
}

DigitWord materialize_plan(const std::shared_ptr<const BlockPlan>& plan, std::uint64_t length) {
  if (integer_of(length) > plan->length()) {
    throw Unreachable("requested " + std::to_string(length) + " digits from a plan of length " +
                      plan->length().get_str());
  }
  DigitWord out(length);
  PlanCursor cursor(plan);
  cursor.read(out);
  return out;
}

std::optional<Enclosure> ratio_to_phi(const Phi& phi, const Integer& n, const Integer& r_lo, const Integer& r_hi) {
  if (n < phi.domain_start()) return std::nullopt;
  try {
    const Enclosure f = phi.enclose(n, 64);
    if (f.lo <= 0) return std::nullopt;
    return Enclosure{Rational(r_lo) / f.hi, Rational(r_hi) / f.lo};
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

}  // namespace

EpPointStream::EpPointStream(std::shared_ptr<const EpSchedule> schedule, std::uint64_t seed)
    : schedule_(std::move(schedule)), seed_(seed), plan_(make_ep_plan(*schedule_, seed)) {}

DigitWord EpPointStream::materialize(std::uint64_t length) const { return materialize_plan(plan_, length); }

EpPointStream ep_stream(std::shared_ptr<const EpSchedule> schedule, std::uint64_t seed) {
  return EpPointStream(std::move(schedule), seed);
}

std::string CheckpointRow::r_string() const {
  if (r_lo == r_hi) return r_lo.get_str();
  return "[" + r_lo.get_str() + ", " + r_hi.get_str() + "]";
}

bool CheckpointReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckpointRow& r) { return r.pass; });
}

CheckpointReport verify_ep_checkpoints(const EpPointStream& stream, std::size_t j_max) {
  CheckpointReport report;
  if (j_max == 0) return report;
  const EpSchedule& s = stream.schedule();
  if (2 * j_max - 1 > s.size()) {
    throw Unreachable("checkpoint level " + std::to_string(2 * j_max - 1) + " exceeds the " +
                      std::to_string(s.size()) + " scheduled levels");
  }
  const std::size_t top = std::min(2 * j_max, s.size());
  std::vector<Integer> points;
  for (std::size_t k = 1; k <= top; ++k) points.push_back(s.level(k).n);
  const auto runs = symbolic_runlengths(*stream.plan(), points);

  for (std::size_t k = 1; k <= top; ++k) {
    const Integer& n = s.level(k).n;
    const RunSummary& r = runs.at(n);
    CheckpointRow row;
    row.k = static_cast<unsigned>(k);
    row.n = n;
    row.r_lo = r.longest_lo;
    row.r_hi = r.longest_hi;
    if (k % 2 == 1) {
      row.relation = ">";
      row.bound = Rational(n) / s.p;
      row.pass = Rational(row.r_lo) > row.bound;
    } else {
      row.relation = "<";
      row.bound = Rational(2 * s.level(k - 1).n);
      row.pass = Rational(row.r_hi) < row.bound;
    }
    row.ratio = ratio_to_phi(s.phi, n, row.r_lo, row.r_hi);
    report.rows.push_back(std::move(row));
  }
  return report;
}

USchedule build_u_schedule(const BetaPtr& context, const DigitWord& prefix, const Phi& phi,
                           const SearchLimits& limits, std::size_t stages) {
  if (prefix.empty()) throw std::invalid_argument("the prefix must have length at least 1");
  if (!follower_value(context, prefix)) throw InadmissibleWord("prefix " + format_digits(prefix) + " is not admissible");
  if (stages == 0) throw std::invalid_argument("stages must be at least 1");
  USchedule s;
  s.context = context;
  s.phi = phi;
  s.h = find_h(context);
  s.prefix = prefix;
  const std::size_t k = prefix.size();
  const std::size_t top = 3 * k;

  UnitExpansion unit(context);
  s.gamma.reserve(top);
  for (std::size_t i = 1; i <= top; ++i) s.gamma.push_back(unit.gamma(i));

  s.n.push_back(0);
  for (std::size_t i = 1; i <= top; ++i) {
    const Integer& prev = s.n.back();
    const Integer gap = std::max<Integer>(2 * s.h, integer_of(i + s.gamma[i - 1]));
    const Rational target(prev * static_cast<unsigned long>(i - 1));
    const auto check = [&](const Integer& n) -> std::string {
      if (n - prev <= gap) return describe("n_i - n_{i-1} > max{2h, i + Gamma_i}", i);
      if (phi.compare(n, target) < 0) return describe("phi(n_i) >= (i-1)*n_{i-1}", i);
      if (phi.compare(n, Rational(n) / static_cast<unsigned long>(i)) > 0) return describe("n_i >= i*phi(n_i)", i);
      return {};
    };
    const Integer from = presearch(phi, start_of(phi, prev + gap + 1), target, static_cast<unsigned long>(i), limits, i);
    s.n.push_back(scan(phi, from, limits, check));
  }

  for (std::size_t i = 1; i <= 2 * k; ++i) {
    OmegaBlock block;
    block.index = static_cast<unsigned>(i);
    block.length = s.n[k + i] - s.n[k + i - 1];
    block.odd = i % 2 == 1;
    if (block.odd) {
      block.repetitions = 0;
      block.zeros = block.length - 1;
    } else {
      block.repetitions = block.length / s.h;
      block.zeros = block.length - block.repetitions * s.h;
    }
    s.omega.push_back(std::move(block));
  }

  if (stages > 1) {
    throw Unreachable("stage 2 restarts with k' = n_" + std::to_string(top) + " = " + s.n.back().get_str() +
                      ", whose schedule cannot be represented");
  }
  return s;
}

void validate(const USchedule& s) {
  const std::size_t k = s.k();
  if (k == 0) throw Infeasible("empty prefix");
  if (!follower_value(s.context, s.prefix)) throw Infeasible("prefix is not admissible");
  if (s.h != find_h(s.context)) throw Infeasible("h does not match beta");
  if (s.n.size() != 3 * k + 1 || s.n[0] != 0) throw Infeasible("n must list n_0 = 0 through n_{3k}");
  if (s.gamma.size() != 3 * k) throw Infeasible("Gamma must list Gamma_1 through Gamma_{3k}");
  for (std::size_t i = 1; i <= 3 * k; ++i) {
    const Integer gap = std::max<Integer>(2 * s.h, integer_of(i + s.gamma[i - 1]));
    if (s.n[i] - s.n[i - 1] <= gap) throw Infeasible(describe("n_i - n_{i-1} > max{2h, i + Gamma_i}", i));
    if (s.phi.compare(s.n[i], Rational(s.n[i - 1] * static_cast<unsigned long>(i - 1))) < 0) {
      throw Infeasible(describe("phi(n_i) >= (i-1)*n_{i-1}", i));
    }
    if (s.phi.compare(s.n[i], Rational(s.n[i]) / static_cast<unsigned long>(i)) > 0) {
      throw Infeasible(describe("n_i >= i*phi(n_i)", i));
    }
  }
  if (s.omega.size() != 2 * k) throw Infeasible("there must be 2k omega blocks");
  for (std::size_t i = 1; i <= 2 * k; ++i) {
    const OmegaBlock& b = s.omega[i - 1];
    const Integer len = s.n[k + i] - s.n[k + i - 1];
    const bool ok = b.index == i && b.length == len && b.odd == (i % 2 == 1) &&
                    (b.odd ? (b.repetitions == 0 && b.zeros == len - 1)
                           : (b.repetitions == len / s.h && b.zeros == len - b.repetitions * s.h));
    if (!ok) throw Infeasible(describe("omega block shape", i));
  }
}

namespace {

std::shared_ptr<const BlockPlan> make_u_plan(const USchedule& s) {
  auto plan = std::make_shared<BlockPlan>();
  const std::size_t k = s.k();
  plan->append(Literal{s.prefix});
  plan->append(ZeroRun{s.n[k] - static_cast<unsigned long>(k)});
  plan->mark(static_cast<unsigned>(k));
  DigitWord spacer(s.h, 0);
  spacer[0] = 1;
  for (const OmegaBlock& b : s.omega) {
    if (b.odd) {
      plan->append(Literal{DigitWord{1}});
    } else {
      plan->append(Repeat{spacer, b.repetitions});
    }
    plan->append(ZeroRun{b.zeros});
    plan->mark(static_cast<unsigned>(k + b.index));
  }
  return plan;
}

}  // namespace

UPointStream::UPointStream(std::shared_ptr<const USchedule> schedule)
    : schedule_(std::move(schedule)), plan_(make_u_plan(*schedule_)) {}

DigitWord UPointStream::materialize(std::uint64_t length) const { return materialize_plan(plan_, length); }

UPointStream u_stream(std::shared_ptr<const USchedule> schedule) { return UPointStream(std::move(schedule)); }

CheckpointReport verify_u_checkpoints(const UPointStream& stream, std::size_t stages) {
  CheckpointReport report;
  if (stages == 0) return report;
  const USchedule& s = stream.schedule();
  if (stages > 1) throw Unreachable("only the first stage of the U construction is representable");
  const std::size_t k = s.k();
  const Integer& n_hi = s.n[3 * k - 1];
  const Integer& n_lo = s.n[3 * k - 2];
  const Integer& n_top = s.n[3 * k];
  const Integer delta = n_hi - n_lo;
  const auto runs = symbolic_runlengths(*stream.plan(), {n_hi, n_top});

  CheckpointRow lower;
  lower.k = static_cast<unsigned>(3 * k - 1);
  lower.n = n_hi;
  lower.r_lo = runs.at(n_hi).longest_lo;
  lower.r_hi = runs.at(n_hi).longest_hi;
  lower.relation = ">=";
  lower.bound = Rational(delta);
  lower.pass = Rational(lower.r_lo) >= lower.bound;
  lower.ratio = ratio_to_phi(s.phi, n_hi, lower.r_lo, lower.r_hi);
  report.rows.push_back(std::move(lower));

  CheckpointRow upper;
  upper.k = static_cast<unsigned>(3 * k);
  upper.n = n_top;
  upper.r_lo = runs.at(n_top).longest_lo;
  upper.r_hi = runs.at(n_top).longest_hi;
  upper.relation = "<=";
  upper.bound = Rational(std::max({integer_of(k + s.gamma[k - 1]), Integer(2 * s.h), delta}));
  upper.pass = Rational(upper.r_hi) <= upper.bound;
  upper.ratio = ratio_to_phi(s.phi, n_top, upper.r_lo, upper.r_hi);
  report.rows.push_back(std::move(upper));
  return report;
}

DensityWitness density_witness(const BetaPtr& context, const ExactReal& x, std::size_t l, const Phi& phi,
                               const SearchLimits& limits) {
  if (l == 0) throw std::invalid_argument("l must be at least 1");
  DensityWitness w;
  DigitStream digits(x);
  w.prefix = digits.take(l);
  auto schedule = std::make_shared<const USchedule>(build_u_schedule(context, w.prefix, phi, limits));
  const UPointStream stream(schedule);
  const Integer available = stream.plan()->length();
  const std::uint64_t m = available < integer_of(l + 32) ? available.get_ui() : l + 32;
  const DigitWord y = stream.materialize(m);
  w.generated_digits = m;
  const ExactReal diff = evaluate(context, y) - x;
  const ExactReal radius = context->power(-static_cast<long long>(l));
  w.pass = certified_compare(diff, radius) <= 0 && certified_compare(-diff, radius) <= 0;
  const RationalInterval e = diff.enclose(64);
  w.distance_upper = abs(e.lo) < abs(e.hi) ? Rational(abs(e.hi)) : Rational(abs(e.lo));
  return w;
}

}  // namespace betadyn
