#pragma once

// Mass distribution on the E_p construction, level counts, cover exponents
// and Monte Carlo checks of the run-length laws.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betadyn/constructions.hpp"
#include "betadyn/enclosure.hpp"

namespace betadyn {

// numerator / denominator with a small numerator and an unevaluated
// denominator.
struct Mass {
  Integer numerator = 1;
  PowerProduct denominator;

  bool is_zero() const { return numerator == 0; }
  bool is_one() const;
  // Exact rational when the denominator has at most `max_digits` digits.
  std::optional<Rational> value(std::size_t max_digits = 100'000) const;
  Enclosure ln(unsigned bits) const;
  std::string to_string() const;
};

// Value equality independent of how the power products are factored.
bool same_value(const Mass& a, const Mass& b);
Mass operator+(const Mass& a, const Mass& b);

// mu on cylinders: mu(I_{n_1}(u)) = 1 and mu(I_{n_{k+1}}) = mu(I_{n_k}) / g_{k+1},
// interpolated inside a level by dividing by a for every drawn word and by
// a / c for a partial word with c completions in M.
class MassAssignment {
 public:
  explicit MassAssignment(std::shared_ptr<const EpSchedule> schedule);

  const EpSchedule& schedule() const { return *schedule_; }

  // mu(I_{n_k}) = 1 / b_k on each cylinder of D_k.
  Mass level_mass(std::size_t k) const;
  // mu(I_n(w)) with n = |w|; zero off the construction. Requires
  // n_1 <= n <= n_L.
  Mass of_prefix(std::span<const Digit> word) const;

  // Checks sum_d mu(w_{<n} d) = mu(w_{<n}) for every n in (from, to],
  // walking along `digits`. Returns the first failing length or nullopt.
  std::optional<std::uint64_t> check_conservation(std::span<const Digit> digits, std::uint64_t from,
                                                  std::uint64_t to) const;

 private:
  Mass evaluate(std::span<const Digit> word, std::uint64_t trusted) const;

  std::shared_ptr<const EpSchedule> schedule_;
};

struct DimensionSample {
  std::uint64_t n = 0;
  Mass mass;
  Enclosure log_ratio;  // log mu(I_n(x)) / log |I_n(x)|
};

// `digits` is a materialized prefix of an E_p point; every n must satisfy
// n_1 <= n <= digits.size().
std::vector<DimensionSample> local_dimension_profile(const MassAssignment& mass, std::span<const Digit> digits,
                                                     const std::vector<std::uint64_t>& points, unsigned bits = 64);

// log b_k / (n_k log beta).
Enclosure cover_exponent(const EpSchedule& schedule, std::size_t k, unsigned bits = 64);

struct CountReport {
  std::size_t k = 0;
  Integer a;
  PowerProduct g;
  PowerProduct b;
  Rational p_k;
  std::size_t m = 0;               // d_k - h
  std::uint64_t sigma_count = 0;   // admissible words of length m
  Integer count_bound;             // floor(sigma_count / (m + 1))
  bool bound_ok = false;           // a_k >= count_bound
  Enclosure beta_bar;              // a_k^(1/d_k)
  Enclosure cover;                 // cover_exponent(k)
  bool cover_in_unit = false;      // certified 0 <= cover <= 1
};

std::vector<CountReport> verify_counts(const EpSchedule& schedule, std::size_t k_max,
                                       std::uint64_t budget = kDefaultEnumerationBudget);

enum class McMode { exact, direct_bits };

std::string to_string(McMode mode);
McMode parse_mc_mode(std::string_view text);

struct McSample {
  std::uint64_t index = 0;
  std::uint64_t run_length = 0;
  std::optional<Enclosure> ratio;  // r_n / log_beta n; undefined for n = 1
  unsigned restarts = 0;
  unsigned redraws = 0;
};

struct McReport {
  std::string beta;
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  McMode mode = McMode::exact;
  std::vector<McSample> rows;
  std::optional<Enclosure> mean;
  std::optional<Enclosure> min;
  std::optional<Enclosure> max;
  std::uint64_t restarts = 0;
  std::uint64_t redraws = 0;
  std::uint64_t uncertified = 0;  // samples that needed more than one restart
};

// Exact mode draws dyadic x = (m+1)/2^P with P = ceil(n log2 beta) + 64 and
// certifies each digit by interval iteration at precision P, restarting once
// at 2P; a sample that still cannot be certified is redrawn. Direct-bits
// mode (beta = 2 only) uses i.i.d. fair bits.
McReport mc_law(const BetaPtr& context, std::uint64_t n, std::uint64_t samples, std::uint64_t seed, McMode mode);

// First n certified digits of the dyadic point (m+1)/2^precision, or nullopt
// if some digit cannot be certified at that precision.
std::optional<DigitWord> interval_digits(const BetaContext& context, const Integer& m, unsigned precision,
                                         std::uint64_t n, unsigned work_precision);

}  // namespace betadyn
