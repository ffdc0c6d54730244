// Prints one [PASS]/[FAIL] line per acceptance criterion; exits nonzero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "betadyn/analysis.hpp"
#include "betadyn/errors.hpp"
#include "cli.hpp"

namespace betadyn {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

const std::vector<std::string> kBetas = {"2", "golden", "9/5"};

BetaPtr beta_of(const std::string& text) { return make_beta(BetaSpec::parse(text)); }

Outcome oracle_equivalence() {
  Outcome o;
  std::uint64_t words = 0;
  for (const auto& name : kBetas) {
    const auto ctx = beta_of(name);
    ParryChecker parry(ctx);
    const std::uint64_t radix = ctx->alphabet_top() + 1u;
    std::uint64_t total = 1;
    for (std::size_t n = 1; n <= 12; ++n) {
      total *= radix;
      DigitWord w(n);
      for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = n; i-- > 0; c /= radix) w[i] = static_cast<Digit>(c % radix);
        ++words;
        o.require(parry.admissible(w) == follower_value(ctx, w).has_value(), name + " disagrees on " + format_digits(w));
      }
    }
  }
  o.require(words < 2'000'000, "word count over 2e6");
  if (o.pass) o.detail = std::to_string(words) + " words";
  return o;
}

Outcome partition_exactness() {
  Outcome o;
  for (const auto& name : kBetas) {
    const auto ctx = beta_of(name);
    for (std::size_t n = 1; n <= 10; ++n) {
      ExactReal left = ctx->zero();
      for (const auto& w : enumerate_words(ctx, n)) {
        const Cylinder c = cylinder(ctx, w.word);
        o.require(c.left == left, name + " gap before " + format_digits(w.word));
        left = c.left + c.length;
      }
      o.require(left == ctx->one(), name + " total != 1 at n=" + std::to_string(n));
    }
  }
  return o;
}

Outcome counting_bounds() {
  Outcome o;
  for (const auto& name : kBetas) {
    const auto ctx = beta_of(name);
    for (std::size_t n = 1; n <= 14; ++n) {
      o.require(census(ctx, n).bounds_ok(), name + " bound fails at n=" + std::to_string(n));
    }
  }
  const auto g = beta_of("golden");
  o.require(census(g, 3).count == 5 && census(g, 4).count == 8 && census(g, 5).count == 13, "golden counts 5, 8, 13");
  o.require(census(g, 12).count == 377, "golden #Sigma^12 != 377");
  return o;
}

Outcome pigeonhole() {
  Outcome o;
  for (const auto& name : kBetas) {
    const auto ctx = beta_of(name);
    for (std::size_t n = 1; n <= 12; ++n) {
      const CensusRecord rec = census(ctx, n);
      o.require(rec.pigeonhole_ok, name + " window without full cylinder at n=" + std::to_string(n));
      o.require(rec.full_count >= rec.count / (n + 1), name + " full count below floor at n=" + std::to_string(n));
    }
  }
  return o;
}

Outcome concatenation_laws() {
  Outcome o;
  const auto g = beta_of("golden");
  std::vector<std::vector<AdmissibleWord>> by_length(9);
  for (std::size_t n = 1; n <= 8; ++n) by_length[n] = enumerate_words(g, n);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& w : by_length[n]) {
      if (w.follower != g->one()) continue;
      const ExactReal lw = cylinder(g, w.word).length;
      for (std::size_t m = 1; m <= 6; ++m) {
        for (const auto& v : by_length[m]) {
          DigitWord wv = w.word;
          wv.insert(wv.end(), v.word.begin(), v.word.end());
          if (!follower_value(g, wv)) {
            o.require(false, "full*admissible inadmissible: " + format_digits(wv));
            continue;
          }
          o.require(cylinder(g, wv).length == lw * cylinder(g, v.word).length, "length not multiplicative: " + format_digits(wv));
        }
      }
    }
  }
  for (const auto& name : kBetas) {
    const auto ctx = beta_of(name);
    UnitExpansion unit(ctx);
    for (std::size_t n = 1; n <= 8; ++n) {
      for (const auto& w : enumerate_words(ctx, n)) {
        if (w.follower == ctx->one()) {
          for (std::size_t l = 1; l <= 8; ++l) {
            DigitWord padded = w.word;
            padded.resize(n + l, 0);
            o.require(is_full(ctx, padded), name + " zero padding breaks fullness: " + format_digits(padded));
          }
        }
        DigitWord padded = w.word;
        padded.resize(n + unit.gamma(n) + 1, 0);
        o.require(is_full(ctx, padded), name + " Gamma padding not full: " + format_digits(padded));
      }
    }
  }
  return o;
}

Outcome ep_construction() {
  Outcome o;
  const auto g = beta_of("golden");
  auto s = std::make_shared<const EpSchedule>(build_ep_schedule(g, 3, Phi::sqrt(), 2));
  o.require(s->level(1).n == 55, "n_1 != 55");
  o.require(s->level(1).d == 4, "d_1 != 4");
  o.require(s->level(2).n == 12100, "n_2 != 12100");
  o.require(s->level(2).tau == 3011, "tau_2 != 3011");
  const EpPointStream stream = ep_stream(s, 42);
  const DigitWord digits = stream.materialize(12100);
  const auto r = follower_value(g, digits);
  o.require(r.has_value(), "prefix to n_2 inadmissible");
  o.require(r && *r == g->one(), "prefix to n_2 not full");
  const std::uint64_t r1 = run_length(digits, 55);
  const std::uint64_t r2 = run_length(digits, 12100);
  o.require(r1 == 54, "r_{n_1} != 54");
  o.require(r2 < 110, "r_{n_2} >= 110");
  const auto sym = symbolic_runlengths(*stream.plan(), {Integer(55), Integer(12100)});
  o.require(sym.at(55).exact() && sym.at(55).longest_lo == r1, "symbolic r_{n_1} differs");
  o.require(sym.at(12100).exact() && sym.at(12100).longest_lo == r2, "symbolic r_{n_2} differs");
  o.require(verify_ep_checkpoints(stream, 1).all_pass(), "checkpoint report fails");
  if (o.pass) o.detail = "r_55 = 54, r_12100 = " + std::to_string(r2);
  return o;
}

Outcome mass_distribution() {
  Outcome o;
  const auto g = beta_of("golden");
  auto s = std::make_shared<const EpSchedule>(build_ep_schedule(g, 3, Phi::sqrt(), 2));
  const MassAssignment mass(s);
  const DigitWord digits = ep_stream(s, 42).materialize(12100);
  const Mass m1 = mass.of_prefix(std::span(digits).first(55));
  const Mass m2 = mass.of_prefix(digits);
  o.require(m1.is_one(), "mu(I_{n_1}) != 1");
  const Integer a1 = *s->a(1);
  o.require(same_value(m2, Mass{1, PowerProduct::power(a1, 3011)}), "mu(I_{n_2}) != a_1^-3011");
  // Level 1: D_1 is a single cylinder carrying the whole mass.
  o.require(mass.level_mass(1).is_one(), "level-1 sibling sum != 1");
  o.require(!mass.check_conservation(digits, 55, 12100).has_value(), "level-2 sibling sums differ from parent");
  const Enclosure c = cover_exponent(*s, 2);
  o.require(c.lo >= 0 && c.hi <= 1, "cover exponent outside [0, 1]");
  o.require(c.width() < Rational(1, 1000000), "cover enclosure too wide");
  if (o.pass) o.detail = "cover exponent ~ " + std::to_string(c.approx());
  return o;
}

Outcome u_construction() {
  Outcome o;
  const auto g = beta_of("golden");
  const DigitWord prefix{1, 0, 1};
  auto s = std::make_shared<const USchedule>(build_u_schedule(g, prefix, Phi::sqrt()));
  const UPointStream stream = u_stream(s);
  const std::size_t k = prefix.size();
  const std::uint64_t cap = std::uint64_t{1} << 22;
  const DigitWord digits = stream.materialize(std::min<Integer>(stream.plan()->length(), cap).get_ui());

  o.require(std::equal(prefix.begin(), prefix.end(), digits.begin()), "stream does not begin with the prefix");
  const std::uint64_t nk = s->n[k].get_ui();
  for (std::uint64_t i = k; i < nk; ++i) o.require(digits[i] == 0, "nonzero digit before n_k");

  // Blocks rebuilt from n and h alone.
  for (unsigned i = 1; i <= 2 * k; ++i) {
    const Integer start = s->n[k + i - 1];
    const Integer delta = s->n[k + i] - start;
    const OmegaBlock& b = s->omega[i - 1];
    o.require(b.length == delta && stream.plan()->boundary(static_cast<unsigned>(k + i)) == s->n[k + i],
              "block " + std::to_string(i) + " length");
    const Integer reps = delta / s->h;
    if (i % 2 == 0) o.require(b.repetitions == reps, "even block repetitions");
    if (start >= digits.size()) continue;
    const std::uint64_t first = start.get_ui();
    const std::uint64_t end = std::min<Integer>(s->n[k + i], digits.size()).get_ui();
    const std::uint64_t spacer_end = i % 2 == 1 ? first + 1 : std::min<Integer>(start + reps * s->h, end).get_ui();
    bool ok = true;
    for (std::uint64_t pos = first; pos < end; ++pos) {
      const bool one = pos < spacer_end && (pos - first) % s->h == 0;
      ok = ok && digits[pos] == (one ? 1 : 0);
    }
    o.require(ok, "omega_" + std::to_string(i) + " digit mismatch");
  }
  o.require(follower_value(g, digits).has_value(), "materialized prefix inadmissible");

  const CheckpointReport report = verify_u_checkpoints(stream, 1);
  for (const auto& row : report.rows) {
    std::ostringstream msg;
    msg << "r_{n_" << row.k << "} " << row.relation << " bound fails";
    if (row.r_lo == row.r_hi && Rational(row.r_lo + 1) == row.bound) {
      msg << ": r_{n_" << row.k << "} = n_" << row.k << " - n_" << row.k - 1
          << " - 1, since the odd block (1, 0^(gap-1)) holds one zero fewer than the gap";
    } else {
      msg << ": r = " << row.r_string() << ", bound = " << to_string(row.bound);
    }
    o.require(row.pass, msg.str());
  }
  return o;
}

Outcome run_length_law_two() {
  Outcome o;
  const McReport r = mc_law(beta_of("2"), 1'000'000, 100, 7, McMode::direct_bits);
  for (const auto& row : r.rows) {
    o.require(row.ratio && row.ratio->lo >= Rational(7, 10) && row.ratio->hi <= Rational(3, 2),
              "sample " + std::to_string(row.index) + " ratio outside [0.7, 1.5]");
  }
  o.require(r.mean && r.mean->lo >= Rational(9, 10) && r.mean->hi <= Rational(115, 100), "mean outside [0.9, 1.15]");
  if (r.mean) o.detail += (o.detail.empty() ? "" : "; ") + std::string("mean ~ ") + std::to_string(r.mean->approx());
  return o;
}

Outcome run_length_law_golden() {
  Outcome o;
  const McReport r = mc_law(beta_of("golden"), 10'000, 100, 0, McMode::exact);
  o.require(r.mean && r.mean->lo >= Rational(85, 100) && r.mean->hi <= Rational(6, 5), "mean outside [0.85, 1.2]");
  o.require(r.redraws == 0 && r.uncertified == 0, "some expansions needed a redraw");
  for (const auto& row : r.rows) o.require(row.restarts <= 1, "more than one restart");
  if (r.mean) {
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("mean ~ ") + std::to_string(r.mean->approx()) +
                ", restarts " + std::to_string(r.restarts);
  }
  return o;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// Runs the command and returns its exit code, standard output and every file
// it wrote under `dir`.
std::string capture(std::vector<std::string> args, const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  std::string all = std::to_string(code) + "\n" + out.str();
  if (std::filesystem::exists(dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) all += "\n" + std::filesystem::relative(f, dir).string() + "\n" + slurp(f);
  }
  return all;
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "betadyn_acceptance";
  const auto schedule_dir = std::filesystem::temp_directory_path() / "betadyn_acceptance_schedule";
  std::filesystem::remove_all(schedule_dir);
  {
    std::ostringstream out, err;
    cli::run({"construct", "ep", "--beta", "golden", "--p", "3", "--levels", "3", "--max-digits", "1", "--out-dir",
              schedule_dir.string()},
             out, err);
  }
  const std::string schedule = (schedule_dir / "schedule.json").string();
  const std::vector<std::vector<std::string>> commands = {
      {"expand", "--beta", "golden", "--x", "2/7", "--digits", "200"},
      {"--format", "json", "expand", "--beta", "9/5", "--x", "1", "--digits", "50"},
      {"census", "--beta", "9/5", "--n", "12"},
      {"--format", "json", "census", "--beta", "golden", "--n", "10", "--full-only"},
      {"construct", "ep", "--beta", "golden", "--p", "3", "--phi", "sqrt", "--levels", "2", "--seed", "42", "--out-dir",
       dir.string()},
      {"--format", "json", "construct", "u", "--beta", "golden", "--prefix", "1,0,1", "--max-digits", "300000",
       "--out-dir", dir.string()},
      {"construct", "ep", "--beta", "golden", "--phi", "linear", "--p", "3"},
      {"mc", "--beta", "2", "--n", "100000", "--samples", "20", "--seed", "7", "--mode", "direct-bits"},
      {"--format", "json", "mc", "--beta", "golden", "--n", "1000", "--samples", "10", "--seed", "5"},
      {"analyze", "--schedule", schedule, "--seed", "42"},
      {"--format", "json", "analyze", "--schedule", schedule, "--k", "2"},
  };
  for (const auto& c : commands) {
    std::string joined;
    for (const auto& a : c) joined += a + " ";
    o.require(capture(c, dir) == capture(c, dir), "outputs differ: " + joined);
  }
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(schedule_dir);
  if (o.pass) o.detail = std::to_string(commands.size()) + " commands";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 when no runtime bound applies
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace betadyn

int main() {
  using namespace betadyn;
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence (Parry vs follower, length <= 12)", 60, oracle_equivalence},
      {2, "partition exactness (n <= 10)", 0, partition_exactness},
      {3, "counting bounds (n <= 14, golden Fibonacci)", 0, counting_bounds},
      {4, "full-cylinder pigeonhole (n <= 12)", 0, pigeonhole},
      {5, "concatenation laws", 0, concatenation_laws},
      {6, "E_p construction (golden, p = 3, sqrt, seed 42)", 10, ep_construction},
      {7, "mass distribution", 0, mass_distribution},
      {8, "U construction (golden, prefix 1,0,1, sqrt)", 0, u_construction},
      {9, "run-length law, beta = 2, direct bits", 60, run_length_law_two},
      {10, "run-length law, golden, exact", 300, run_length_law_golden},
      {11, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0) o.require(seconds < c.limit_seconds, "over the time limit");
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << " (" << seconds << " s";
    if (c.limit_seconds > 0) line << " / limit " << c.limit_seconds << " s";
    line << ")";
    if (!o.detail.empty()) line << ": " << o.detail;
    std::cout << line.str() << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
