#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "betadyn/analysis.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/serialize.hpp"

namespace betadyn::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;

  bool json() const { return format == "json"; }
};

std::string bool_text(bool v) { return v ? "true" : "false"; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

BetaPtr beta_from(const std::string& text) { return make_beta(BetaSpec::parse(text)); }

// ---------------------------------------------------------------------------

struct ExpandArgs {
  std::string beta;
  std::string x;
  std::size_t digits = 0;
};

int cmd_expand(const Globals& g, const ExpandArgs& a, std::ostream& body) {
  const BetaPtr ctx = beta_from(a.beta);
  const Rational x = parse_rational(a.x);
  if (x < 0 || x > 1) throw std::invalid_argument("x must lie in [0, 1]");
  const ExactReal xr = ctx->from_rational(x);
  DigitStream stream(xr);
  const DigitWord digits = stream.take(a.digits);
  // x - sum_{i<=n} digit_i beta^-i = beta^-n T^n x, with T^n x in [0, 1].
  const ExactReal remainder = xr - evaluate(ctx, digits);
  const ExactReal scale = ctx->power(-static_cast<long long>(a.digits));
  const bool ok = remainder == scale * stream.orbit() && certified_sign(remainder) >= 0 &&
                  certified_compare(remainder, scale) <= 0;

  if (g.json()) {
    Json j;
    j["beta"] = ctx->label();
    j["x"] = to_string(x);
    j["n"] = a.digits;
    j["digits"] = digits;
    j["remainder"] = remainder.to_string();
    j["remainder_ok"] = ok;
    body << j.dump(2) << '\n';
  } else {
    body << "beta,x,n,digits,remainder_ok\n";
    body << csv_quote(ctx->label()) << ',' << to_string(x) << ',' << a.digits << ','
         << csv_quote(format_digits(digits)) << ',' << bool_text(ok) << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct CensusArgs {
  std::string beta;
  std::size_t n = 0;
  bool full_only = false;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

int cmd_census(const Globals& g, const CensusArgs& a, std::ostream& body) {
  const BetaPtr ctx = beta_from(a.beta);
  if (a.n == 0) throw std::invalid_argument("--n must be at least 1");
  bool all_ok = true;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << (a.full_only ? "n,full_count,full_bound,full_bound_ok,pigeonhole_ok\n" : census_csv_header());
  for (std::size_t m = 1; m <= a.n; ++m) {
    const CensusRecord rec = census(ctx, m, a.budget);
    const std::uint64_t full_bound = rec.count / (m + 1);
    const bool full_ok = rec.full_count >= full_bound;
    all_ok = all_ok && rec.all_ok() && full_ok;
    Json r;
    r["n"] = m;
    if (a.full_only) {
      r["full_count"] = rec.full_count;
      r["full_bound"] = full_bound;
      r["full_bound_ok"] = full_ok;
      r["pigeonhole_ok"] = rec.pigeonhole_ok;
      csv << m << ',' << rec.full_count << ',' << full_bound << ',' << bool_text(full_ok) << ','
          << bool_text(rec.pigeonhole_ok) << '\n';
    } else {
      r["count"] = rec.count;
      r["full_count"] = rec.full_count;
      r["lower_bound_ok"] = rec.lower_bound_ok;
      r["upper_bound_ok"] = rec.upper_bound_ok;
      r["pigeonhole_ok"] = rec.pigeonhole_ok;
      csv << census_csv_row(rec);
    }
    rows.push_back(r);
  }
  if (g.json()) {
    Json j;
    j["beta"] = ctx->label();
    j["rows"] = rows;
    body << j.dump(2) << '\n';
  } else {
    body << csv.str();
  }
  return all_ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string beta;
  unsigned p = 2;
  std::string phi = "sqrt";
  std::size_t levels = 2;
  std::size_t stages = 1;
  std::string prefix;
  std::string out_dir;
  std::uint64_t max_digits = std::uint64_t{1} << 20;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

struct StreamCheck {
  std::uint64_t digits = 0;
  bool admissible = true;
  std::vector<std::pair<unsigned, bool>> full_at;  // boundary label, fullness
  std::vector<StreamChunk> chunks;

  bool ok() const {
    return admissible && std::all_of(full_at.begin(), full_at.end(), [](const auto& f) { return f.second; });
  }
};

// Materializes up to max_digits, checking admissibility with the follower
// recursion and fullness at each reached boundary; optionally writes chunks.
StreamCheck check_stream(const BetaPtr& ctx, const std::shared_ptr<const BlockPlan>& plan, std::uint64_t max_digits,
                         const std::string& chunk_dir) {
  StreamCheck check;
  PlanCursor cursor(plan);
  std::vector<Boundary> pending = plan->boundaries();
  std::sort(pending.begin(), pending.end(), [](const Boundary& a, const Boundary& b) { return a.position < b.position; });
  std::size_t next_boundary = 0;
  ExactReal follower = ctx->one();
  DigitWord buffer(kChunkDigits);
  const ExactReal one = ctx->one();
  while (check.digits < max_digits && !cursor.done()) {
    const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(kChunkDigits, max_digits - check.digits));
    const std::size_t got = cursor.read(std::span<Digit>(buffer.data(), want));
    for (std::size_t i = 0; i < got && check.admissible; ++i) {
      auto next = follower_step(follower, buffer[i]);
      if (!next) {
        check.admissible = false;
        break;
      }
      follower = std::move(*next);
      const std::uint64_t pos = check.digits + i + 1;
      while (next_boundary < pending.size() && pending[next_boundary].position <= Integer(std::to_string(pos))) {
        if (pending[next_boundary].position == Integer(std::to_string(pos))) {
          check.full_at.emplace_back(pending[next_boundary].label, follower == one);
        }
        ++next_boundary;
      }
    }
    if (!chunk_dir.empty()) {
      const std::filesystem::path dir(chunk_dir);
      std::filesystem::create_directories(dir);
      StreamChunk chunk{check.chunks.size(), got, fnv1a64(buffer.data(), got)};
      std::ofstream file(dir / chunk_file_name(chunk.index), std::ios::binary);
      file.write(reinterpret_cast<const char*>(buffer.data()), static_cast<std::streamsize>(got));
      if (!file) throw std::ios_base::failure("cannot write " + (dir / chunk_file_name(chunk.index)).string());
      check.chunks.push_back(chunk);
    }
    check.digits += got;
  }
  return check;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::ios_base::failure("cannot write " + path.string());
}

int finish_construct(const Globals& g, const ConstructArgs& a, const BetaPtr& ctx, const std::string& schedule_json,
                     const std::shared_ptr<const BlockPlan>& plan, const CheckpointReport& report, std::ostream& body,
                     std::ostream& err) {
  std::string chunk_dir;
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    chunk_dir = (std::filesystem::path(a.out_dir) / "chunks").string();
  }
  const StreamCheck stream = check_stream(ctx, plan, a.max_digits, chunk_dir);

  const std::string report_text = g.json() ? checkpoints_json(report) : checkpoints_csv(report);
  if (!a.out_dir.empty()) {
    const std::filesystem::path dir(a.out_dir);
    write_file(dir / "schedule.json", schedule_json);
    write_file(dir / (g.json() ? "checkpoints.json" : "checkpoints.csv"), report_text);
    write_file(dir / "manifest.json", manifest_json(ctx->label(), "schedule.json", stream.chunks));
  }

  if (g.json()) {
    Json j;
    j["schedule"] = Json::parse(schedule_json);
    j["checkpoints"] = Json::parse(report_text);
    Json s;
    s["materialized"] = stream.digits;
    s["admissible"] = stream.admissible;
    Json full = Json::array();
    for (const auto& [label, ok] : stream.full_at) full.push_back(Json{{"n_index", label}, {"full", ok}});
    s["full_at_boundaries"] = full;
    j["stream"] = s;
    body << j.dump(2) << '\n';
  } else {
    body << report_text;
  }
  err << "materialized " << stream.digits << " digits; admissible: " << bool_text(stream.admissible)
      << "; full at every reached boundary: " << bool_text(stream.ok()) << '\n';
  return report.all_pass() && stream.ok() ? kOk : kCheckFailed;
}

int cmd_construct_ep(const Globals& g, const ConstructArgs& a, std::ostream& body, std::ostream& err) {
  const BetaPtr ctx = beta_from(a.beta);
  const Phi phi = Phi::parse(a.phi, ctx);
  SearchLimits limits;
  limits.enumeration_budget = a.budget;
  auto schedule = std::make_shared<const EpSchedule>(build_ep_schedule(ctx, a.p, phi, a.levels, limits));
  const EpPointStream stream = ep_stream(schedule, g.seed);
  const CheckpointReport report = verify_ep_checkpoints(stream, (a.levels + 1) / 2);
  return finish_construct(g, a, ctx, to_json(*schedule), stream.plan(), report, body, err);
}

int cmd_construct_u(const Globals& g, const ConstructArgs& a, std::ostream& body, std::ostream& err) {
  const BetaPtr ctx = beta_from(a.beta);
  const Phi phi = Phi::parse(a.phi, ctx);
  const DigitWord prefix = parse_digits(a.prefix);
  check_alphabet(*ctx, prefix);
  auto schedule = std::make_shared<const USchedule>(build_u_schedule(ctx, prefix, phi, SearchLimits{}, a.stages));
  const UPointStream stream = u_stream(schedule);
  const CheckpointReport report = verify_u_checkpoints(stream, a.stages);
  return finish_construct(g, a, ctx, to_json(*schedule), stream.plan(), report, body, err);
}

// ---------------------------------------------------------------------------

struct McArgs {
  std::string beta;
  std::uint64_t n = 0;
  std::uint64_t samples = 100;
  std::string mode = "exact";
  std::optional<double> band_lo;
  std::optional<double> band_hi;
};

Rational rational_of(double v) {
  Rational q(v);
  return q;
}

int cmd_mc(const Globals& g, const McArgs& a, std::ostream& body, std::ostream& err) {
  const BetaPtr ctx = beta_from(a.beta);
  const McMode mode = parse_mc_mode(a.mode);
  const McReport report = mc_law(ctx, a.n, a.samples, g.seed, mode);
  const Rational lo = a.band_lo ? rational_of(*a.band_lo) : (mode == McMode::direct_bits ? Rational(9, 10) : Rational(85, 100));
  const Rational hi = a.band_hi ? rational_of(*a.band_hi) : (mode == McMode::direct_bits ? Rational(115, 100) : Rational(12, 10));
  body << (g.json() ? mc_json(report) : mc_csv(report));
  if (!report.mean) {
    err << "mean ratio undefined (log_beta n = 0)\n";
    return kOk;
  }
  const bool in_band = report.mean->lo >= lo && report.mean->hi <= hi;
  err << "mean ratio " << decimal_enclosure(*report.mean) << (in_band ? " within " : " outside ") << "["
      << to_string(lo) << ", " << to_string(hi) << "]\n";
  return in_band ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string beta;
  std::string schedule;
  std::size_t k = 0;
  std::uint64_t max_digits = std::uint64_t{1} << 22;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

int cmd_analyze(const Globals& g, const AnalyzeArgs& a, std::ostream& body) {
  std::ifstream file(a.schedule, std::ios::binary);
  if (!file) throw std::ios_base::failure("cannot read schedule file '" + a.schedule + "'");
  std::stringstream text;
  text << file.rdbuf();
  SearchLimits limits;
  limits.enumeration_budget = a.budget;
  auto schedule = std::make_shared<const EpSchedule>(ep_schedule_from_json(text.str(), limits));
  if (!a.beta.empty() && beta_from(a.beta)->label() != schedule->context->label()) {
    throw std::invalid_argument("--beta does not match the schedule's beta");
  }
  const std::size_t k = a.k == 0 ? schedule->size() : a.k;
  const std::vector<CountReport> counts = verify_counts(*schedule, k, a.budget);

  // Profile points: every reachable n_j plus three interior points per level.
  std::vector<std::uint64_t> points;
  const Integer cap(std::to_string(a.max_digits));
  for (std::size_t j = 1; j <= k; ++j) {
    const EpLevel& lv = schedule->level(j);
    if (lv.n > cap) break;
    if (j >= 2 && lv.tau >= 4) {
      const EpLevel& prev = schedule->level(j - 1);
      const Integer step = (lv.tau / 4) * prev.d;
      for (unsigned q = 1; q <= 3; ++q) points.push_back(Integer(prev.n + step * q).get_ui());
    }
    points.push_back(lv.n.get_ui());
  }
  std::vector<DimensionSample> profile;
  if (!points.empty()) {
    const EpPointStream stream = ep_stream(schedule, g.seed);
    const DigitWord digits = stream.materialize(*std::max_element(points.begin(), points.end()));
    const MassAssignment mass(schedule);
    profile = local_dimension_profile(mass, digits, points);
  }

  if (g.json()) {
    Json j;
    j["counts"] = Json::parse(counts_json(counts));
    Json rows = Json::array();
    for (const auto& s : profile) {
      Json r;
      r["n"] = s.n;
      r["mass"] = s.mass.to_string();
      r["log_ratio"] = Json::array({to_string(s.log_ratio.lo), to_string(s.log_ratio.hi)});
      rows.push_back(r);
    }
    j["profile"] = rows;
    body << j.dump(2) << '\n';
  } else {
    body << counts_csv(counts) << '\n' << profile_csv(profile);
  }
  const bool ok = std::all_of(counts.begin(), counts.end(),
                              [](const CountReport& r) { return r.bound_ok && r.cover_in_unit; });
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact beta-expansion dynamics: expansions, censuses, constructions and run-length laws", "betadyn"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", g.output, "Write results to this file instead of standard output");
  app.add_option("--seed", g.seed, "Random seed");

  ExpandArgs expand;
  auto* c_expand = app.add_subcommand("expand", "First digits of the expansion of a rational x");
  c_expand->add_option("--beta", expand.beta, "Base")->required();
  c_expand->add_option("--x", expand.x, "Point in [0, 1] (p/q or decimal)")->required();
  c_expand->add_option("--digits", expand.digits, "Number of digits")->required();

  CensusArgs census_args;
  auto* c_census = app.add_subcommand("census", "Admissible and full word counts for lengths 1..n");
  c_census->add_option("--beta", census_args.beta, "Base")->required();
  c_census->add_option("--n", census_args.n, "Largest word length")->required();
  c_census->add_flag("--full-only", census_args.full_only, "Report only the full-word columns");
  c_census->add_option("--budget", census_args.budget, "Enumeration budget (words per length)");

  ConstructArgs construct;
  auto* c_construct = app.add_subcommand("construct", "Build an E_p or U point and verify its checkpoints");
  c_construct->require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--beta", construct.beta, "Base")->required();
    sub->add_option("--phi", construct.phi, "sqrt, linear, power:a/b, log, linear_over_log or table:n=v,...");
    sub->add_option("--out-dir", construct.out_dir, "Directory for schedule, checkpoints and digit chunks");
    sub->add_option("--max-digits", construct.max_digits, "Digits to materialize and check");
  };
  auto* c_ep = c_construct->add_subcommand("ep", "Cantor-subset point");
  add_common(c_ep);
  c_ep->add_option("--p", construct.p, "Parameter p >= 2")->required();
  c_ep->add_option("--levels", construct.levels, "Scheduled levels");
  c_ep->add_option("--budget", construct.budget, "Enumeration budget for M_d");
  auto* c_u = c_construct->add_subcommand("u", "Residual-set point");
  add_common(c_u);
  c_u->add_option("--prefix", construct.prefix, "Admissible prefix, comma separated")->required();
  c_u->add_option("--stages", construct.stages, "Stages to verify");

  McArgs mc;
  auto* c_mc = app.add_subcommand("mc", "Monte Carlo check of the run-length law");
  c_mc->add_option("--beta", mc.beta, "Base")->required();
  c_mc->add_option("--n", mc.n, "Digits per sample")->required();
  c_mc->add_option("--samples", mc.samples, "Number of samples");
  c_mc->add_option("--mode", mc.mode, "exact or direct-bits");
  c_mc->add_option("--band-lo", mc.band_lo, "Lower end of the acceptance band for the mean ratio");
  c_mc->add_option("--band-hi", mc.band_hi, "Upper end of the acceptance band for the mean ratio");

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Counts, cover exponents and local dimensions of an E_p schedule");
  c_analyze->add_option("--beta", analyze.beta, "Base (must match the schedule)");
  c_analyze->add_option("--schedule", analyze.schedule, "Schedule JSON written by construct ep")->required();
  c_analyze->add_option("--k", analyze.k, "Highest level to analyse (default: all)");
  c_analyze->add_option("--max-digits", analyze.max_digits, "Largest materialized prefix for the profile");
  c_analyze->add_option("--budget", analyze.budget, "Enumeration budget");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::ostringstream body;
  int code = kOk;
  try {
    if (*c_expand) {
      code = cmd_expand(g, expand, body);
    } else if (*c_census) {
      code = cmd_census(g, census_args, body);
    } else if (*c_ep) {
      code = cmd_construct_ep(g, construct, body, err);
    } else if (*c_u) {
      code = cmd_construct_u(g, construct, body, err);
    } else if (*c_mc) {
      code = cmd_mc(g, mc, body, err);
    } else if (*c_analyze) {
      code = cmd_analyze(g, analyze, body);
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const Unreachable& e) {
    err << "unreachable: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::ios_base::failure& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (g.output.empty()) {
    out << body.str();
  } else {
    std::ofstream f(g.output, std::ios::binary);
    f << body.str();
    if (!f) {
      err << "io error: cannot write " << g.output << '\n';
      return kIoError;
    }
  }
  return code;
}

}  // namespace betadyn::cli
