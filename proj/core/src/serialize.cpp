#include "betadyn/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "betadyn/errors.hpp"

namespace betadyn {

namespace {

using Json = nlohmann::ordered_json;

Json enclosure_json(const Enclosure& e) { return Json::array({to_string(e.lo), to_string(e.hi)}); }

Json optional_enclosure(const std::optional<Enclosure>& e) { return e ? enclosure_json(*e) : Json(nullptr); }

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

Integer parse_integer(const Json& j, const char* what) {
  if (!j.is_string()) throw std::invalid_argument(std::string(what) + " must be a decimal string");
  Integer out;
  if (out.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument(std::string(what) + " is not an integer");
  return out;
}

std::string decimal(const Rational& q, unsigned digits, bool up) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  const Rational scaled = q * Rational(scale);
  Integer v = up ? ceil(scaled) : floor(scaled);
  const bool negative = v < 0;
  if (negative) v = -v;
  std::string s = v.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

}  // namespace

std::string decimal_enclosure(const Enclosure& e, unsigned digits) {
  return "[" + decimal(e.lo, digits, false) + ", " + decimal(e.hi, digits, true) + "]";
}

std::string to_json(const EpSchedule& s) {
  Json j;
  j["construction"] = "ep";
  j["beta"] = s.context->label();
  j["p"] = s.p;
  j["phi"] = s.phi.name();
  j["h"] = s.h;
  Json n = Json::array(), d = Json::array(), tau = Json::array(), tail = Json::array(), a = Json::array(),
       g = Json::array(), b = Json::array(), pk = Json::array();
  for (std::size_t k = 1; k <= s.size(); ++k) {
    const EpLevel& lv = s.level(k);
    n.push_back(lv.n.get_str());
    d.push_back(std::to_string(lv.d));
    tau.push_back(lv.tau.get_str());
    tail.push_back(lv.tail.get_str());
    const auto ak = s.a(k);
    a.push_back(ak ? Json(ak->get_str()) : Json(nullptr));
    g.push_back(s.g(k).to_string());
    b.push_back(s.b(k).to_string());
    pk.push_back(to_string(s.p_k(k)));
  }
  j["n"] = n;
  j["d"] = d;
  j["tau"] = tau;
  j["tail"] = tail;
  j["a"] = a;
  j["g"] = g;
  j["b"] = b;
  j["p_k"] = pk;
  return j.dump(2) + "\n";
}

std::string to_json(const USchedule& s) {
  Json j;
  j["construction"] = "u";
  j["beta"] = s.context->label();
  j["phi"] = s.phi.name();
  j["h"] = s.h;
  j["prefix"] = format_digits(s.prefix);
  j["k"] = s.k();
  Json n = Json::array();
  for (const auto& v : s.n) n.push_back(v.get_str());
  j["n"] = n;
  Json gamma = Json::array();
  for (auto v : s.gamma) gamma.push_back(std::to_string(v));
  j["gamma"] = gamma;
  Json omega = Json::array();
  for (const auto& block : s.omega) {
    Json o;
    o["index"] = block.index;
    o["kind"] = block.odd ? "odd" : "even";
    o["length"] = block.length.get_str();
    o["repetitions"] = block.repetitions.get_str();
    o["zeros"] = block.zeros.get_str();
    omega.push_back(o);
  }
  j["omega"] = omega;
  j["omega_even_interpretation"] = "floor-repetitions";
  return j.dump(2) + "\n";
}

EpSchedule ep_schedule_from_json(const std::string& text, const SearchLimits& limits) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("schedule is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("construction", "") != "ep") throw std::invalid_argument("schedule is not an E_p schedule");
    EpSchedule s;
    s.context = make_beta(BetaSpec::parse(j.at("beta").get<std::string>()));
    s.p = j.at("p").get<unsigned>();
    s.phi = Phi::parse(j.at("phi").get<std::string>(), s.context);
    s.h = find_h(s.context);
    if (j.at("h").get<unsigned>() != s.h) throw Infeasible("h does not match beta");
    const Json& n = j.at("n");
    if (!n.is_array() || n.empty()) throw std::invalid_argument("n must be a nonempty array");
    s.levels.resize(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) s.levels[k].n = parse_integer(n[k], "n entry");

    // Recompute the derived columns; the stored ones must agree.
    EpSchedule rebuilt = s;
    for (std::size_t k = 1; k <= s.size(); ++k) {
      EpLevel& lv = rebuilt.levels[k - 1];
      lv.d = floor_ln(lv.n).get_ui();
      if (k == 1) {
        lv.tau = 0;
        lv.tail = lv.n - 1;
      } else {
        const EpLevel& prev = rebuilt.levels[k - 2];
        const Integer gap = lv.n - prev.n;
        lv.tau = k % 2 == 0 ? Integer(gap / prev.d)
                            : floor((Rational(s.p - 1, s.p) * Rational(lv.n) - Rational(prev.n)) / Rational(prev.d));
        lv.tail = gap - lv.tau * prev.d;
      }
      try {
        lv.M = enumerate_M(rebuilt.context, lv.d, limits.enumeration_budget);
      } catch (const BudgetExceeded&) {
        if (k < s.size()) throw;
      }
    }
    const auto check_column = [&](const char* key, auto&& expected) {
      if (!j.contains(key)) return;
      const Json& col = j.at(key);
      if (!col.is_array() || col.size() != s.size()) throw std::invalid_argument(std::string(key) + " has the wrong length");
      for (std::size_t k = 1; k <= s.size(); ++k) {
        const Json want = expected(k);
        if (col[k - 1] != want) {
          throw Infeasible(std::string(key) + "[" + std::to_string(k) + "] does not match the recomputed value");
        }
      }
    };
    check_column("d", [&](std::size_t k) { return Json(std::to_string(rebuilt.level(k).d)); });
    check_column("tau", [&](std::size_t k) { return Json(rebuilt.level(k).tau.get_str()); });
    check_column("tail", [&](std::size_t k) { return Json(rebuilt.level(k).tail.get_str()); });
    check_column("a", [&](std::size_t k) {
      const auto a = rebuilt.a(k);
      return a ? Json(a->get_str()) : Json(nullptr);
    });
    check_column("g", [&](std::size_t k) { return Json(rebuilt.g(k).to_string()); });
    check_column("b", [&](std::size_t k) { return Json(rebuilt.b(k).to_string()); });
    validate(rebuilt);
    return rebuilt;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed schedule: ") + e.what());
  }
}

std::string checkpoints_csv(const CheckpointReport& report) {
  std::ostringstream out;
  out << "k,n_k,r_n_k,bound,pass,relation,ratio_lo,ratio_hi\n";
  for (const auto& row : report.rows) {
    out << row.k << ',' << row.n.get_str() << ',';
    out << (row.r_lo == row.r_hi ? row.r_lo.get_str() : row.r_lo.get_str() + ".." + row.r_hi.get_str());
    out << ',' << to_string(row.bound) << ',' << (row.pass ? "true" : "false") << ',' << row.relation << ',';
    if (row.ratio) {
      out << decimal(row.ratio->lo, 9, false) << ',' << decimal(row.ratio->hi, 9, true);
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

std::string checkpoints_json(const CheckpointReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["k"] = row.k;
    r["n_k"] = row.n.get_str();
    r["r_n_k"] = Json::array({row.r_lo.get_str(), row.r_hi.get_str()});
    r["relation"] = row.relation;
    r["bound"] = to_string(row.bound);
    r["pass"] = row.pass;
    r["ratio"] = optional_enclosure(row.ratio);
    rows.push_back(r);
  }
  Json j;
  j["all_pass"] = report.all_pass();
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string census_csv_header() { return "n,count,full_count,lower_bound_ok,upper_bound_ok,pigeonhole_ok\n"; }

std::string census_csv_row(const CensusRecord& r) {
  std::ostringstream out;
  const auto b = [](bool v) { return v ? "true" : "false"; };
  out << r.n << ',' << r.count << ',' << r.full_count << ',' << b(r.lower_bound_ok) << ',' << b(r.upper_bound_ok)
      << ',' << b(r.pigeonhole_ok) << '\n';
  return out.str();
}

std::string counts_csv(const std::vector<CountReport>& reports) {
  std::ostringstream out;
  out << "k,a_k,g_k,b_k,p_k,m,sigma_m,count_bound,bound_ok,beta_bar_lo,beta_bar_hi,cover_lo,cover_hi,cover_in_unit\n";
  for (const auto& r : reports) {
    out << r.k << ',' << r.a.get_str() << ',' << r.g.to_string() << ',' << r.b.to_string() << ',' << to_string(r.p_k)
        << ',' << r.m << ',' << r.sigma_count << ',' << r.count_bound.get_str() << ',' << (r.bound_ok ? "true" : "false")
        << ',' << to_string(r.beta_bar.lo) << ',' << to_string(r.beta_bar.hi) << ',' << to_string(r.cover.lo) << ','
        << to_string(r.cover.hi) << ',' << (r.cover_in_unit ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string counts_json(const std::vector<CountReport>& reports) {
  Json rows = Json::array();
  for (const auto& r : reports) {
    Json j;
    j["k"] = r.k;
    j["a_k"] = r.a.get_str();
    j["g_k"] = r.g.to_string();
    j["b_k"] = r.b.to_string();
    j["p_k"] = to_string(r.p_k);
    j["m"] = r.m;
    j["sigma_m"] = std::to_string(r.sigma_count);
    j["count_bound"] = r.count_bound.get_str();
    j["bound_ok"] = r.bound_ok;
    j["beta_bar"] = enclosure_json(r.beta_bar);
    j["cover_exponent"] = enclosure_json(r.cover);
    j["cover_in_unit"] = r.cover_in_unit;
    rows.push_back(j);
  }
  return rows.dump(2) + "\n";
}

std::string profile_csv(const std::vector<DimensionSample>& samples) {
  std::ostringstream out;
  out << "n,mass,log_ratio_lo,log_ratio_hi\n";
  for (const auto& s : samples) {
    std::string mass = s.mass.to_string();
    if (mass.size() > 64) mass = "1/" + s.mass.denominator.to_string(0);
    out << s.n << ',' << mass << ',' << decimal(s.log_ratio.lo, 9, false) << ',' << decimal(s.log_ratio.hi, 9, true)
        << '\n';
  }
  return out.str();
}

std::string mc_csv(const McReport& report) {
  std::ostringstream out;
  out << "sample,run_length,ratio_lo,ratio_hi,restarts,redraws\n";
  for (const auto& row : report.rows) {
    out << row.index << ',' << row.run_length << ',';
    if (row.ratio) {
      out << decimal(row.ratio->lo, 9, false) << ',' << decimal(row.ratio->hi, 9, true);
    } else {
      out << "undefined,undefined";
    }
    out << ',' << row.restarts << ',' << row.redraws << '\n';
  }
  return out.str();
}

std::string mc_json(const McReport& report) {
  Json j;
  j["beta"] = report.beta;
  j["n"] = std::to_string(report.n);
  j["samples"] = report.samples;
  j["seed"] = std::to_string(report.seed);
  j["mode"] = to_string(report.mode);
  j["mean"] = optional_enclosure(report.mean);
  j["min"] = optional_enclosure(report.min);
  j["max"] = optional_enclosure(report.max);
  j["restarts"] = report.restarts;
  j["redraws"] = report.redraws;
  j["uncertified"] = report.uncertified;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["sample"] = row.index;
    r["run_length"] = row.run_length;
    r["ratio"] = optional_enclosure(row.ratio);
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size, std::uint64_t hash) {
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string chunk_file_name(std::size_t index) {
  std::ostringstream out;
  out << "chunk_" << std::setw(6) << std::setfill('0') << index << ".bin";
  return out.str();
}

std::vector<StreamChunk> write_stream_chunks(PlanCursor& cursor, std::uint64_t max_digits,
                                             const std::filesystem::path& dir, std::size_t chunk_digits) {
  std::filesystem::create_directories(dir);
  std::vector<StreamChunk> chunks;
  DigitWord buffer(chunk_digits);
  std::uint64_t written = 0;
  while (written < max_digits && !cursor.done()) {
    const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(chunk_digits, max_digits - written));
    const std::size_t got = cursor.read(std::span<Digit>(buffer.data(), want));
    StreamChunk chunk{chunks.size(), got, fnv1a64(buffer.data(), got)};
    std::ofstream file(dir / chunk_file_name(chunk.index), std::ios::binary);
    file.write(reinterpret_cast<const char*>(buffer.data()), static_cast<std::streamsize>(got));
    if (!file) throw std::ios_base::failure("cannot write " + (dir / chunk_file_name(chunk.index)).string());
    chunks.push_back(chunk);
    written += got;
  }
  return chunks;
}

std::string manifest_json(const std::string& beta, const std::string& schedule_file,
                          const std::vector<StreamChunk>& chunks) {
  Json j;
  j["beta"] = beta;
  j["schedule"] = schedule_file;
  Json list = Json::array();
  for (const auto& c : chunks) {
    Json e;
    e["index"] = c.index;
    e["length"] = c.length;
    e["digest"] = hex64(c.digest);
    list.push_back(e);
  }
  j["chunks"] = list;
  return j.dump(2) + "\n";
}

}  // namespace betadyn
