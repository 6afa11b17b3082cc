#include "spcalc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace spcalc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_json_keys(const json& j, std::initializer_list<const char*> allowed,
                     const std::string& where) {
  require(j.is_object(), ErrorCode::Config, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    require(ok, ErrorCode::Config, "unknown key '" + it.key() + "' in " + where);
  }
}

GridSpec parse_grid(const json& j, Geometry geom, const GridSpec& dflt,
                    const std::string& where) {
  check_json_keys(j, {"d", "L", "Nx", "Kmax", "Theta", "Ntheta"}, where);
  GridSpec g = dflt;
  g.geometry = geom;
  if (j.contains("d")) g.d = j["d"].get<int>();
  if (j.contains("L")) g.L = j["L"].get<double>();
  if (j.contains("Nx")) g.Nx = j["Nx"].get<int>();
  if (j.contains("Kmax")) g.Kmax = j["Kmax"].get<int>();
  if (j.contains("Theta")) g.Theta = j["Theta"].get<double>();
  if (j.contains("Ntheta")) g.Ntheta = j["Ntheta"].get<int>();
  g.validate();
  return g;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Config, std::string("config parse error: ") + e.what());
  }
  check_json_keys(j,
                  {"geometry", "estimates", "seed", "probes", "jobs", "oracle", "out",
                   "sweep", "grids"},
                  "config");
  ExperimentConfig cfg;
  if (j.contains("geometry")) {
    cfg.geometry = j["geometry"].get<std::string>();
    require(cfg.geometry == "both" || cfg.geometry == "wavetrain" ||
                cfg.geometry == "pulse",
            ErrorCode::Config, "geometry must be wavetrain|pulse|both");
  }
  if (j.contains("estimates")) {
    require(j["estimates"].is_array(), ErrorCode::Config, "estimates must be an array");
    for (const auto& e : j["estimates"]) cfg.estimates.push_back(e.get<std::string>());
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("probes")) cfg.probes = j["probes"].get<int>();
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
  if (j.contains("oracle")) {
    cfg.oracle = j["oracle"].get<std::string>();
    require(cfg.oracle == "on" || cfg.oracle == "off" || cfg.oracle == "auto",
            ErrorCode::Config, "oracle must be on|off|auto");
  }
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("sweep")) {
    check_json_keys(j["sweep"], {"eps_log2_min", "gamma_log2_max"}, "sweep");
    SweepSpec s;
    int jmin = j["sweep"].contains("eps_log2_min") ? j["sweep"]["eps_log2_min"].get<int>()
                                                   : -8;
    int imax = j["sweep"].contains("gamma_log2_max")
                   ? j["sweep"]["gamma_log2_max"].get<int>()
                   : 6;
    require(jmin <= 0 && imax >= 0, ErrorCode::Config, "invalid sweep exponents");
    s.eps.clear();
    s.gamma.clear();
    for (int e = 0; e >= jmin; --e) s.eps.push_back(std::pow(2.0, e));
    for (int i = 0; i <= imax; ++i) s.gamma.push_back(std::pow(2.0, i));
    cfg.context.sweep = s;
  }
  if (j.contains("grids")) {
    check_json_keys(j["grids"],
                    {"wavetrain_sweep", "pulse_sweep", "wavetrain_small", "pulse_small",
                     "wavetrain_desk", "pulse_desk"},
                    "grids");
    const json& g = j["grids"];
    auto& c = cfg.context;
    if (g.contains("wavetrain_sweep"))
      c.wav_sweep = parse_grid(g["wavetrain_sweep"], Geometry::Wavetrain, c.wav_sweep,
                               "grids.wavetrain_sweep");
    if (g.contains("pulse_sweep"))
      c.pul_sweep =
          parse_grid(g["pulse_sweep"], Geometry::Pulse, c.pul_sweep, "grids.pulse_sweep");
    if (g.contains("wavetrain_small"))
      c.wav_small = parse_grid(g["wavetrain_small"], Geometry::Wavetrain, c.wav_small,
                               "grids.wavetrain_small");
    if (g.contains("pulse_small"))
      c.pul_small =
          parse_grid(g["pulse_small"], Geometry::Pulse, c.pul_small, "grids.pulse_small");
    if (g.contains("wavetrain_desk"))
      c.wav_desk = parse_grid(g["wavetrain_desk"], Geometry::Wavetrain, c.wav_desk,
                              "grids.wavetrain_desk");
    if (g.contains("pulse_desk"))
      c.pul_desk =
          parse_grid(g["pulse_desk"], Geometry::Pulse, c.pul_desk, "grids.pulse_desk");
  }
  cfg.context.seed = cfg.seed;
  cfg.context.probes = cfg.probes;
  cfg.context.oracle = cfg.oracle != "off";
  if (cfg.oracle == "off") cfg.context.opt.method = NormMethod::PowerIteration;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  require(bool(is), ErrorCode::Config, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream os;
  os << "geometry=" << geometry << ";seed=" << seed << ";probes=" << probes
     << ";oracle=" << oracle << ";estimates=";
  for (const auto& e : estimates) os << e << ",";
  os << ";wav_sweep=" << context.wav_sweep.describe()
     << ";pul_sweep=" << context.pul_sweep.describe()
     << ";wav_small=" << context.wav_small.describe()
     << ";pul_small=" << context.pul_small.describe()
     << ";eps_n=" << context.sweep.eps.size() << ";gamma_n=" << context.sweep.gamma.size();
  return os.str();
}

std::string ExperimentConfig::config_hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                (unsigned long long)fnv1a(canonical_text()));
  return buf;
}

std::vector<std::string> ExperimentConfig::selected_ids() const {
  std::vector<std::string> ids;
  bool all = estimates.size() == 1 && estimates[0] == "all";
  if (all) {
    for (const auto& d : estimate_registry()) {
      if (geometry == "wavetrain" && d.geometry != Geometry::Wavetrain) continue;
      if (geometry == "pulse" && d.geometry != Geometry::Pulse) continue;
      ids.push_back(d.id);
    }
    return ids;
  }
  for (const auto& e : estimates) {
    const EstimateDef& d = find_estimate(e);  // throws Lookup on a catalog miss
    if (geometry == "wavetrain" && d.geometry != Geometry::Wavetrain) continue;
    if (geometry == "pulse" && d.geometry != Geometry::Pulse) continue;
    ids.push_back(d.id);
  }
  return ids;
}

std::string report_csv_filename(const std::string& estimate_id) {
  return estimate_id + ".csv";
}

void write_report_csv(const DefectReport& rep, std::ostream& os,
                      const std::string& provenance) {
  os << "# " << provenance << "\n";
  os << "# detail: " << rep.detail << "\n";
  os << "# gamma_power=" << format_double(rep.gamma_power)
     << " spread_cellwise=" << format_double(rep.spread_cellwise);
  if (rep.garding_mode)
    os << " garding_bound=" << format_double(rep.garding_bound)
       << " gamma0=" << (rep.gamma0_found ? format_double(rep.gamma0) : "none");
  if (rep.threshold_mode) os << " threshold=" << format_double(rep.threshold);
  os << "\n";
  if (!rep.note.empty()) os << "# note: " << rep.note << "\n";
  os << "estimate_id,epsilon,gamma,raw_norm,normalized,slope,spread,verdict\n";
  for (const auto& r : rep.rows) {
    os << rep.estimate_id << ',' << format_double(r.eps) << ',' << format_double(r.gamma)
       << ',' << format_double(r.raw) << ',' << format_double(r.normalized) << ','
       << format_double(rep.slope_checked ? rep.fitted_slope : 0.0) << ','
       << format_double(rep.spread) << ',' << (rep.pass ? "PASS" : "FAIL") << "\n";
  }
}

RunResult run_suite(const ExperimentConfig& cfg) {
  RunResult result;
  std::vector<std::string> ids = cfg.selected_ids();  // may throw Lookup/Config

  require(!cfg.out_dir.empty(), ErrorCode::Config, "output directory not set");
  fs::create_directories(cfg.out_dir);

  std::vector<DefectReport> reports(ids.size());
  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      reports[i] = find_estimate(ids[i]).run(cfg.context);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ids.size()) break;
            reports[i] = find_estimate(ids[i]).run(cfg.context);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::string provenance = "config=" + cfg.config_hash() + " seed=" +
                           std::to_string(cfg.seed) + " sweep=" +
                           std::to_string(cfg.context.sweep.eps.size()) + "x" +
                           std::to_string(cfg.context.sweep.gamma.size());
  bool all_pass = true;
  std::ofstream summary(fs::path(cfg.out_dir) / "summary.csv");
  require(bool(summary), ErrorCode::Io, "cannot write summary.csv");
  summary << "# " << provenance << "\n";
  summary << "estimate_id,verdict,spread,slope,note\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const DefectReport& rep = reports[i];
    std::ofstream os(fs::path(cfg.out_dir) / report_csv_filename(rep.estimate_id));
    require(bool(os), ErrorCode::Io, "cannot write report CSV");
    std::string grid_desc =
        rep.geometry == Geometry::Wavetrain ? "geometry=wavetrain" : "geometry=pulse";
    write_report_csv(rep, os, provenance + " " + grid_desc);
    summary << rep.estimate_id << ',' << (rep.pass ? "PASS" : "FAIL") << ','
            << format_double(rep.spread) << ','
            << format_double(rep.slope_checked ? rep.fitted_slope : 0.0) << ','
            << rep.note << "\n";
    all_pass = all_pass && rep.pass;
  }
  result.exit_code = all_pass ? 0 : 1;
  result.reports = std::move(reports);
  return result;
}

std::string list_catalog_text() {
  std::ostringstream os;
  os << "symbols / amplitudes / profiles:\n";
  for (const auto& e : catalog_entries()) {
    os << "  " << e.kind << "  " << e.name;
    if (!e.defaults.empty()) {
      os << "  (";
      bool first = true;
      for (const auto& [k, v] : e.defaults) {
        if (!first) os << ", ";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        os << k << "=" << buf;
        first = false;
      }
      os << ")";
    }
    os << "  -- " << e.doc << "\n";
  }
  os << "estimates:\n";
  for (const auto& d : estimate_registry()) {
    os << "  " << d.id << "  ["
       << (d.geometry == Geometry::Wavetrain ? "wavetrain" : "pulse") << "]";
    if (!d.twin.empty()) os << "  twin=" << d.twin;
    os << "  -- " << d.doc << "\n";
  }
  return os.str();
}

std::string list_catalog_json() {
  json j;
  j["symbols"] = json::array();
  j["amplitudes"] = json::array();
  j["profiles"] = json::array();
  for (const auto& e : catalog_entries()) {
    json item;
    item["name"] = e.name;
    item["doc"] = e.doc;
    item["params"] = json::object();
    for (const auto& [k, v] : e.defaults) item["params"][k] = v;
    if (e.kind == "symbol")
      j["symbols"].push_back(item);
    else if (e.kind == "amplitude")
      j["amplitudes"].push_back(item);
    else
      j["profiles"].push_back(item);
  }
  j["estimates"] = json::array();
  for (const auto& d : estimate_registry()) {
    json item;
    item["id"] = d.id;
    item["geometry"] = d.geometry == Geometry::Wavetrain ? "wavetrain" : "pulse";
    item["twin"] = d.twin;
    item["doc"] = d.doc;
    j["estimates"].push_back(item);
  }
  return j.dump(2);
}

namespace {

struct RunData {
  std::map<std::string, std::string> verdicts;
  std::map<std::string, double> max_normalized;
  std::map<std::string, std::size_t> row_counts;
};

bool load_run(const std::string& dir, RunData& out) {
  fs::path summary = fs::path(dir) / "summary.csv";
  std::ifstream is(summary);
  if (!is) return false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("estimate_id", 0) == 0) continue;
    std::istringstream ss(line);
    std::string id, verdict;
    std::getline(ss, id, ',');
    std::getline(ss, verdict, ',');
    if (id.empty()) continue;
    out.verdicts[id] = verdict;
    std::ifstream cs(fs::path(dir) / report_csv_filename(id));
    if (!cs) return false;
    double maxn = 0.0;
    std::size_t rows = 0;
    std::string cl;
    while (std::getline(cs, cl)) {
      if (cl.empty() || cl[0] == '#' || cl.rfind("estimate_id", 0) == 0) continue;
      // columns: id,eps,gamma,raw,normalized,...
      std::istringstream css(cl);
      std::string tok;
      for (int c = 0; c < 5 && std::getline(css, tok, ','); ++c)
        if (c == 4) maxn = std::max(maxn, std::abs(std::stod(tok)));
      ++rows;
    }
    out.max_normalized[id] = maxn;
    out.row_counts[id] = rows;
  }
  return true;
}

}  // namespace

CompareResult compare_runs(const std::string& dir_a, const std::string& dir_b) {
  CompareResult res;
  RunData a, b;
  if (!load_run(dir_a, a) || !load_run(dir_b, b)) {
    res.exit_code = 2;
    res.text = "missing or corrupt run directory\n";
    return res;
  }
  std::ostringstream os;
  bool verdict_changed = false;
  bool structural = false;
  for (const auto& [id, va] : a.verdicts) {
    auto it = b.verdicts.find(id);
    if (it == b.verdicts.end()) {
      os << id << ": only in " << dir_a << "\n";
      structural = true;
      continue;
    }
    double na = a.max_normalized[id], nb = b.max_normalized[id];
    double ratio = (na > 0 && nb > 0) ? nb / na : (na == nb ? 1.0 : 0.0);
    os << id << ": " << va << " -> " << it->second
       << "  max_normalized_ratio=" << format_double(ratio);
    if (a.row_counts[id] != b.row_counts[id]) {
      os << "  [structural: row count " << a.row_counts[id] << " -> "
         << b.row_counts[id] << "]";
      structural = true;
    }
    os << "\n";
    if (va != it->second) verdict_changed = true;
  }
  for (const auto& [id, vb] : b.verdicts)
    if (!a.verdicts.count(id)) {
      os << id << ": only in " << dir_b << "\n";
      structural = true;
    }
  if (a.verdicts == b.verdicts && !structural && a.max_normalized == b.max_normalized)
    os << "runs identical\n";
  res.exit_code = verdict_changed ? 1 : 0;
  res.text = os.str();
  (void)structural;
  return res;
}

}  // namespace spcalc
