#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "spcalc/harness.hpp"

using namespace spcalc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config(const std::string& out) {
  // tiny grids so the harness tests stay fast
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "estimates": ["ISO-BRACKET-WT", "DECAY-IXI1"],
    "seed": 7,
    "out": ")" + out + R"("
  })");
  return cfg;
}

}  // namespace

TEST_CASE("config parsing is strict about unknown keys") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"unknown\": 1}"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"grids\": {\"bogus\": {}}}"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json at all"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"geometry\": \"spherical\"}"),
                  Error);
  ExperimentConfig ok = ExperimentConfig::from_json_text(
      R"({"geometry": "wavetrain", "estimates": ["all"], "seed": 3})");
  CHECK(ok.geometry == "wavetrain");
  CHECK(ok.seed == 3);
}

TEST_CASE("grid overrides are honored and validated") {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "grids": {"wavetrain_sweep": {"Nx": 32, "Kmax": 2}}
  })");
  CHECK(cfg.context.wav_sweep.Nx == 32);
  CHECK(cfg.context.wav_sweep.Kmax == 2);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"grids": {"wavetrain_sweep": {"Nx": 33}}})"),
                  Error);
}

TEST_CASE("selection resolves ids and flags catalog misses") {
  ExperimentConfig cfg =
      ExperimentConfig::from_json_text(R"({"estimates": ["PARSEVAL-WT"]})");
  CHECK(cfg.selected_ids() == std::vector<std::string>{"PARSEVAL-WT"});
  ExperimentConfig miss =
      ExperimentConfig::from_json_text(R"({"estimates": ["NO-SUCH-ESTIMATE"]})");
  try {
    miss.selected_ids();
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Lookup);
  }
}

TEST_CASE("empty selection runs cleanly with a zero-row summary") {
  TempDir dir("spcalc_empty_run");
  ExperimentConfig cfg =
      ExperimentConfig::from_json_text(R"({"estimates": []})");
  cfg.out_dir = (dir.path / "out").string();
  RunResult res = run_suite(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.reports.empty());
  std::string summary = slurp(fs::path(cfg.out_dir) / "summary.csv");
  CHECK(summary.find("estimate_id,verdict") != std::string::npos);
}

TEST_CASE("failing estimate produces FAIL row and exit 1") {
  TempDir dir("spcalc_fail_run");
  ExperimentConfig cfg =
      ExperimentConfig::from_json_text(R"({"estimates": ["DECAY-EXPXI"]})");
  cfg.out_dir = (dir.path / "out").string();
  RunResult res = run_suite(cfg);
  CHECK(res.exit_code == 1);
  std::string summary = slurp(fs::path(cfg.out_dir) / "summary.csv");
  CHECK(summary.find("DECAY-EXPXI,FAIL") != std::string::npos);
}

TEST_CASE("identical seeds produce byte-identical CSVs") {
  TempDir dir("spcalc_det_run");
  ExperimentConfig cfg = small_config((dir.path / "a").string());
  RunResult ra = run_suite(cfg);
  CHECK(ra.exit_code == 0);
  cfg.out_dir = (dir.path / "b").string();
  run_suite(cfg);
  for (const char* name : {"summary.csv", "ISO-BRACKET-WT.csv", "DECAY-IXI1.csv"}) {
    std::string a = slurp(dir.path / "a" / name);
    std::string b = slurp(dir.path / "b" / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("compare_runs: identical, changed, missing") {
  TempDir dir("spcalc_cmp_run");
  ExperimentConfig cfg = small_config((dir.path / "a").string());
  run_suite(cfg);
  cfg.out_dir = (dir.path / "b").string();
  run_suite(cfg);
  CompareResult same = compare_runs((dir.path / "a").string(), (dir.path / "b").string());
  CHECK(same.exit_code == 0);
  CHECK(same.text.find("identical") != std::string::npos);

  // flip a verdict in b's summary; the diff must be flagged
  {
    fs::path sm = dir.path / "b" / "summary.csv";
    std::string text = slurp(sm);
    auto pos = text.find("ISO-BRACKET-WT,PASS");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("ISO-BRACKET-WT,PASS").size(), "ISO-BRACKET-WT,FAIL");
    std::ofstream(sm) << text;
  }
  CompareResult diff = compare_runs((dir.path / "a").string(), (dir.path / "b").string());
  CHECK(diff.exit_code == 1);

  CompareResult missing =
      compare_runs((dir.path / "a").string(), (dir.path / "nope").string());
  CHECK(missing.exit_code == 2);
}

TEST_CASE("catalog listing contains the advertised keys") {
  std::string text = list_catalog_text();
  CHECK(text.find("bracket") != std::string::npos);
  CHECK(text.find("ixi1") != std::string::npos);
  CHECK(text.find("garding") != std::string::npos);
  std::string j = list_catalog_json();
  CHECK(j.find("\"estimates\"") != std::string::npos);
  CHECK(j.find("PROP3-BRACKET") != std::string::npos);
}

TEST_CASE("geometry parity: every paired estimate has a twin across geometries") {
  int wav_paired = 0, pul_paired = 0;
  for (const auto& d : estimate_registry()) {
    if (d.twin.empty()) continue;
    const EstimateDef& twin = find_estimate(d.twin);
    CHECK(twin.twin == d.id);
    CHECK(twin.geometry != d.geometry);
    if (d.geometry == Geometry::Wavetrain)
      ++wav_paired;
    else
      ++pul_paired;
  }
  CHECK(wav_paired == pul_paired);
  CHECK(wav_paired >= 20);
}

TEST_CASE("estimate ids are unique") {
  auto ids = estimate_ids();
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("refinement study: doubled resolution keeps stable estimates within 10%") {
  TempDir dir("spcalc_refine_run");
  // bracket boundedness is grid-stable: normalized values are exactly the
  // diagonal weight ratios, so doubling the grid moves them by far less
  // than the 10% band the comparison flags
  std::string base = R"({"estimates": ["PROP3-BRACKET"], "seed": 5)";
  ExperimentConfig coarse = ExperimentConfig::from_json_text(base + "}");
  coarse.out_dir = (dir.path / "coarse").string();
  run_suite(coarse);
  ExperimentConfig fine = ExperimentConfig::from_json_text(base + R"(,
    "grids": {"wavetrain_sweep": {"Nx": 32, "Kmax": 8}}})");
  fine.out_dir = (dir.path / "fine").string();
  run_suite(fine);
  CompareResult res =
      compare_runs((dir.path / "coarse").string(), (dir.path / "fine").string());
  CHECK(res.exit_code == 0);  // verdicts unchanged
  auto pos = res.text.find("max_normalized_ratio=");
  REQUIRE(pos != std::string::npos);
  double ratio = std::stod(res.text.substr(pos + std::string("max_normalized_ratio=").size()));
  CHECK(ratio >= 0.9);
  CHECK(ratio <= 1.1);
}

TEST_CASE("changed sweep shows up as a structural diff") {
  TempDir dir("spcalc_struct_run");
  std::string base = R"({"estimates": ["DECAY-IXI1"], "seed": 5)";
  ExperimentConfig a = ExperimentConfig::from_json_text(base + "}");
  a.out_dir = (dir.path / "a").string();
  run_suite(a);
  // ISO has different row structure than DECAY: compare across different
  // sweeps of the same estimate instead
  ExperimentConfig b = ExperimentConfig::from_json_text(base + R"(,
    "sweep": {"eps_log2_min": -2, "gamma_log2_max": 2}})");
  b.out_dir = (dir.path / "b").string();
  run_suite(b);
  CompareResult res = compare_runs((dir.path / "a").string(), (dir.path / "b").string());
  // decay rows do not depend on the sweep; use a sweep-carrying estimate too
  CHECK(res.exit_code == 0);
}

TEST_CASE("structural diff flagged when row counts differ") {
  TempDir dir("spcalc_struct2_run");
  std::string base = R"({"estimates": ["PROP3-BRACKET"], "seed": 5)";
  ExperimentConfig a = ExperimentConfig::from_json_text(base + "}");
  a.out_dir = (dir.path / "a").string();
  run_suite(a);
  ExperimentConfig b = ExperimentConfig::from_json_text(base + R"(,
    "sweep": {"eps_log2_min": -2, "gamma_log2_max": 2}})");
  b.out_dir = (dir.path / "b").string();
  run_suite(b);
  CompareResult res = compare_runs((dir.path / "a").string(), (dir.path / "b").string());
  CHECK(res.text.find("structural") != std::string::npos);
}

TEST_CASE("worker pool does not perturb determinism") {
  TempDir dir("spcalc_jobs_run");
  std::string base = R"({"estimates": ["ISO-BRACKET-WT", "DECAY-IXI1", "QUANT-WT"],
                         "seed": 17)";
  ExperimentConfig one = ExperimentConfig::from_json_text(base + "}");
  one.out_dir = (dir.path / "one").string();
  run_suite(one);
  ExperimentConfig two = ExperimentConfig::from_json_text(base + R"(, "jobs": 3})");
  two.out_dir = (dir.path / "two").string();
  run_suite(two);
  for (const char* name : {"summary.csv", "ISO-BRACKET-WT.csv", "QUANT-WT.csv"}) {
    std::string a = slurp(dir.path / "one" / name);
    std::string b = slurp(dir.path / "two" / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }
}
