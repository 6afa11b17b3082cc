#pragma once

#include "spcalc/estimates.hpp"

namespace spcalc {

// Batch-run configuration; parsed from a strict JSON file (unknown keys are
// hard errors so a typo cannot silently invalidate a verification run).
struct ExperimentConfig {
  std::string geometry = "both";  // "wavetrain" | "pulse" | "both"
  std::vector<std::string> estimates;  // ids, or the single entry "all"
  std::uint64_t seed = 1234;
  int probes = 10;
  int jobs = 1;
  std::string oracle = "auto";  // "on" | "off" | "auto"
  std::string out_dir;

  EstimateContext context;  // grids/sweep, possibly overridden by the file

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string canonical_text() const;  // deterministic serialization
  std::string config_hash() const;
  std::vector<std::string> selected_ids() const;  // resolved selection
};

struct RunResult {
  int exit_code = 0;
  std::vector<DefectReport> reports;
};

// Runs the selected estimates, writes one CSV per report plus summary.csv
// into out_dir. Exit code 0 iff every selected estimate passes; 1 otherwise.
RunResult run_suite(const ExperimentConfig& cfg);

void write_report_csv(const DefectReport& rep, std::ostream& os,
                      const std::string& provenance);
std::string report_csv_filename(const std::string& estimate_id);

// Catalog listing (symbols, amplitudes, profiles, estimates).
std::string list_catalog_text();
std::string list_catalog_json();

struct CompareResult {
  int exit_code = 0;  // 0 same verdicts; 1 verdict changed; 2 missing/corrupt
  std::string text;
};
CompareResult compare_runs(const std::string& dir_a, const std::string& dir_b);

}  // namespace spcalc
