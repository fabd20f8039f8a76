#pragma once

// Check runners, CSV/JSON persistence and the command-line entry point.
//
// Verdicts: "pass" and "fail" are evidence-based, "inconclusive" means the
// data cannot decide at the configured replicate count (asymptotic claims are
// one-sided), "error" means the check did not run.  Exit codes: 0 when every
// check passes or is inconclusive, 1 when any check fails, 2 on
// configuration or runtime errors.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakdep/config.hpp"
#include "weakdep/empirics.hpp"

namespace weakdep {

inline constexpr const char* kVersion = "0.1.0";

struct CsvTable {
  std::string filename;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Fixed 17-significant-digit rendering used in every CSV cell.
std::string csv_double(double x);

struct CheckOutcome {
  Check check = Check::clt;
  std::string verdict;  // pass | fail | inconclusive | error
  nlohmann::json detail;
  std::vector<CsvTable> tables;
};

// The limiting standard deviation used by distribution-distance checks:
// analytic when the model admits a closed form, otherwise a Bartlett-tapered
// estimate from an independent pilot path of 4x the largest grid size.
struct SigmaChoice {
  double sigma2 = 0.0;
  std::string source;  // "analytic" | "pilot"
};
SigmaChoice sigma_for_limit(const ExperimentConfig& config, unsigned threads);

CheckOutcome run_bounds_check(const ExperimentConfig& config);
CheckOutcome run_clt_check(const ExperimentConfig& config, unsigned threads);
CheckOutcome run_moments_check(const ExperimentConfig& config, unsigned threads);
CheckOutcome run_rate_check(const ExperimentConfig& config, unsigned threads);
CheckOutcome run_decay_probe(const ExperimentConfig& config, unsigned threads);
CheckOutcome run_check(Check check, const ExperimentConfig& config, unsigned threads);

struct RunResult {
  int exit_code = 0;
  std::filesystem::path run_dir;
  nlohmann::json report;
};

// Runs every configured check, writes report.json plus one CSV per table
// into a fresh timestamped directory under `out_root`, and returns the exit
// code per the contract above.  Existing artifacts are never mutated.
RunResult run_full_report(const ExperimentConfig& config, unsigned threads,
                          const std::filesystem::path& out_root);

// Writes one path CSV per n_grid entry (columns t_index,value) plus a sidecar
// JSON with the spec digest and the seed used.
RunResult run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_root);

// Single-check entry used by the focused subcommands.
RunResult run_single_check(Check check, const ExperimentConfig& config, unsigned threads,
                           const std::filesystem::path& out_root);

int run_cli(int argc, const char* const* argv);

}  // namespace weakdep
