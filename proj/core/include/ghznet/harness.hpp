#pragma once

// Seeded experiment runner: turns each certification or security bound into
// an automated pass/fail check with a machine-readable report.
//
// Report schema (one JSON object per line):
//   {"experiment", "params", "estimate", "stderr", "ci99", "bound",
//    "relation", "pass", "trials", "seed", "rng", "wall_time_ms", ...}
// "stderr" is the sample standard deviation divided by sqrt(trials); "ci99"
// is the normal-approximation 99% interval. One-sided bound checks use the
// conservative interval edge (the upper edge for "<=" claims) so statistical
// noise cannot mask a true violation. Kind-specific detail fields follow the
// common keys.
//
// Reports are byte-identical for identical (plan, seed): trials derive
// independent streams from (seed, trial index) and the serialized
// wall_time_ms is 0 unless timing is explicitly requested (measured timing
// always goes to stderr in the CLI).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ghznet {

enum class ExperimentKind {
  spectrum,
  lr_bound,
  selftest,
  parity,
  veto,
  notify,
  authenticate,
  collision,
  aeg,
  guess,
  bounds_sweep,
};

const char* experiment_name(ExperimentKind kind);

enum class ReportFormat { json, csv };

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::spectrum;
  int n = 3;
  int S = 3;
  double epsilon = 0.0;
  std::optional<double> delta;  // overrides epsilon when given
  std::string junk = "psi-minus";
  long trials = 1;
  int max_reps = 64;
  int k = 2;
  std::uint64_t seed = 0;
  std::string inputs;  // bit string, required by parity/veto/collision
  int sender = 1;
  int receiver = 2;
  double threshold = 0.5;      // selftest acceptance threshold on epsilon_hat
  int tolerance = 0;           // authentication mismatch tolerance
  double verify_tolerance = 0.0;  // aeg: fraction of failed checks the receiver forgives
  std::optional<int> tamper;   // authenticate: agent whose replayed input flips
  std::vector<double> epsilons;  // bounds-sweep grid (defaulted when empty)
  std::vector<int> ks;           // bounds-sweep grid (defaulted when empty)
  bool include_timing = false;   // write measured wall time into reports
  std::string output_path;       // when set, the report is also written here
  std::string transcript_path;   // when set, trial 0's transcript is written here
  ReportFormat format = ReportFormat::json;
};

struct ExperimentResult {
  std::string experiment;
  bool pass = false;

  // Primary check, mirrored in the first report line.
  double estimate = 0.0;
  double stderr_value = 0.0;
  double ci99_lo = 0.0;
  double ci99_hi = 0.0;
  std::optional<double> bound;
  std::string relation;  // "<=", ">=", "in", "none"
  long trials = 0;

  long wall_time_ms = 0;                // measured, regardless of serialization
  std::vector<std::string> json_lines;  // serialized report lines
  std::string csv_header;
  std::vector<std::string> csv_rows;
  std::string transcript_jsonl;  // sample transcript (protocol kinds, trial 0)
};

// Deterministic given (plan, seed); throws std::invalid_argument for bad
// parameters.
ExperimentResult run_experiment(const ExperimentPlan& plan);

// Command-line front end. Exit codes: 0 = all checks passed, 1 = a bound
// check failed, 2 = usage or I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace ghznet
