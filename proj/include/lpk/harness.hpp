#pragma once
// Experiment orchestration: configs with parameter gates, the headline
// experiments as pure functions of their config, and report emission.
//
// Every run_* function returns a Report that is a pure function of the
// config: the same seed produces byte-identical numeric fields. Trials are
// dispatched to a small worker pool, but records are stored and aggregated
// in trial order, so reports do not depend on the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpk/cover.hpp"
#include "lpk/signal.hpp"

namespace lpk {

struct ExperimentConfig {
  std::string experiment;

  // Grid.
  double period = 32.0;
  int n = 4096;

  // Trials.
  std::uint64_t seed = 20260816;
  int trials = 100;

  // Interval family: inline (possibly loaded from --intervals / config file).
  // Empty means "use the experiment's default family".
  IntervalFamily family;

  // Analytic parameters.
  int i = 1;
  int r = 1;
  double s = 0.0;
  double p = 2.0;
  double A = 1.03;
  int D = 100;
  std::optional<int> nu;
  int sigma_max = 8;

  // Kernel-decay profile selector: "smooth1", "smooth2", "smooth3", or "all".
  std::string kernel_profile = "all";

  // Output.
  std::string out_path;
  std::string format = "json";
};

// Loads a config from a JSON object file. Unknown keys are rejected by name;
// the parameter gates below are applied before returning.
ExperimentConfig load_config_file(const std::string& path);

// Enforces the analytic parameter gates, naming the violated constraint:
//   r > max{s, i-1}   and   s in (-1/2, i]
// plus basic sanity (power-of-two n >= 16, positive period, trials >= 1,
// A > 1, D >= 1, p >= 1). Throws std::invalid_argument.
void validate_params(const ExperimentConfig& cfg);

// One pass/fail criterion: `measured relation threshold` must hold.
struct CriterionResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=" or ">="
  std::string detail;    // free-form context (operator, arm, ...)
};

// One trial's numeric record. `section` groups rows when an experiment runs
// several sub-experiments (kernel-decay runs up to three). Field order is
// fixed by construction and becomes the CSV column order.
struct TrialRecord {
  std::string section;
  int index = 0;
  std::vector<std::pair<std::string, double>> fields;
};

struct Report {
  std::string schema = "lpk-report-v1";
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<TrialRecord> trials;
  std::vector<std::pair<std::string, double>> aggregates;
  std::vector<CriterionResult> criteria;

  bool passed() const;
};

// Headline experiments.
// Random admissible interval family against a grid: 1..max_count intervals
// on both sides of the origin, lengths log-uniform over up to three decades
// (clipped to hold a few grid frequencies and fit under the Nyquist
// ceiling), gaps of at least one frequency step, origin excluded.
IntervalFamily random_interval_family(Rng& rng, const SampleGrid& grid, int max_count);

Report run_decomp_check(const ExperimentConfig& cfg);
Report run_bound_scan(const ExperimentConfig& cfg);
Report run_counterexample(const ExperimentConfig& cfg);
Report run_rf_inequality(const ExperimentConfig& cfg);
Report run_shift_lipschitz(const ExperimentConfig& cfg);
Report run_kernel_decay(const ExperimentConfig& cfg);
// Writes the Morrey-Campanato maximal profile of a seeded random signal to
// cfg.out_path (CSV) and reports summary statistics.
Report run_dump_profile(const ExperimentConfig& cfg);

// Dispatches on cfg.experiment (the CLI subcommand spelling).
Report run_experiment(const ExperimentConfig& cfg);

// Canonical serializations: stable key order, shortest round-trip floats, so
// re-emitting the same report is byte-identical.
std::string report_json(const Report& report);
std::string report_csv(const Report& report);

// Writes the report to `path` in `format` ("json" or "csv"). I/O errors throw
// std::runtime_error naming the path.
void emit_report(const Report& report, const std::string& path, const std::string& format);

}  // namespace lpk
