// Harness contracts: parameter gates with named constraints, config-file
// parsing, report determinism and shape, the random family generator, and the
// CLI binary's exit-code protocol.

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpk/harness.hpp"
#include "lpk/io.hpp"

using namespace lpk;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig small_rf_config() {
  ExperimentConfig cfg;
  cfg.experiment = "rf-inequality";
  cfg.n = 256;
  cfg.trials = 3;
  return cfg;
}

}  // namespace

TEST_CASE("validate_params names the violated constraint") {
  ExperimentConfig cfg;
  cfg.experiment = "decomp-check";

  SUBCASE("s outside (-1/2, i]") {
    cfg.s = 2.0;
    cfg.i = 1;
    const std::string msg = thrown_message([&] { validate_params(cfg); });
    CHECK(msg.find("violated constraint: s in (-1/2, i]") != std::string::npos);
  }
  SUBCASE("s at the open lower endpoint") {
    cfg.s = -0.5;
    cfg.i = 1;
    cfg.r = 1;
    const std::string msg = thrown_message([&] { validate_params(cfg); });
    CHECK(msg.find("violated constraint: s in (-1/2, i]") != std::string::npos);
  }
  SUBCASE("r too small") {
    cfg.i = 3;
    cfg.s = 1.0;
    cfg.r = 2;  // needs r > i-1 = 2
    const std::string msg = thrown_message([&] { validate_params(cfg); });
    CHECK(msg.find("violated constraint: r > max{s, i-1}") != std::string::npos);
  }
  SUBCASE("r below s") {
    cfg.i = 1;
    cfg.s = 1.0;
    cfg.r = 1;  // needs r > s = 1
    const std::string msg = thrown_message([&] { validate_params(cfg); });
    CHECK(msg.find("violated constraint: r > max{s, i-1}") != std::string::npos);
  }
  SUBCASE("boundary values that must pass") {
    cfg.i = 1;
    cfg.s = 1.0;
    cfg.r = 2;
    CHECK_NOTHROW(validate_params(cfg));
    cfg.s = -0.49;
    cfg.r = 1;
    CHECK_NOTHROW(validate_params(cfg));
  }
  SUBCASE("basic sanity gates") {
    ExperimentConfig bad = cfg;
    bad.n = 48;
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
    bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
    bad = cfg;
    bad.A = 1.0;
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
    bad = cfg;
    bad.p = 0.5;
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
    bad = cfg;
    bad.period = -1.0;
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
    bad = cfg;
    bad.format = "xml";
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
  }
}

TEST_CASE("load_config_file applies values and rejects unknown keys") {
  const auto good = temp_file("lpk_cfg_good.json");
  write_text(good, R"({
    "experiment": "rf-inequality",
    "n": 512,
    "period": 16.0,
    "seed": 99,
    "trials": 7,
    "intervals": [{"a": 1.0, "b": 2.0}],
    "p": 4.0
  })");
  ExperimentConfig cfg = load_config_file(good.string());
  CHECK(cfg.experiment == "rf-inequality");
  CHECK(cfg.n == 512);
  CHECK(cfg.period == 16.0);
  CHECK(cfg.seed == 99);
  CHECK(cfg.trials == 7);
  CHECK(cfg.p == 4.0);
  REQUIRE(cfg.family.intervals.size() == 1);
  CHECK(cfg.family.intervals[0].a == 1.0);

  const auto bad = temp_file("lpk_cfg_bad.json");
  write_text(bad, R"({"experiment": "decomp-check", "bogus_key": 3})");
  const std::string msg = thrown_message([&] { (void)load_config_file(bad.string()); });
  CHECK(msg.find("unknown key 'bogus_key'") != std::string::npos);

  const auto garbage = temp_file("lpk_cfg_garbage.json");
  write_text(garbage, "not json at all {{{");
  const std::string gmsg = thrown_message([&] { (void)load_config_file(garbage.string()); });
  CHECK(gmsg.find(garbage.filename().string()) != std::string::npos);

  std::filesystem::remove(good);
  std::filesystem::remove(bad);
  std::filesystem::remove(garbage);
}

TEST_CASE("reports are byte-identical across repeated runs") {
  ExperimentConfig cfg = small_rf_config();
  Report a = run_experiment(cfg);
  Report b = run_experiment(cfg);
  CHECK(report_json(a) == report_json(b));
  CHECK(report_csv(a) == report_csv(b));

  // A different seed changes the numbers.
  cfg.seed += 1;
  Report c = run_experiment(cfg);
  CHECK(report_json(a) != report_json(c));
}

TEST_CASE("run_experiment rejects unknown experiments") {
  ExperimentConfig cfg;
  cfg.experiment = "bogus";
  CHECK_THROWS_AS((void)run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("report shape: echo, trials, aggregates, criteria") {
  ExperimentConfig cfg = small_rf_config();
  Report rep = run_experiment(cfg);
  CHECK(rep.schema == "lpk-report-v1");
  CHECK(rep.experiment == "rf-inequality");
  CHECK(!rep.config_echo.empty());
  CHECK(!rep.trials.empty());
  CHECK(!rep.aggregates.empty());
  CHECK(!rep.criteria.empty());
  CHECK(rep.passed());

  // The echo includes every knob in a fixed order; spot the first and last.
  CHECK(rep.config_echo.front().first == "experiment");
  CHECK(rep.config_echo.front().second == "rf-inequality");
  CHECK(rep.config_echo.back().first == "format");

  // CSV: header plus one line per trial record.
  const std::string csv = report_csv(rep);
  const std::size_t lines = std::size_t(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == rep.trials.size() + 1);
}

TEST_CASE("emit_report round trips bytes and names bad paths") {
  ExperimentConfig cfg = small_rf_config();
  Report rep = run_experiment(cfg);

  const auto out = temp_file("lpk_report_test.json");
  emit_report(rep, out.string(), "json");
  const std::string first = read_text(out);
  emit_report(rep, out.string(), "json");
  CHECK(read_text(out) == first);
  CHECK(first == report_json(rep));
  std::filesystem::remove(out);

  const std::string bad_path = "/nonexistent_dir_lpk/report.json";
  const std::string msg = thrown_message([&] { emit_report(rep, bad_path, "json"); });
  CHECK(msg.find("/nonexistent_dir_lpk/report.json") != std::string::npos);
}

TEST_CASE("random interval families are admissible across seeds") {
  SampleGrid grid = make_grid(32.0, 4096);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    IntervalFamily fam = random_interval_family(rng, grid, 8);
    CHECK(!fam.intervals.empty());
    CHECK(fam.intervals.size() <= 8);
    CHECK_NOTHROW(validate_family(fam));
    for (const Interval& I : fam.intervals) {
      CHECK(std::abs(I.a) <= grid.nyquist());
      CHECK(std::abs(I.b) <= grid.nyquist());
      // Long enough to hold a few grid frequencies.
      CHECK(I.len() >= 4.0 * grid.freq_spacing() - 1e-12);
    }
  }
}

TEST_CASE("counterexample experiment insists on a long grid") {
  ExperimentConfig cfg;
  cfg.experiment = "counterexample";
  cfg.period = 1.0;
  cfg.n = 8192;
  cfg.trials = 1;
  CHECK_THROWS_AS((void)run_counterexample(cfg), std::invalid_argument);
}

TEST_CASE("dump-profile writes the profile CSV") {
  ExperimentConfig cfg;
  cfg.experiment = "dump-profile";
  cfg.n = 256;
  cfg.trials = 1;
  const auto out = temp_file("lpk_profile_test.csv");
  cfg.out_path = out.string();
  Report rep = run_dump_profile(cfg);
  CHECK(rep.passed());
  const std::string text = read_text(out);
  CHECK(text.find("index,x,value") != std::string::npos);
  std::filesystem::remove(out);
}

#ifdef LPKIT_BIN_PATH

namespace {

struct CliResult {
  int code = -1;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  const auto err_path = temp_file("lpk_cli_err.txt");
  const std::string cmd =
      std::string(LPKIT_BIN_PATH) + " " + args + " >/dev/null 2>" + err_path.string();
  const int raw = std::system(cmd.c_str());
  CliResult res;
  res.code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  res.err = read_text(err_path);
  std::filesystem::remove(err_path);
  return res;
}

}  // namespace

TEST_CASE("cli exit codes: 0 pass, 1 criteria failure, 2 usage error") {
  REQUIRE(std::filesystem::exists(LPKIT_BIN_PATH));

  // Clean pass (fast, deterministic).
  CHECK(run_cli("shift-lip --n 512").code == 0);
  CHECK(run_cli("--help").code == 0);

  // Criteria failure: smooth3 with a sigma range too short for its decay fit
  // (frozen: lhs slope -3.287 against the -3.4 threshold).
  const auto cfg_path = temp_file("lpk_cli_fail.json");
  write_text(cfg_path,
             R"({"experiment": "kernel-decay", "kernel_profile": "smooth3", "sigma_max": 4})");
  CHECK(run_cli("kernel-decay --config " + cfg_path.string()).code == 1);
  std::filesystem::remove(cfg_path);

  // Usage errors.
  CHECK(run_cli("bogus-subcommand").code == 2);
  CHECK(run_cli("decomp-check --no-such-flag").code == 2);

  // Parameter-gate violation surfaces the named constraint on stderr.
  CliResult gate = run_cli("bound-scan --params i=1,s=2,r=3");
  CHECK(gate.code == 2);
  CHECK(gate.err.find("violated constraint: s in (-1/2, i]") != std::string::npos);
}

#endif  // LPKIT_BIN_PATH
