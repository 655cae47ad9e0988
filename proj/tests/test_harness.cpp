#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghznet/harness.hpp"

using namespace ghznet;
using nlohmann::ordered_json;

namespace {

int run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"ghznet"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("identical plans produce byte-identical reports") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::parity;
  plan.n = 3;
  plan.inputs = "100";
  plan.trials = 500;
  plan.seed = 7;
  const ExperimentResult a = run_experiment(plan);
  const ExperimentResult b = run_experiment(plan);
  REQUIRE(a.json_lines.size() == b.json_lines.size());
  for (std::size_t i = 0; i < a.json_lines.size(); ++i) CHECK(a.json_lines[i] == b.json_lines[i]);
  CHECK(a.csv_rows == b.csv_rows);

  ExperimentPlan reseeded = plan;
  reseeded.seed = 8;
  reseeded.epsilon = 0.4;
  reseeded.junk = "psi-minus";
  const ExperimentResult c = run_experiment(reseeded);
  CHECK(a.json_lines[0] != c.json_lines[0]);
}

TEST_CASE("ideal parity experiment is deterministic and passes") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::parity;
  plan.n = 3;
  plan.inputs = "100";
  plan.trials = 1000;
  plan.seed = 7;
  const ExperimentResult r = run_experiment(plan);
  CHECK(r.pass);
  CHECK(r.estimate == 1.0);  // Pr[y = 1] for odd-parity inputs
  CHECK(r.trials == 1000);
  REQUIRE(r.json_lines.size() == 2);  // both window edges
}

TEST_CASE("report lines follow the schema") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::veto;
  plan.n = 3;
  plan.S = 5;
  plan.inputs = "100";
  plan.trials = 400;
  plan.seed = 11;
  const ExperimentResult r = run_experiment(plan);
  REQUIRE(!r.json_lines.empty());
  const ordered_json j = ordered_json::parse(r.json_lines[0]);
  const std::vector<std::string> want_prefix = {"experiment", "params", "estimate", "stderr",
                                                "ci99",       "bound",  "relation", "pass",
                                                "trials",     "seed",   "rng",      "wall_time_ms"};
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() >= want_prefix.size());
  for (std::size_t i = 0; i < want_prefix.size(); ++i) CHECK(keys[i] == want_prefix[i]);
  CHECK(j["experiment"] == "veto");
  CHECK(j["rng"] == "splitmix64-v1");
  CHECK(j["wall_time_ms"] == 0);  // canonical reports carry no timing
  CHECK(j["ci99"].is_array());
  CHECK(j["bound"].get<double>() == doctest::Approx(1.0 - 1.0 / 32.0));
  CHECK(r.csv_header.rfind("experiment,params,", 0) == 0);
  REQUIRE(r.csv_rows.size() == r.json_lines.size());
  CHECK(r.csv_rows[0].rfind("veto,", 0) == 0);
}

TEST_CASE("noisy no-wisher veto reports a null bound and passes vacuously") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::veto;
  plan.n = 3;
  plan.S = 3;
  plan.inputs = "000";
  plan.trials = 50;
  plan.epsilon = 0.3;
  const ExperimentResult r = run_experiment(plan);
  const ordered_json j = ordered_json::parse(r.json_lines[0]);
  CHECK(j["bound"].is_null());
  CHECK(r.pass);
}

TEST_CASE("self-test experiment covers the exact expectation") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::selftest;
  plan.n = 3;
  plan.trials = 20000;
  plan.epsilon = 0.4;
  plan.junk = "pair:001:+";
  plan.threshold = 1.0;
  plan.seed = 5;
  const ExperimentResult r = run_experiment(plan);
  CHECK(r.pass);
  REQUIRE(r.bound.has_value());
  CHECK(*r.bound == doctest::Approx(3.6).epsilon(1e-9));
}

TEST_CASE("notify and collision experiments meet their ideal targets") {
  {
    ExperimentPlan plan;
    plan.kind = ExperimentKind::notify;
    plan.n = 5;
    plan.S = 4;
    plan.sender = 2;
    plan.receiver = 4;
    plan.trials = 3000;
    plan.seed = 1;
    const ExperimentResult r = run_experiment(plan);
    CHECK(r.pass);
  }
  {
    ExperimentPlan plan;
    plan.kind = ExperimentKind::collision;
    plan.n = 5;
    plan.S = 6;
    plan.inputs = "10010";
    plan.trials = 2000;
    plan.seed = 2;
    const ExperimentResult r = run_experiment(plan);
    CHECK(r.pass);
    const ordered_json j = ordered_json::parse(r.json_lines[0]);
    CHECK(j["expected_verdict"] == 2);
  }
}

TEST_CASE("authenticate experiment flags tampering") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::authenticate;
  plan.n = 5;
  plan.S = 3;
  plan.trials = 300;
  plan.seed = 9;
  const ExperimentResult honest = run_experiment(plan);
  CHECK(honest.pass);
  CHECK(honest.estimate == 0.0);

  plan.tamper = 3;
  const ExperimentResult tampered = run_experiment(plan);
  CHECK(tampered.pass);
  CHECK(tampered.estimate == 1.0);
}

TEST_CASE("ideal aeg pipeline yields perfect pairs under the trivial bound") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::aeg;
  plan.n = 5;
  plan.S = 3;
  plan.trials = 400;
  plan.max_reps = 64;
  plan.seed = 13;
  const ExperimentResult r = run_experiment(plan);
  CHECK(r.pass);
  REQUIRE(r.bound.has_value());
  CHECK(*r.bound == 1.0);
  const ordered_json j = ordered_json::parse(r.json_lines[0]);
  CHECK(j["min_success_fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["abort_verification"] == 0);
}

TEST_CASE("guess experiment reproduces the printed bound example") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::guess;
  plan.n = 5;
  plan.k = 2;
  plan.epsilon = 0.04;
  const ExperimentResult r = run_experiment(plan);
  CHECK(r.pass);
  REQUIRE(r.bound.has_value());
  CHECK(*r.bound == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("bounds sweep emits one line per grid point") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::bounds_sweep;
  plan.n = 5;
  plan.S = 3;
  plan.epsilons = {0.0, 0.5};
  plan.ks = {2, 5};
  const ExperimentResult r = run_experiment(plan);
  CHECK(r.pass);
  CHECK(r.json_lines.size() == 4);
  const ordered_json j = ordered_json::parse(r.json_lines[3]);
  CHECK(j["params"]["epsilon"] == 0.5);
  CHECK(j["params"]["k"] == 5);
  CHECK(j["guessing_bound"].get<double>() == doctest::Approx(0.2 + std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("every subcommand exits 0 on a small valid run") {
  CHECK(run_cli({"spectrum", "--n", "3"}) == 0);
  CHECK(run_cli({"lr-bound", "--n", "3"}) == 0);
  CHECK(run_cli({"selftest", "--n", "3", "--trials", "200", "--threshold", "0.5"}) == 0);
  CHECK(run_cli({"parity", "--n", "3", "--inputs", "110", "--trials", "50"}) == 0);
  CHECK(run_cli({"veto", "--n", "3", "--S", "3", "--inputs", "010", "--trials", "2000",
                 "--seed", "31"}) == 0);
  CHECK(run_cli({"notify", "--n", "3", "--S", "3", "--sender", "1", "--receiver", "3",
                 "--trials", "2000", "--seed", "32"}) == 0);
  CHECK(run_cli({"authenticate", "--n", "3", "--S", "3", "--trials", "50"}) == 0);
  CHECK(run_cli({"collision", "--n", "3", "--S", "3", "--inputs", "010", "--trials", "2000",
                 "--seed", "33"}) == 0);
  CHECK(run_cli({"aeg", "--n", "3", "--S", "2", "--trials", "200", "--max-reps", "64"}) == 0);
  CHECK(run_cli({"guess", "--n", "3", "--k", "2", "--delta", "0.05", "--junk", "psi-minus"}) ==
        0);
  CHECK(run_cli({"bounds-sweep", "--n", "3", "--S", "2"}) == 0);
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("run_experiment validates its plan") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::parity;
  plan.n = 4;
  plan.inputs = "1000";
  CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
  plan.n = 3;
  plan.inputs = "100";
  plan.trials = 0;
  CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
  plan.trials = 10;
  plan.epsilon = -0.5;
  CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
}

TEST_CASE("cli exit codes follow the contract") {
  // pass
  CHECK(run_cli({"spectrum", "--n", "3"}) == 0);
  // usage errors
  CHECK(run_cli({"parity", "--n", "4", "--inputs", "1000"}) == 2);
  CHECK(run_cli({"parity", "--n", "3"}) == 2);  // missing --inputs
  CHECK(run_cli({"nonsense"}) == 2);
  CHECK(run_cli({"guess", "--n", "5", "--k", "9"}) == 2);
  CHECK(run_cli({"selftest", "--n", "3", "--junk", "bogus", "--epsilon", "0.1", "--trials",
                 "100"}) == 2);
  // bound violation: mid-eigenspace junk always yields the correct parity,
  // pushing the success rate above the printed upper edge (exit 1).
  CHECK(run_cli({"parity", "--n", "5", "--epsilon", "0.4", "--junk", "mid-eig", "--inputs",
                 "10000", "--trials", "2000", "--seed", "5"}) == 1);
}

TEST_CASE("cli writes reports and transcripts with trailing newlines") {
  const std::string report_path = "/tmp/ghznet_test_report.json";
  const std::string transcript_path = "/tmp/ghznet_test_transcript.jsonl";
  std::remove(report_path.c_str());
  std::remove(transcript_path.c_str());
  CHECK(run_cli({"parity", "--n", "3", "--inputs", "110", "--trials", "50", "--seed", "3",
                 "--out", report_path.c_str(), "--transcript", transcript_path.c_str()}) == 0);
  const std::string report = slurp(report_path);
  REQUIRE(!report.empty());
  CHECK(report.back() == '\n');
  CHECK(report.find("\"experiment\":\"parity\"") != std::string::npos);
  const std::string transcript = slurp(transcript_path);
  REQUIRE(!transcript.empty());
  CHECK(transcript.back() == '\n');
  CHECK(transcript.rfind("{\"seq\":0,", 0) == 0);

  // Re-running the same invocation reproduces the bytes exactly.
  const std::string second_path = "/tmp/ghznet_test_report2.json";
  CHECK(run_cli({"parity", "--n", "3", "--inputs", "110", "--trials", "50", "--seed", "3",
                 "--out", second_path.c_str()}) == 0);
  CHECK(slurp(second_path) == report);

  // CSV format writes a header and one row per report line.
  const std::string csv_path = "/tmp/ghznet_test_report.csv";
  CHECK(run_cli({"veto", "--n", "3", "--S", "4", "--inputs", "010", "--trials", "50", "--seed",
                 "4", "--format", "csv", "--out", csv_path.c_str()}) == 0);
  const std::string csv = slurp(csv_path);
  CHECK(csv.rfind("experiment,params,", 0) == 0);
  CHECK(csv.back() == '\n');
}

TEST_CASE("lr-bound subcommand matches the enumerated maximum") {
  ExperimentPlan plan;
  plan.kind = ExperimentKind::lr_bound;
  plan.n = 7;
  const ExperimentResult r = run_experiment(plan);
  CHECK(r.pass);
  CHECK(r.estimate == 6.0);
  REQUIRE(r.bound.has_value());
  CHECK(*r.bound == 6.0);
}
