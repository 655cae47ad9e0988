#include "ghznet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghznet/adversary.hpp"
#include "ghznet/bellcert.hpp"
#include "ghznet/protocols.hpp"
#include "ghznet/qstate.hpp"
#include "ghznet/rng.hpp"
#include "ghznet/source.hpp"

namespace ghznet {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

const char* kKindNames[] = {"spectrum", "lr-bound", "selftest",     "parity",
                            "veto",     "notify",   "authenticate", "collision",
                            "aeg",      "guess",    "bounds-sweep"};

struct Stats {
  double estimate = 0.0;
  double stderr_value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long trials = 0;
};

Stats bernoulli_stats(long successes, long trials) {
  Stats s;
  s.trials = trials;
  s.estimate = trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  if (trials > 1) {
    const double var = s.estimate * (1.0 - s.estimate) * static_cast<double>(trials) /
                       static_cast<double>(trials - 1);
    s.stderr_value = std::sqrt(var / static_cast<double>(trials));
  }
  s.ci_lo = s.estimate - kZ99 * s.stderr_value;
  s.ci_hi = s.estimate + kZ99 * s.stderr_value;
  return s;
}

Stats exact_stats(double value) {
  Stats s;
  s.estimate = value;
  s.ci_lo = value;
  s.ci_hi = value;
  s.trials = 1;
  return s;
}

// Pass rule; deterministic results (stderr 0) get a 1e-9 pad so exact
// equality up to roundoff counts as consistent.
bool check_relation(const Stats& s, const std::optional<double>& bound,
                    const std::string& relation) {
  if (!bound) return true;
  const double pad = s.stderr_value == 0.0 ? 1e-9 : 0.0;
  if (relation == "<=") return s.ci_hi <= *bound + pad;
  if (relation == ">=") return s.ci_lo >= *bound - pad;
  if (relation == "in") return s.ci_lo - pad <= *bound && *bound <= s.ci_hi + pad;
  return true;  // "none"
}

struct ReportLine {
  ordered_json params;
  Stats stats;
  std::optional<double> bound;
  std::string relation = "none";
  bool pass = true;
  ordered_json extras;  // appended after the common keys
};

class ReportBuilder {
 public:
  ReportBuilder(const ExperimentPlan& plan, ExperimentResult& result)
      : plan_(plan), result_(result), start_(std::chrono::steady_clock::now()) {}

  void add(ReportLine line) {
    line.pass = check_relation(line.stats, line.bound, line.relation);
    lines_.push_back(std::move(line));
  }

  void finish() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    result_.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    result_.experiment = experiment_name(plan_.kind);
    result_.pass = std::all_of(lines_.begin(), lines_.end(), [](auto& l) { return l.pass; });
    if (!lines_.empty()) {
      const ReportLine& first = lines_.front();
      result_.estimate = first.stats.estimate;
      result_.stderr_value = first.stats.stderr_value;
      result_.ci99_lo = first.stats.ci_lo;
      result_.ci99_hi = first.stats.ci_hi;
      result_.bound = first.bound;
      result_.relation = first.relation;
      result_.trials = first.stats.trials;
    }
    const long serialized_ms = plan_.include_timing ? result_.wall_time_ms : 0;
    result_.csv_header =
        "experiment,params,estimate,stderr,ci99_lo,ci99_hi,bound,relation,pass,trials,seed,rng,"
        "wall_time_ms";
    for (const ReportLine& line : lines_) {
      ordered_json j;
      j["experiment"] = experiment_name(plan_.kind);
      j["params"] = line.params;
      j["estimate"] = line.stats.estimate;
      j["stderr"] = line.stats.stderr_value;
      j["ci99"] = {line.stats.ci_lo, line.stats.ci_hi};
      if (line.bound)
        j["bound"] = *line.bound;
      else
        j["bound"] = nullptr;
      j["relation"] = line.relation;
      j["pass"] = line.pass;
      j["trials"] = line.stats.trials;
      j["seed"] = plan_.seed;
      j["rng"] = std::string(kRngFamily);
      j["wall_time_ms"] = serialized_ms;
      for (auto& [key, value] : line.extras.items()) j[key] = value;
      result_.json_lines.push_back(j.dump());

      std::ostringstream csv;
      std::string params_flat;
      for (auto& [key, value] : line.params.items()) {
        if (!params_flat.empty()) params_flat += ';';
        params_flat += key;
        params_flat += '=';
        params_flat += value.is_string() ? value.get<std::string>() : value.dump();
      }
      csv << experiment_name(plan_.kind) << ',' << params_flat << ','
          << ordered_json(line.stats.estimate).dump() << ','
          << ordered_json(line.stats.stderr_value).dump() << ','
          << ordered_json(line.stats.ci_lo).dump() << ',' << ordered_json(line.stats.ci_hi).dump()
          << ',' << (line.bound ? ordered_json(*line.bound).dump() : "") << ',' << line.relation
          << ',' << (line.pass ? "true" : "false") << ',' << line.stats.trials << ',' << plan_.seed
          << ',' << kRngFamily << ',' << serialized_ms;
      result_.csv_rows.push_back(csv.str());
    }
  }

 private:
  const ExperimentPlan& plan_;
  ExperimentResult& result_;
  std::chrono::steady_clock::time_point start_;
  std::vector<ReportLine> lines_;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::vector<int> parse_bits(const std::string& s, int n, const char* what) {
  require(s.size() == static_cast<std::size_t>(n),
          std::string(what) + ": --inputs must have exactly n bits");
  std::vector<int> bits;
  bits.reserve(s.size());
  for (char c : s) {
    require(c == '0' || c == '1', std::string(what) + ": inputs must be 0/1 characters");
    bits.push_back(c - '0');
  }
  return bits;
}

NoiseSpec noise_from_plan(const ExperimentPlan& plan) {
  if (plan.delta) {
    if (*plan.delta == 0.0) return NoiseSpec::from_delta(plan.n, 0.0, {});
    return NoiseSpec::from_delta(plan.n, *plan.delta, junk_from_name(plan.n, plan.junk));
  }
  if (plan.epsilon == 0.0) return NoiseSpec::from_delta(plan.n, 0.0, {});
  return NoiseSpec::from_target_epsilon(plan.n, plan.epsilon, junk_from_name(plan.n, plan.junk));
}

NetworkConfig config_from_plan(const ExperimentPlan& plan,
                               std::shared_ptr<const StateSource> source) {
  NetworkConfig cfg;
  cfg.n = plan.n;
  cfg.security_parameter = plan.S;
  cfg.source = std::move(source);
  cfg.rng_seed = plan.seed;
  return cfg;
}

ordered_json noise_params(const ExperimentPlan& plan, const NoiseSpec& spec) {
  ordered_json p;
  p["epsilon"] = spec.epsilon();
  p["delta"] = spec.delta;
  if (spec.delta > 0.0) p["junk"] = plan.junk;
  return p;
}

// --- experiment bodies ----------------------------------------------------

void run_spectrum(const ExperimentPlan& plan, ReportBuilder& builder) {
  const SpectrumReport report = spectrum(build_bell_operator(plan.n));
  ReportLine line;
  line.params["n"] = plan.n;
  line.stats = exact_stats(report.eigenvalues.back());
  line.bound = static_cast<double>(plan.n + 1);
  line.relation = "in";
  ordered_json mult;
  for (auto [value, count] : report.multiplicities) mult[std::to_string(value)] = count;
  line.extras["multiplicities"] = mult;
  line.extras["lattice_ok"] = report.lattice_ok;
  line.extras["extremal_nondegenerate"] = report.extremal_nondegenerate;
  line.extras["extremal_fidelity"] = report.extremal_eigenvector_fidelity_to_ghz;
  builder.add(std::move(line));

  ReportLine checks;
  checks.params["n"] = plan.n;
  checks.stats = exact_stats(report.lattice_ok && report.extremal_nondegenerate &&
                                     report.extremal_eigenvector_fidelity_to_ghz >= 1.0 - 1e-9
                                 ? 1.0
                                 : 0.0);
  checks.bound = 1.0;
  checks.relation = "in";
  checks.extras["check"] = "lattice+nondegeneracy+fidelity";
  builder.add(std::move(checks));
}

void run_lr_bound(const ExperimentPlan& plan, ReportBuilder& builder) {
  const LrResult lr = lr_max(plan.n);
  ReportLine line;
  line.params["n"] = plan.n;
  line.stats = exact_stats(static_cast<double>(lr.max_value));
  line.bound = static_cast<double>(plan.n - 1);
  line.relation = "in";
  std::string xs, ys;
  for (auto [x, y] : lr.assignment) {
    xs.push_back(x > 0 ? '+' : '-');
    ys.push_back(y > 0 ? '+' : '-');
  }
  line.extras["witness_x"] = xs;
  line.extras["witness_y"] = ys;
  builder.add(std::move(line));
}

void run_selftest(const ExperimentPlan& plan, ReportBuilder& builder) {
  const NoiseSpec spec = noise_from_plan(plan);
  NoisyGhzSource source(spec);
  SplitMix64 rng = SplitMix64::for_stream(plan.seed, 0);
  const SelfTestVerdict verdict = self_test(source, plan.n, plan.trials, plan.threshold, rng);

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["rounds"] = plan.trials;
  line.params["threshold"] = plan.threshold;
  line.params.update(noise_params(plan, spec));
  // Per-round values are +-1, so the sample variance is (n+1)^2 (1 - m^2)
  // with m the mean recorded value.
  const double m = verdict.estimate / static_cast<double>(plan.n + 1);
  const double var = std::max(0.0, 1.0 - m * m);
  line.stats.estimate = verdict.estimate;
  line.stats.trials = verdict.rounds_used;
  line.stats.stderr_value = static_cast<double>(plan.n + 1) *
                            std::sqrt(var / static_cast<double>(verdict.rounds_used));
  line.stats.ci_lo = line.stats.estimate - kZ99 * line.stats.stderr_value;
  line.stats.ci_hi = line.stats.estimate + kZ99 * line.stats.stderr_value;
  line.bound = source.exact_expectation();
  line.relation = "in";
  line.extras["epsilon_hat"] = verdict.epsilon_hat;
  line.extras["accepted"] = verdict.accepted;
  builder.add(std::move(line));
}

void run_parity_experiment(const ExperimentPlan& plan, ReportBuilder& builder,
                           ExperimentResult& result) {
  const std::vector<int> inputs = parse_bits(plan.inputs, plan.n, "parity");
  int expected = 0;
  for (int b : inputs) expected ^= b;
  const NoiseSpec spec = noise_from_plan(plan);
  const NetworkConfig cfg = config_from_plan(plan, make_noisy_source(spec));

  long successes = 0;
  for (long t = 0; t < plan.trials; ++t) {
    SplitMix64 rng = SplitMix64::for_stream(plan.seed, static_cast<std::uint64_t>(t));
    ParityResult r = run_parity(cfg, inputs, {}, rng);
    if (r.y == expected) ++successes;
    if (t == 0) result.transcript_jsonl = to_jsonl(r.transcript);
  }

  const auto [lo, hi] = parity_success_bounds(plan.n, spec.epsilon());
  const Stats stats = bernoulli_stats(successes, plan.trials);
  for (const auto& [bound, relation] : {std::pair{lo, ">="}, std::pair{hi, "<="}}) {
    ReportLine line;
    line.params["n"] = plan.n;
    line.params["inputs"] = plan.inputs;
    line.params["trials"] = plan.trials;
    line.params.update(noise_params(plan, spec));
    line.stats = stats;
    line.bound = bound;
    line.relation = relation;
    line.extras["expected_parity"] = expected;
    builder.add(std::move(line));
  }
}

void run_veto(const ExperimentPlan& plan, ReportBuilder& builder, ExperimentResult& result) {
  const std::vector<int> inputs = parse_bits(plan.inputs, plan.n, "veto");
  const bool any_active = std::any_of(inputs.begin(), inputs.end(), [](int b) { return b == 1; });
  const NoiseSpec spec = noise_from_plan(plan);
  const NetworkConfig cfg = config_from_plan(plan, make_noisy_source(spec));

  long vetoes = 0;
  for (long t = 0; t < plan.trials; ++t) {
    SplitMix64 rng = SplitMix64::for_stream(plan.seed, static_cast<std::uint64_t>(t));
    LogicalOrResult r = run_logical_or(cfg, inputs, rng);
    if (r.V == 1) ++vetoes;
    if (t == 0) result.transcript_jsonl = to_jsonl(r.transcript);
  }

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["S"] = plan.S;
  line.params["inputs"] = plan.inputs;
  line.params["trials"] = plan.trials;
  line.params.update(noise_params(plan, spec));
  line.stats = bernoulli_stats(vetoes, plan.trials);
  // With at least one active agent the per-round parity is a fair coin even
  // under noise (the active coin masks any parity error), so Pr[V=1] is
  // exactly 1 - 2^-S. With no active agent the value is noise-dependent and
  // only pinned for a perfect resource.
  if (any_active)
    line.bound = 1.0 - std::pow(2.0, -plan.S);
  else if (spec.epsilon() == 0.0)
    line.bound = 0.0;
  line.relation = "in";
  builder.add(std::move(line));
}

void run_notify(const ExperimentPlan& plan, ReportBuilder& builder, ExperimentResult& result) {
  require(plan.sender != plan.receiver, "notify: sender and receiver must differ");
  const NoiseSpec spec = noise_from_plan(plan);
  const NetworkConfig cfg = config_from_plan(plan, make_noisy_source(spec));

  long notified = 0;
  long false_beliefs = 0;
  for (long t = 0; t < plan.trials; ++t) {
    SplitMix64 rng = SplitMix64::for_stream(plan.seed, static_cast<std::uint64_t>(t));
    NotificationResult r =
        run_notification(cfg, AgentId{plan.sender}, AgentId{plan.receiver}, rng);
    if (r.beliefs[static_cast<std::size_t>(plan.receiver - 1)] == 1) ++notified;
    for (int i = 1; i <= plan.n; ++i)
      if (i != plan.receiver && r.beliefs[static_cast<std::size_t>(i - 1)] == 1) ++false_beliefs;
    if (t == 0) result.transcript_jsonl = to_jsonl(r.transcript);
  }

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["S"] = plan.S;
  line.params["sender"] = plan.sender;
  line.params["receiver"] = plan.receiver;
  line.params["trials"] = plan.trials;
  line.params.update(noise_params(plan, spec));
  line.stats = bernoulli_stats(notified, plan.trials);
  line.bound = 1.0 - std::pow(2.0, -plan.S);
  line.relation = "in";
  const double false_rate = static_cast<double>(false_beliefs) /
                            static_cast<double>(plan.trials * (plan.n - 1));
  line.extras["false_belief_rate"] = false_rate;
  builder.add(std::move(line));

  if (spec.epsilon() == 0.0) {
    // A perfect resource never notifies a bystander.
    ReportLine fp;
    fp.params = ordered_json{{"check", "false_beliefs"}};
    fp.stats = bernoulli_stats(false_beliefs, plan.trials * (plan.n - 1));
    fp.bound = 0.0;
    fp.relation = "in";
    builder.add(std::move(fp));
  }
}

void run_authenticate(const ExperimentPlan& plan, ReportBuilder& builder,
                      ExperimentResult& result) {
  require(plan.sender != plan.receiver, "authenticate: sender and receiver must differ");
  if (plan.tamper)
    require(*plan.tamper >= 1 && *plan.tamper <= plan.n && *plan.tamper != plan.sender,
            "authenticate: --tamper must name an agent other than the sender");
  const NoiseSpec spec = noise_from_plan(plan);
  const NetworkConfig cfg = config_from_plan(plan, make_noisy_source(spec));

  long aborts = 0;
  long mismatch_total = 0;
  for (long t = 0; t < plan.trials; ++t) {
    SplitMix64 rng = SplitMix64::for_stream(plan.seed, static_cast<std::uint64_t>(t));
    NotificationResult notif =
        run_notification(cfg, AgentId{plan.sender}, AgentId{plan.receiver}, rng);
    if (plan.tamper)  // a dishonest agent replays a flipped first-round value
      notif.local_parities[static_cast<std::size_t>(*plan.tamper - 1)][0] ^= 1;
    AuthenticationResult auth =
        run_authentication(cfg, notif, AgentId{plan.sender}, plan.tolerance, rng);
    if (auth.abort) ++aborts;
    mismatch_total += auth.mismatches;
    if (t == 0) result.transcript_jsonl = to_jsonl(auth.transcript);
  }

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["S"] = plan.S;
  line.params["sender"] = plan.sender;
  line.params["receiver"] = plan.receiver;
  line.params["tolerance"] = plan.tolerance;
  if (plan.tamper) line.params["tamper"] = *plan.tamper;
  line.params["trials"] = plan.trials;
  line.params.update(noise_params(plan, spec));
  line.stats = bernoulli_stats(aborts, plan.trials);
  if (spec.epsilon() == 0.0) line.bound = plan.tamper ? 1.0 : 0.0;
  line.relation = "in";
  line.extras["mean_mismatches"] =
      static_cast<double>(mismatch_total) / static_cast<double>(plan.trials);
  builder.add(std::move(line));
}

void run_collision(const ExperimentPlan& plan, ReportBuilder& builder,
                   ExperimentResult& result) {
  const std::vector<int> wish = parse_bits(plan.inputs, plan.n, "collision");
  const int wishers = static_cast<int>(std::count(wish.begin(), wish.end(), 1));
  const int expected_v = wishers == 0 ? 0 : (wishers == 1 ? 1 : 2);
  const NoiseSpec spec = noise_from_plan(plan);
  const NetworkConfig cfg = config_from_plan(plan, make_noisy_source(spec));

  long counts[3] = {0, 0, 0};
  for (long t = 0; t < plan.trials; ++t) {
    SplitMix64 rng = SplitMix64::for_stream(plan.seed, static_cast<std::uint64_t>(t));
    CollisionResult r = run_collision_detection(cfg, wish, rng);
    ++counts[r.V];
    if (t == 0) result.transcript_jsonl = to_jsonl(r.transcript);
  }

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["S"] = plan.S;
  line.params["inputs"] = plan.inputs;
  line.params["trials"] = plan.trials;
  line.params.update(noise_params(plan, spec));
  line.stats = bernoulli_stats(counts[expected_v], plan.trials);
  if (spec.epsilon() == 0.0) {
    if (wishers == 0)
      line.bound = 1.0;
    else if (wishers == 1)  // fails only when every one of the wisher's coins is 0
      line.bound = 1.0 - std::pow(2.0, -plan.S);
  }
  line.relation = "in";
  line.extras["expected_verdict"] = expected_v;
  line.extras["pr_v0"] = static_cast<double>(counts[0]) / static_cast<double>(plan.trials);
  line.extras["pr_v1"] = static_cast<double>(counts[1]) / static_cast<double>(plan.trials);
  line.extras["pr_v2"] = static_cast<double>(counts[2]) / static_cast<double>(plan.trials);
  builder.add(std::move(line));
}

void run_aeg_experiment(const ExperimentPlan& plan, ReportBuilder& builder,
                        ExperimentResult& result) {
  require(plan.sender != plan.receiver, "aeg: sender and receiver must differ");
  const NoiseSpec spec = noise_from_plan(plan);
  const NetworkConfig cfg = config_from_plan(plan, make_noisy_source(spec));
  const QuantumRegister target = bell_phi_plus();

  long success = 0;
  long abort_notification = 0, abort_authentication = 0;
  long abort_timeout = 0, abort_verification = 0, abort_final = 0;
  double fidelity_sum = 0.0;
  double fidelity_min = 1.0;
  AegOptions options;
  options.max_repetitions = plan.max_reps;
  options.verification_tolerance = plan.verify_tolerance;

  for (long t = 0; t < plan.trials; ++t) {
    SplitMix64 rng = SplitMix64::for_stream(plan.seed, static_cast<std::uint64_t>(t));
    NotificationResult notif =
        run_notification(cfg, AgentId{plan.sender}, AgentId{plan.receiver}, rng);
    if (notif.beliefs[static_cast<std::size_t>(plan.receiver - 1)] != 1) {
      ++abort_notification;
      continue;
    }
    AuthenticationResult auth =
        run_authentication(cfg, notif, AgentId{plan.sender}, plan.tolerance, rng);
    if (auth.abort) {
      ++abort_authentication;
      continue;
    }
    AegResult r = run_aeg(cfg, AgentId{plan.sender}, AgentId{plan.receiver}, options, rng);
    if (t == 0) result.transcript_jsonl = to_jsonl(r.transcript);
    switch (r.status) {
      case AegStatus::success: {
        ++success;
        const double f = fidelity(*r.pair_state, target);
        fidelity_sum += f;
        fidelity_min = std::min(fidelity_min, f);
        break;
      }
      case AegStatus::abort_timeout:
        ++abort_timeout;
        break;
      case AegStatus::abort_verification:
        ++abort_verification;
        break;
      case AegStatus::abort_final_parity:
        ++abort_final;
        break;
    }
  }

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["S"] = plan.S;
  line.params["sender"] = plan.sender;
  line.params["receiver"] = plan.receiver;
  line.params["max_reps"] = plan.max_reps;
  if (plan.verify_tolerance > 0.0) line.params["verify_tolerance"] = plan.verify_tolerance;
  line.params["trials"] = plan.trials;
  line.params.update(noise_params(plan, spec));
  line.stats = bernoulli_stats(success, plan.trials);
  line.bound = non_abort_bound(plan.n, plan.S, spec.epsilon());
  line.relation = "<=";
  line.extras["abort_notification"] = abort_notification;
  line.extras["abort_authentication"] = abort_authentication;
  line.extras["abort_timeout"] = abort_timeout;
  line.extras["abort_verification"] = abort_verification;
  line.extras["abort_final_parity"] = abort_final;
  line.extras["mean_success_fidelity"] =
      success > 0 ? fidelity_sum / static_cast<double>(success) : 0.0;
  line.extras["min_success_fidelity"] = success > 0 ? fidelity_min : 0.0;
  builder.add(std::move(line));
}

void run_guess(const ExperimentPlan& plan, ReportBuilder& builder) {
  require(plan.k >= 2 && plan.k <= plan.n, "guess: --k must lie in [2, n]");
  const NoiseSpec spec = noise_from_plan(plan);
  std::vector<int> honest(static_cast<std::size_t>(plan.k));
  for (int i = 0; i < plan.k; ++i) honest[static_cast<std::size_t>(i)] = i + 1;
  const GuessReport report = sender_guess_attack(plan.n, spec, honest);

  ReportLine line;
  line.params["n"] = plan.n;
  line.params["k"] = plan.k;
  line.params.update(noise_params(plan, spec));
  line.stats = exact_stats(
      std::max(report.pgm_success, report.helstrom_success.value_or(0.0)));
  line.bound = report.guess_bound;
  line.relation = "<=";
  line.extras["pgm_success"] = report.pgm_success;
  if (report.helstrom_success) line.extras["helstrom_success"] = *report.helstrom_success;
  line.extras["state_epsilon"] = report.epsilon;
  line.extras["pairwise_trace_distances"] = report.pairwise_trace_distances;
  builder.add(std::move(line));
}

void run_bounds_sweep(const ExperimentPlan& plan, ReportBuilder& builder) {
  std::vector<double> epsilons = plan.epsilons;
  if (epsilons.empty()) epsilons = {0.0, 0.04, 0.1, 0.25, 0.4, 0.5};
  std::vector<int> ks = plan.ks;
  if (ks.empty()) ks = {2, 3, 5};

  for (double eps : epsilons)
    for (int k : ks) {
      ReportLine line;
      line.params["n"] = plan.n;
      line.params["S"] = plan.S;
      line.params["epsilon"] = eps;
      line.params["k"] = k;
      line.stats = exact_stats(non_abort_bound(plan.n, plan.S, eps));
      line.relation = "none";
      const auto [plo, phi] = parity_success_bounds(plan.n, eps);
      const auto [dlo, dhi] = fidelity_deficit_bounds(eps, plan.n);
      line.extras["parity_success_lo"] = plo;
      line.extras["parity_success_hi"] = phi;
      line.extras["non_abort_bound"] = non_abort_bound(plan.n, plan.S, eps);
      line.extras["guessing_bound"] = guessing_bound(k, eps);
      line.extras["deficit_lo"] = dlo;
      line.extras["deficit_hi"] = dhi;
      builder.add(std::move(line));
    }
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

namespace {

std::string report_body(const ExperimentResult& result, ReportFormat format) {
  std::ostringstream body;
  if (format == ReportFormat::json) {
    for (const std::string& line : result.json_lines) body << line << '\n';
  } else {
    body << result.csv_header << '\n';
    for (const std::string& row : result.csv_rows) body << row << '\n';
  }
  return body.str();
}

void write_file(const std::string& path, const std::string& body, const char* what) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(std::string("cannot open ") + what + " file '" + path + "'");
  file << body;
  file.flush();
  if (!file.good())
    throw std::runtime_error(std::string("failed writing ") + what + " file '" + path + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  require(plan.n >= 3 && plan.n % 2 == 1, "n must be odd and >= 3");
  require(plan.S >= 1, "S must be >= 1");
  require(plan.trials >= 1, "trials must be >= 1");
  require(plan.epsilon >= 0.0, "epsilon must be >= 0");

  ExperimentResult result;
  ReportBuilder builder(plan, result);
  switch (plan.kind) {
    case ExperimentKind::spectrum:
      run_spectrum(plan, builder);
      break;
    case ExperimentKind::lr_bound:
      run_lr_bound(plan, builder);
      break;
    case ExperimentKind::selftest:
      run_selftest(plan, builder);
      break;
    case ExperimentKind::parity:
      run_parity_experiment(plan, builder, result);
      break;
    case ExperimentKind::veto:
      run_veto(plan, builder, result);
      break;
    case ExperimentKind::notify:
      run_notify(plan, builder, result);
      break;
    case ExperimentKind::authenticate:
      run_authenticate(plan, builder, result);
      break;
    case ExperimentKind::collision:
      run_collision(plan, builder, result);
      break;
    case ExperimentKind::aeg:
      run_aeg_experiment(plan, builder, result);
      break;
    case ExperimentKind::guess:
      run_guess(plan, builder);
      break;
    case ExperimentKind::bounds_sweep:
      run_bounds_sweep(plan, builder);
      break;
  }
  builder.finish();
  if (!plan.output_path.empty())
    write_file(plan.output_path, report_body(result, plan.format), "report");
  if (!plan.transcript_path.empty()) {
    if (result.transcript_jsonl.empty())
      throw std::invalid_argument("this experiment kind produces no transcript");
    write_file(plan.transcript_path, result.transcript_jsonl, "transcript");
  }
  return result;
}

namespace {

int emit(const ExperimentResult& result, ReportFormat format) {
  std::cout << report_body(result, format);
  std::cerr << "experiment=" << result.experiment << " pass=" << (result.pass ? "true" : "false")
            << " wall_time_ms=" << result.wall_time_ms << '\n';
  return result.pass ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"ghznet: simulate GHZ-resource anonymous-communication protocols and check the "
               "certification and security bounds they obey"};
  app.require_subcommand(1);

  ExperimentPlan plan;
  std::string format = "json";
  std::string epsilons_csv, ks_csv;

  auto add_common = [&](CLI::App* cmd, bool with_noise, bool with_trials) {
    cmd->add_option("--n", plan.n, "agent count (odd, >= 3)");
    cmd->add_option("--seed", plan.seed, "experiment seed");
    cmd->add_option("--out", plan.output_path, "write the report to this file");
    cmd->add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--timing", plan.include_timing,
                  "serialize measured wall time (breaks byte-identical reports)");
    if (with_noise) {
      cmd->add_option("--epsilon", plan.epsilon, "target Bell-violation deficit");
      cmd->add_option("--delta", plan.delta, "resource deficit weight (overrides --epsilon)");
      cmd->add_option("--junk", plan.junk,
                      "junk spec: psi-minus, mid-eig, pair:<bits>[:+|-], comp:<bits>");
    }
    if (with_trials) cmd->add_option("--trials", plan.trials, "Monte Carlo trials");
  };
  auto add_protocol = [&](CLI::App* cmd) {
    cmd->add_option("--S", plan.S, "security parameter");
    cmd->add_option("--transcript", plan.transcript_path,
                    "dump trial-0 transcript (JSON lines)");
  };

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalue lattice of the Bell operator");
  add_common(spectrum_cmd, false, false);

  CLI::App* lr_cmd = app.add_subcommand("lr-bound", "brute-force local-realistic maximum");
  add_common(lr_cmd, false, false);

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "statistical state certification");
  add_common(selftest_cmd, true, true);
  selftest_cmd->add_option("--threshold", plan.threshold, "acceptance threshold on epsilon_hat");

  CLI::App* parity_cmd = app.add_subcommand("parity", "parity protocol success probability");
  add_common(parity_cmd, true, true);
  add_protocol(parity_cmd);
  parity_cmd->add_option("--inputs", plan.inputs, "input bits, one per agent")->required();

  CLI::App* veto_cmd = app.add_subcommand("veto", "anonymous logical-OR");
  add_common(veto_cmd, true, true);
  add_protocol(veto_cmd);
  veto_cmd->add_option("--inputs", plan.inputs, "input bits, one per agent")->required();

  CLI::App* notify_cmd = app.add_subcommand("notify", "anonymous receiver notification");
  add_common(notify_cmd, true, true);
  add_protocol(notify_cmd);
  notify_cmd->add_option("--sender", plan.sender, "sender agent id");
  notify_cmd->add_option("--receiver", plan.receiver, "receiver agent id");

  CLI::App* auth_cmd = app.add_subcommand("authenticate", "receiver authentication");
  add_common(auth_cmd, true, true);
  add_protocol(auth_cmd);
  auth_cmd->add_option("--sender", plan.sender, "sender agent id");
  auth_cmd->add_option("--receiver", plan.receiver, "receiver agent id");
  auth_cmd->add_option("--tolerance", plan.tolerance, "allowed mismatch count");
  auth_cmd->add_option("--tamper", plan.tamper, "agent whose replayed input flips");

  CLI::App* collision_cmd = app.add_subcommand("collision", "sender collision detection");
  add_common(collision_cmd, true, true);
  add_protocol(collision_cmd);
  collision_cmd->add_option("--inputs", plan.inputs, "wish bits, one per agent")->required();

  CLI::App* aeg_cmd =
      app.add_subcommand("aeg", "anonymous entanglement generation, full pipeline");
  add_common(aeg_cmd, true, true);
  add_protocol(aeg_cmd);
  aeg_cmd->add_option("--sender", plan.sender, "sender agent id");
  aeg_cmd->add_option("--receiver", plan.receiver, "receiver agent id");
  aeg_cmd->add_option("--max-reps", plan.max_reps, "repetition cap");
  aeg_cmd->add_option("--tolerance", plan.tolerance, "authentication mismatch tolerance");
  aeg_cmd->add_option("--verify-tolerance", plan.verify_tolerance,
                      "fraction of failed checks the receiver forgives (default strict 0)");

  CLI::App* guess_cmd = app.add_subcommand("guess", "sender-identification attacks");
  add_common(guess_cmd, true, false);
  guess_cmd->add_option("--k", plan.k, "honest agent count");

  CLI::App* sweep_cmd = app.add_subcommand("bounds-sweep", "closed-form bound table");
  add_common(sweep_cmd, false, false);
  sweep_cmd->add_option("--S", plan.S, "security parameter");
  sweep_cmd->add_option("--epsilons", epsilons_csv, "comma-separated epsilon grid");
  sweep_cmd->add_option("--ks", ks_csv, "comma-separated honest-count grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text on stdout, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  const std::map<std::string, ExperimentKind> kinds = {
      {"spectrum", ExperimentKind::spectrum},   {"lr-bound", ExperimentKind::lr_bound},
      {"selftest", ExperimentKind::selftest},   {"parity", ExperimentKind::parity},
      {"veto", ExperimentKind::veto},           {"notify", ExperimentKind::notify},
      {"authenticate", ExperimentKind::authenticate},
      {"collision", ExperimentKind::collision}, {"aeg", ExperimentKind::aeg},
      {"guess", ExperimentKind::guess},         {"bounds-sweep", ExperimentKind::bounds_sweep}};
  plan.kind = kinds.at(app.get_subcommands().front()->get_name());
  plan.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;

  try {
    auto parse_list = [](const std::string& csv, auto parse_one, auto& into) {
      if (csv.empty()) return;
      std::stringstream ss(csv);
      std::string item;
      while (std::getline(ss, item, ',')) into.push_back(parse_one(item));
    };
    parse_list(epsilons_csv, [](const std::string& s) { return std::stod(s); }, plan.epsilons);
    parse_list(ks_csv, [](const std::string& s) { return std::stoi(s); }, plan.ks);

    const ExperimentResult result = run_experiment(plan);
    return emit(result, plan.format);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ghznet
