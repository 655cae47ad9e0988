#include "ghznet/protocols.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ghznet {

namespace {

void check_agent(const NetworkConfig& cfg, AgentId a, const char* what) {
  if (a.index < 1 || a.index > cfg.n)
    throw std::invalid_argument(std::string(what) + ": agent index " + std::to_string(a.index) +
                                " outside [1, " + std::to_string(cfg.n) + "]");
}

void check_inputs(const NetworkConfig& cfg, const std::vector<int>& inputs, const char* what) {
  if (inputs.size() != static_cast<std::size_t>(cfg.n))
    throw std::invalid_argument(std::string(what) + ": need one input bit per agent");
  for (int b : inputs)
    if (b != 0 && b != 1) throw std::invalid_argument(std::string(what) + ": inputs must be bits");
}

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

// One parity sub-run: draw a copy, apply the phase flips, measure everyone in
// the X basis, broadcast (or withhold) the outcomes, log the parity. Returns
// the XOR of all outcome bits.
int parity_round(Transcript& tr, const NetworkConfig& cfg, const std::vector<int>& inputs,
                 std::optional<AgentId> withhold, const char* input_name, int round_index,
                 SplitMix64& rng) {
  tr.log(0, EntryKind::derived, "round_begin", round_index);
  for (int j = 1; j <= cfg.n; ++j)
    tr.log(j, EntryKind::private_value, input_name, inputs[static_cast<std::size_t>(j - 1)]);

  QuantumRegister state = cfg.source->draw(rng);
  if (state.n_qubits() != cfg.n)
    throw std::invalid_argument("parity: source emitted a state of the wrong size");
  for (int j = 1; j <= cfg.n; ++j)
    if (inputs[static_cast<std::size_t>(j - 1)] == 1) state = apply_pauli(state, j, Pauli::Z);

  int y = 0;
  for (int j = 1; j <= cfg.n; ++j) {
    MeasurementResult m = measure_basis(state, {j}, MeasureBasis::X, rng);
    state = std::move(m.state);
    const int bit = m.outcome.bits[0];
    y ^= bit;
    if (withhold && withhold->index == j)
      tr.log(j, EntryKind::private_value, "a_withheld", bit);
    else
      tr.log(j, EntryKind::broadcast, "a", bit);
  }
  if (withhold)
    tr.log(withhold->index, EntryKind::private_value, "y", y);
  else
    tr.log(0, EntryKind::derived, "y", y);
  return y;
}

struct OrRounds {
  int V = 0;
  std::vector<int> parities;
  std::vector<std::vector<int>> round_inputs;
};

// Shared body of the anonymous-veto stage: per copy, inactive agents input 0
// and active agents input a fresh fair coin; V = 1 iff any round's parity is 1.
OrRounds logical_or_rounds(Transcript& tr, const NetworkConfig& cfg,
                           const std::vector<int>& inputs, const char* or_input_name,
                           int& round_counter, SplitMix64& rng) {
  for (int j = 1; j <= cfg.n; ++j)
    tr.log(j, EntryKind::private_value, or_input_name, inputs[static_cast<std::size_t>(j - 1)]);
  OrRounds out;
  for (int t = 0; t < cfg.security_parameter; ++t) {
    std::vector<int> p(static_cast<std::size_t>(cfg.n), 0);
    for (int j = 1; j <= cfg.n; ++j)
      if (inputs[static_cast<std::size_t>(j - 1)] == 1)
        p[static_cast<std::size_t>(j - 1)] = rng.next_bit();
    const int y = parity_round(tr, cfg, p, std::nullopt, "p", round_counter++, rng);
    out.parities.push_back(y);
    out.round_inputs.push_back(std::move(p));
  }
  out.V = std::any_of(out.parities.begin(), out.parities.end(), [](int y) { return y == 1; }) ? 1
                                                                                              : 0;
  return out;
}

}  // namespace

void validate(const NetworkConfig& cfg) {
  if (cfg.n < 3 || cfg.n % 2 == 0)
    throw std::invalid_argument("NetworkConfig: n must be odd and >= 3");
  if (cfg.security_parameter < 1)
    throw std::invalid_argument("NetworkConfig: security parameter must be >= 1");
  if (!cfg.source) throw std::invalid_argument("NetworkConfig: missing state source");
  if (cfg.source->n_qubits() != cfg.n)
    throw std::invalid_argument("NetworkConfig: source qubit count does not match n");
}

void Transcript::log(int agent, EntryKind kind, std::string name, std::int64_t value) {
  entries.push_back(TranscriptEntry{static_cast<int>(entries.size()), agent, kind,
                                    std::move(name), TranscriptValue{value}});
}

void Transcript::log(int agent, EntryKind kind, std::string name, std::string value) {
  entries.push_back(TranscriptEntry{static_cast<int>(entries.size()), agent, kind,
                                    std::move(name), TranscriptValue{std::move(value)}});
}

std::string to_jsonl(const Transcript& t) {
  std::ostringstream out;
  for (const TranscriptEntry& e : t.entries) {
    const char* kind = e.kind == EntryKind::broadcast  ? "broadcast"
                       : e.kind == EntryKind::derived ? "derived"
                                                       : "private";
    out << "{\"seq\":" << e.seq << ",\"agent\":" << e.agent << ",\"kind\":\"" << kind
        << "\",\"name\":\"" << e.name << "\",\"value\":";
    if (std::holds_alternative<std::int64_t>(e.value))
      out << std::get<std::int64_t>(e.value);
    else
      out << '"' << std::get<std::string>(e.value) << '"';
    out << "}\n";
  }
  return out.str();
}

ParityResult run_parity(const NetworkConfig& cfg, const std::vector<int>& inputs,
                        const ParityOptions& options, SplitMix64& rng) {
  validate(cfg);
  check_inputs(cfg, inputs, "run_parity");
  if (options.withhold) check_agent(cfg, *options.withhold, "run_parity");
  ParityResult result;
  result.transcript.protocol = ProtocolKind::parity;
  result.transcript.n = cfg.n;
  result.y = parity_round(result.transcript, cfg, inputs, options.withhold, "x", 0, rng);
  return result;
}

LogicalOrResult run_logical_or(const NetworkConfig& cfg, const std::vector<int>& inputs,
                               SplitMix64& rng) {
  validate(cfg);
  check_inputs(cfg, inputs, "run_logical_or");
  LogicalOrResult result;
  result.transcript.protocol = ProtocolKind::logical_or;
  result.transcript.n = cfg.n;
  int rounds = 0;
  OrRounds rr = logical_or_rounds(result.transcript, cfg, inputs, "x", rounds, rng);
  result.V = rr.V;
  result.round_parities = std::move(rr.parities);
  result.round_inputs = std::move(rr.round_inputs);
  result.transcript.log(0, EntryKind::derived, "V", result.V);
  return result;
}

NotificationResult run_notification(const NetworkConfig& cfg, AgentId sender, AgentId receiver,
                                    SplitMix64& rng) {
  validate(cfg);
  check_agent(cfg, sender, "run_notification");
  check_agent(cfg, receiver, "run_notification");
  if (sender == receiver)
    throw std::invalid_argument("run_notification: an agent cannot notify itself");

  NotificationResult result;
  result.transcript.protocol = ProtocolKind::notification;
  result.transcript.n = cfg.n;
  result.beliefs.assign(static_cast<std::size_t>(cfg.n), 0);
  result.local_parities.assign(static_cast<std::size_t>(cfg.n), {});
  int rounds = 0;
  for (int i = 1; i <= cfg.n; ++i) {
    result.transcript.log(0, EntryKind::derived, "block_begin", i);
    for (int t = 0; t < cfg.security_parameter; ++t) {
      std::vector<int> p(static_cast<std::size_t>(cfg.n), 0);
      if (i == receiver.index) {
        const int coin = rng.next_bit();
        p[static_cast<std::size_t>(sender.index - 1)] = coin;
        result.sender_round_inputs.push_back(coin);
      }
      const int y =
          parity_round(result.transcript, cfg, p, AgentId{i}, "p", rounds++, rng);
      result.local_parities[static_cast<std::size_t>(i - 1)].push_back(y);
      if (y == 1) result.beliefs[static_cast<std::size_t>(i - 1)] = 1;
    }
    result.transcript.log(i, EntryKind::private_value, "belief",
                          result.beliefs[static_cast<std::size_t>(i - 1)]);
  }
  return result;
}

AuthenticationResult run_authentication(const NetworkConfig& cfg,
                                        const NotificationResult& notification, AgentId sender,
                                        int tolerance, SplitMix64& rng) {
  validate(cfg);
  check_agent(cfg, sender, "run_authentication");
  if (tolerance < 0) throw std::invalid_argument("run_authentication: negative tolerance");
  const int S = cfg.security_parameter;
  if (notification.local_parities.size() != static_cast<std::size_t>(cfg.n) ||
      notification.sender_round_inputs.size() != static_cast<std::size_t>(S))
    throw std::invalid_argument("run_authentication: notification transcript is missing rounds");
  for (const auto& block : notification.local_parities)
    if (block.size() != static_cast<std::size_t>(S))
      throw std::invalid_argument("run_authentication: notification transcript is missing rounds");

  AuthenticationResult result;
  result.transcript.protocol = ProtocolKind::authentication;
  result.transcript.n = cfg.n;
  result.transcript.log(0, EntryKind::derived, "tolerance", tolerance);
  result.transcript.log(sender.index, EntryKind::private_value, "p_ref",
                        bits_to_string(notification.sender_round_inputs));
  for (int t = 0; t < S; ++t) {
    std::vector<int> inputs(static_cast<std::size_t>(cfg.n), 0);
    for (int j = 1; j <= cfg.n; ++j) {
      if (j == sender.index) continue;  // the sender's input is always 0
      inputs[static_cast<std::size_t>(j - 1)] =
          notification.local_parities[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(t)];
    }
    const int y = parity_round(result.transcript, cfg, inputs, std::nullopt, "x", t, rng);
    if (y != notification.sender_round_inputs[static_cast<std::size_t>(t)]) ++result.mismatches;
  }
  result.transcript.log(sender.index, EntryKind::private_value, "mismatches", result.mismatches);
  result.abort = result.mismatches > tolerance;
  result.transcript.log(sender.index, EntryKind::broadcast, "abort", result.abort ? 1 : 0);
  if (result.abort) {
    result.transcript.aborted = true;
    result.transcript.abort_reason = "authentication mismatch";
  }
  return result;
}

CollisionResult run_collision_detection(const NetworkConfig& cfg,
                                        const std::vector<int>& wish_bits, SplitMix64& rng) {
  validate(cfg);
  check_inputs(cfg, wish_bits, "run_collision_detection");

  CollisionResult result;
  result.transcript.protocol = ProtocolKind::collision_detection;
  result.transcript.n = cfg.n;
  result.detected.assign(static_cast<std::size_t>(cfg.n), 0);
  int rounds = 0;

  result.transcript.log(0, EntryKind::derived, "veto_begin", 0);
  OrRounds veto_a = logical_or_rounds(result.transcript, cfg, wish_bits, "x", rounds, rng);
  result.veto_a = veto_a.V;
  result.transcript.log(0, EntryKind::derived, "V_A", result.veto_a);

  for (int j = 1; j <= cfg.n; ++j) {
    if (wish_bits[static_cast<std::size_t>(j - 1)] != 1) continue;
    int detect = 0;
    for (std::size_t t = 0; t < veto_a.parities.size(); ++t)
      if ((veto_a.parities[t] ^ veto_a.round_inputs[t][static_cast<std::size_t>(j - 1)]) == 1)
        detect = 1;
    result.detected[static_cast<std::size_t>(j - 1)] = detect;
  }
  for (int j = 1; j <= cfg.n; ++j)
    result.transcript.log(j, EntryKind::private_value, "detect",
                          result.detected[static_cast<std::size_t>(j - 1)]);

  if (result.veto_a == 1) {
    std::vector<int> b(static_cast<std::size_t>(cfg.n), 0);
    for (int j = 1; j <= cfg.n; ++j)
      b[static_cast<std::size_t>(j - 1)] = wish_bits[static_cast<std::size_t>(j - 1)] &
                                           result.detected[static_cast<std::size_t>(j - 1)];
    result.transcript.log(0, EntryKind::derived, "veto_begin", 1);
    OrRounds veto_b = logical_or_rounds(result.transcript, cfg, b, "b", rounds, rng);
    result.veto_b = veto_b.V;
    result.transcript.log(0, EntryKind::derived, "V_B", result.veto_b);
  }

  result.V = result.veto_a == 0 ? 0 : (result.veto_b == 0 ? 1 : 2);
  result.transcript.log(0, EntryKind::derived, "V", result.V);
  return result;
}

AegResult run_aeg(const NetworkConfig& cfg, AgentId sender, AgentId receiver,
                  const AegOptions& options, SplitMix64& rng) {
  validate(cfg);
  check_agent(cfg, sender, "run_aeg");
  check_agent(cfg, receiver, "run_aeg");
  if (sender == receiver) throw std::invalid_argument("run_aeg: sender equals receiver");
  if (options.max_repetitions < 1)
    throw std::invalid_argument("run_aeg: max_repetitions must be >= 1");
  if (options.verification_tolerance < 0.0 || options.verification_tolerance >= 1.0)
    throw std::invalid_argument("run_aeg: verification tolerance must lie in [0, 1)");

  const int s = sender.index;
  const int r = receiver.index;
  const int S = cfg.security_parameter;

  AegResult result;
  Transcript& tr = result.transcript;
  tr.protocol = ProtocolKind::anonymous_entanglement;
  tr.n = cfg.n;
  tr.log(0, EntryKind::derived, "strict_verification",
         options.verification_tolerance == 0.0 ? 1 : 0);

  int round_counter = 0;
  bool entered_entanglement = false;
  std::optional<QuantumRegister> entanglement_state;
  std::vector<std::pair<int, int>> entanglement_others;  // (agent, X outcome)

  for (int rep = 1; rep <= options.max_repetitions; ++rep) {
    result.repetitions_used = rep;
    tr.log(0, EntryKind::derived, "rep_begin", rep);

    QuantumRegister state = cfg.source->draw(rng);
    if (state.n_qubits() != cfg.n)
      throw std::invalid_argument("run_aeg: source emitted a state of the wrong size");

    // Step 2a: everyone outside {s, r} measures in the X basis.
    std::vector<std::pair<int, int>> others;
    for (int j = 1; j <= cfg.n; ++j) {
      if (j == s || j == r) continue;
      MeasurementResult m = measure_basis(state, {j}, MeasureBasis::X, rng);
      state = std::move(m.state);
      others.emplace_back(j, m.outcome.bits[0]);
    }

    // Step 2b: the sender's S coins pick the mode; x = 0 only on all heads.
    std::vector<int> coins(static_cast<std::size_t>(S));
    int x = 0;
    for (int& c : coins) {
      c = rng.next_bit();
      x |= c;
    }
    tr.log(s, EntryKind::private_value, "coins", bits_to_string(coins));

    int sender_bit;
    if (x == 0) {
      sender_bit = rng.next_bit();  // b
      if (sender_bit == 1) state = apply_pauli(state, s, Pauli::Z);
    } else {
      MeasurementResult m = measure_basis(state, {s}, MeasureBasis::X, rng);
      state = std::move(m.state);
      sender_bit = m.outcome.bits[0];  // a_s
    }
    const int receiver_bit = rng.next_bit();  // b'

    // One unlabeled announcement per agent, logged in agent order so the
    // record itself carries no role information.
    int xor_others = 0;  // XOR of every announcement except the receiver's
    for (int j = 1; j <= cfg.n; ++j) {
      int bit;
      if (j == s)
        bit = sender_bit;
      else if (j == r)
        bit = receiver_bit;
      else
        bit = std::find_if(others.begin(), others.end(), [j](auto& p) { return p.first == j; })
                  ->second;
      tr.log(j, EntryKind::broadcast, "a", bit);
      if (j != r) xor_others ^= bit;
    }

    // Step 3: mode notification through one parity run.
    std::vector<int> mode_inputs(static_cast<std::size_t>(cfg.n), 0);
    mode_inputs[static_cast<std::size_t>(s - 1)] = x;
    const int x_r = rng.next_bit();
    mode_inputs[static_cast<std::size_t>(r - 1)] = x_r;
    const int y = parity_round(tr, cfg, mode_inputs, std::nullopt, "x", round_counter++, rng);
    const int decoded_mode = y ^ x_r;
    tr.log(r, EntryKind::private_value, "mode", decoded_mode);
    if (decoded_mode != x) ++result.mode_confusions;

    if (decoded_mode == 0) {
      // Step 4: the receiver corrects with the XOR of everyone else's bits.
      const int correction = xor_others;
      tr.log(r, EntryKind::private_value, "z_correction", correction);
      if (correction == 1) state = apply_pauli(state, r, Pauli::Z);
    } else {
      // Step 5: the receiver measures and checks the total X parity.
      MeasurementResult m = measure_basis(state, {r}, MeasureBasis::X, rng);
      state = std::move(m.state);
      const int a_r = m.outcome.bits[0];
      const int y_prime = xor_others ^ a_r;
      tr.log(r, EntryKind::private_value, "a_r", a_r);
      tr.log(r, EntryKind::private_value, "y_prime", y_prime);
      ++result.verification_rounds;
      if (y_prime != 0) ++result.verification_failures;
    }

    if (x == 0) {
      // The sender's coins ended the loop; the protocol proceeds to the
      // final notification parity.
      entered_entanglement = true;
      entanglement_state = std::move(state);
      entanglement_others = std::move(others);
      break;
    }
  }

  if (!entered_entanglement) {
    result.status = AegStatus::abort_timeout;
    tr.aborted = true;
    tr.abort_reason = "repetition cap reached before entanglement mode";
    return result;
  }

  // Step 6: the receiver folds her checks into an abort flag and conveys it.
  const double allowed = options.verification_tolerance *
                         static_cast<double>(result.verification_rounds);
  const int x_tilde_r = static_cast<double>(result.verification_failures) > allowed ? 1 : 0;
  const int x_tilde_s = rng.next_bit();
  std::vector<int> final_inputs(static_cast<std::size_t>(cfg.n), 0);
  final_inputs[static_cast<std::size_t>(r - 1)] = x_tilde_r;
  final_inputs[static_cast<std::size_t>(s - 1)] = x_tilde_s;
  tr.log(0, EntryKind::derived, "final_begin", 0);
  const int y_tilde = parity_round(tr, cfg, final_inputs, std::nullopt, "x", round_counter++, rng);
  const int decoded_abort = y_tilde ^ x_tilde_s;
  tr.log(s, EntryKind::private_value, "abort_decision", decoded_abort);

  if (x_tilde_r == 1) {
    result.status = AegStatus::abort_verification;
    tr.aborted = true;
    tr.abort_reason = "receiver failed verification checks";
    return result;
  }
  if (decoded_abort == 1) {
    result.status = AegStatus::abort_final_parity;
    tr.aborted = true;
    tr.abort_reason = "sender decoded an abort flag";
    return result;
  }

  result.status = AegStatus::success;
  result.pair_state = extract_kept_state(*entanglement_state, {s, r}, entanglement_others);
  return result;
}

// --- transcript verification ---------------------------------------------

namespace {

struct VerifiedRound {
  std::size_t marker_pos = 0;
  std::map<int, int> inputs;  // agent -> bit ("x" or "p" entries)
  int outcome_xor = 0;
  std::optional<std::int64_t> y;
};

struct ParsedTranscript {
  std::vector<VerifiedRound> rounds;
  // position in `entries` -> index into rounds, for scope queries
  std::vector<std::size_t> round_of_entry;
};

bool is_bit(const TranscriptValue& v) {
  return std::holds_alternative<std::int64_t>(v) &&
         (std::get<std::int64_t>(v) == 0 || std::get<std::int64_t>(v) == 1);
}

std::int64_t as_int(const TranscriptValue& v) { return std::get<std::int64_t>(v); }

// Universal pass: every parity value must equal the XOR of the outcome bits
// logged in its round. Returns parsed rounds for the per-protocol checks.
bool parse_and_check_rounds(const Transcript& t, ParsedTranscript& out) {
  constexpr std::size_t kNoRound = static_cast<std::size_t>(-1);
  out.round_of_entry.assign(t.entries.size(), kNoRound);
  bool in_round = false;
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const TranscriptEntry& e = t.entries[i];
    if (e.seq != static_cast<int>(i)) return false;  // sequence numbers must be monotone
    if (e.name == "round_begin") {
      if (in_round) return false;
      out.rounds.push_back(VerifiedRound{i, {}, 0, std::nullopt});
      in_round = true;
      continue;
    }
    if (!in_round) continue;
    out.round_of_entry[i] = out.rounds.size() - 1;
    VerifiedRound& round = out.rounds.back();
    if (e.kind == EntryKind::private_value && (e.name == "x" || e.name == "p")) {
      if (!is_bit(e.value)) return false;
      round.inputs[e.agent] = static_cast<int>(as_int(e.value));
    } else if ((e.kind == EntryKind::broadcast && e.name == "a") ||
               (e.kind == EntryKind::private_value && e.name == "a_withheld")) {
      if (!is_bit(e.value) || e.agent < 1) return false;
      round.outcome_xor ^= static_cast<int>(as_int(e.value));
    } else if (e.name == "y") {
      round.y = as_int(e.value);
      in_round = false;
    }
  }
  for (const VerifiedRound& round : out.rounds)
    if (!round.y || *round.y != round.outcome_xor) return false;
  return true;
}

// Rounds whose marker position falls in [from, to).
std::vector<const VerifiedRound*> rounds_in(const ParsedTranscript& p, std::size_t from,
                                            std::size_t to) {
  std::vector<const VerifiedRound*> out;
  for (const VerifiedRound& r : p.rounds)
    if (r.marker_pos >= from && r.marker_pos < to) out.push_back(&r);
  return out;
}

std::vector<std::size_t> marker_positions(const Transcript& t, const std::string& name) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t.entries.size(); ++i)
    if (t.entries[i].name == name) out.push_back(i);
  return out;
}

bool any_parity_one(const std::vector<const VerifiedRound*>& rounds) {
  return std::any_of(rounds.begin(), rounds.end(), [](auto* r) { return *r->y == 1; });
}

bool verify_logical_or(const Transcript& t, const ParsedTranscript& p) {
  for (const TranscriptEntry& e : t.entries)
    if (e.name == "V")
      return is_bit(e.value) &&
             as_int(e.value) == (any_parity_one(rounds_in(p, 0, t.entries.size())) ? 1 : 0);
  return false;
}

bool verify_notification(const Transcript& t, const ParsedTranscript& p) {
  std::vector<std::size_t> blocks = marker_positions(t, "block_begin");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t end = b + 1 < blocks.size() ? blocks[b + 1] : t.entries.size();
    const int agent = static_cast<int>(as_int(t.entries[blocks[b]].value));
    const int expected = any_parity_one(rounds_in(p, blocks[b], end)) ? 1 : 0;
    bool found = false;
    for (std::size_t i = blocks[b]; i < end; ++i) {
      const TranscriptEntry& e = t.entries[i];
      if (e.name == "belief" && e.agent == agent) {
        if (!is_bit(e.value) || as_int(e.value) != expected) return false;
        found = true;
      }
    }
    if (!found) return false;
  }
  return !blocks.empty();
}

bool verify_authentication(const Transcript& t, const ParsedTranscript& p) {
  std::optional<std::int64_t> tolerance;
  std::string p_ref;
  std::optional<std::int64_t> mismatches, abort_bit;
  for (const TranscriptEntry& e : t.entries) {
    if (e.name == "tolerance") tolerance = as_int(e.value);
    if (e.name == "p_ref") p_ref = std::get<std::string>(e.value);
    if (e.name == "mismatches") mismatches = as_int(e.value);
    if (e.name == "abort") abort_bit = as_int(e.value);
  }
  if (!tolerance || !mismatches || !abort_bit || p_ref.size() != p.rounds.size()) return false;
  std::int64_t recount = 0;
  for (std::size_t i = 0; i < p.rounds.size(); ++i)
    if (*p.rounds[i].y != p_ref[i] - '0') ++recount;
  if (recount != *mismatches) return false;
  const bool abort = recount > *tolerance;
  return (*abort_bit == 1) == abort && t.aborted == abort;
}

bool verify_collision(const Transcript& t, const ParsedTranscript& p) {
  std::vector<std::size_t> vetoes = marker_positions(t, "veto_begin");
  if (vetoes.empty()) return false;
  const std::size_t a_end = vetoes.size() > 1 ? vetoes[1] : t.entries.size();
  auto a_rounds = rounds_in(p, vetoes[0], a_end);
  std::optional<std::int64_t> v_a, v_b, v;
  std::map<int, int> wish, detect;
  for (const TranscriptEntry& e : t.entries) {
    if (e.name == "V_A") v_a = as_int(e.value);
    if (e.name == "V_B") v_b = as_int(e.value);
    if (e.name == "V") v = as_int(e.value);
    if (e.name == "detect") detect[e.agent] = static_cast<int>(as_int(e.value));
  }
  // OR inputs are the private "x" entries logged before the first round of Veto A.
  const std::size_t first_round = a_rounds.empty() ? a_end : a_rounds.front()->marker_pos;
  for (std::size_t i = vetoes[0]; i < first_round; ++i) {
    const TranscriptEntry& e = t.entries[i];
    if (e.kind == EntryKind::private_value && e.name == "x")
      wish[e.agent] = static_cast<int>(as_int(e.value));
  }
  if (!v_a || !v) return false;
  if (*v_a != (any_parity_one(a_rounds) ? 1 : 0)) return false;
  for (auto [agent, d] : detect) {
    if (wish[agent] == 0) {
      if (d != 0) return false;
      continue;
    }
    int expected = 0;
    for (auto* round : a_rounds) {
      auto it = round->inputs.find(agent);
      if (it == round->inputs.end()) return false;
      if ((*round->y ^ it->second) == 1) expected = 1;
    }
    if (d != expected) return false;
  }
  if (*v_a == 0) return *v == 0;
  if (!v_b) return false;
  auto b_rounds = rounds_in(p, vetoes[1], t.entries.size());
  if (*v_b != (any_parity_one(b_rounds) ? 1 : 0)) return false;
  return *v == (*v_b == 0 ? 1 : 2);
}

bool verify_aeg(const Transcript& t, const ParsedTranscript& p) {
  std::vector<std::size_t> reps = marker_positions(t, "rep_begin");
  std::vector<std::size_t> finals = marker_positions(t, "final_begin");
  if (reps.empty()) return false;
  std::optional<std::int64_t> strict;
  for (const TranscriptEntry& e : t.entries)
    if (e.name == "strict_verification") strict = as_int(e.value);

  int failures = 0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const std::size_t end = k + 1 < reps.size()
                                ? reps[k + 1]
                                : (finals.empty() ? t.entries.size() : finals[0]);
    auto rounds = rounds_in(p, reps[k], end);
    if (rounds.size() != 1) return false;  // exactly the mode parity
    const VerifiedRound& mode_round = *rounds[0];

    // Direct announcements of this repetition sit outside any parity round.
    int xor_all = 0;
    std::map<int, int> announced;
    std::string coins;
    int coins_agent = 0;
    std::optional<std::int64_t> mode, z_corr, a_r, y_prime;
    int receiver_agent = 0;
    for (std::size_t i = reps[k]; i < end; ++i) {
      const TranscriptEntry& e = t.entries[i];
      const bool in_round = p.round_of_entry[i] != static_cast<std::size_t>(-1);
      if (e.kind == EntryKind::broadcast && e.name == "a" && !in_round) {
        announced[e.agent] = static_cast<int>(as_int(e.value));
        xor_all ^= static_cast<int>(as_int(e.value));
      }
      if (e.name == "coins") {
        coins = std::get<std::string>(e.value);
        coins_agent = e.agent;
      }
      if (e.name == "mode") {
        mode = as_int(e.value);
        receiver_agent = e.agent;
      }
      if (e.name == "z_correction") z_corr = as_int(e.value);
      if (e.name == "a_r") a_r = as_int(e.value);
      if (e.name == "y_prime") y_prime = as_int(e.value);
    }
    if (coins.empty() || !mode || announced.size() != static_cast<std::size_t>(t.n)) return false;
    // The sender's parity input must equal the OR of her coins.
    const int x_from_coins = coins.find('1') != std::string::npos ? 1 : 0;
    auto sender_input = mode_round.inputs.find(coins_agent);
    if (sender_input == mode_round.inputs.end() || sender_input->second != x_from_coins)
      return false;
    auto recv_input = mode_round.inputs.find(receiver_agent);
    if (recv_input == mode_round.inputs.end()) return false;
    if (*mode != (*mode_round.y ^ recv_input->second)) return false;
    const int xor_others = xor_all ^ announced[receiver_agent];
    if (*mode == 0) {
      if (!z_corr || *z_corr != xor_others) return false;
    } else {
      if (!a_r || !y_prime || *y_prime != (xor_others ^ *a_r)) return false;
      if (*y_prime != 0) ++failures;
    }
  }

  if (finals.empty()) return t.aborted;  // only a timeout ends without the final parity
  auto final_rounds = rounds_in(p, finals[0], t.entries.size());
  if (final_rounds.size() != 1) return false;
  std::optional<std::int64_t> abort_decision;
  int sender_agent = 0;
  for (std::size_t i = finals[0]; i < t.entries.size(); ++i)
    if (t.entries[i].name == "abort_decision") {
      abort_decision = as_int(t.entries[i].value);
      sender_agent = t.entries[i].agent;
    }
  if (!abort_decision) return false;
  auto s_input = final_rounds[0]->inputs.find(sender_agent);
  if (s_input == final_rounds[0]->inputs.end()) return false;
  if (*abort_decision != (*final_rounds[0]->y ^ s_input->second)) return false;
  if (strict && *strict == 1) {
    // Strict policy: the receiver's flag is exactly "any check failed".
    int x_tilde_r = 0;
    for (auto [agent, bit] : final_rounds[0]->inputs)
      if (agent != sender_agent && bit == 1) x_tilde_r = 1;
    if (x_tilde_r != (failures > 0 ? 1 : 0)) return false;
  }
  return true;
}

}  // namespace

bool verify_transcript(const Transcript& t) {
  ParsedTranscript parsed;
  if (!parse_and_check_rounds(t, parsed)) return false;
  switch (t.protocol) {
    case ProtocolKind::parity:
      return parsed.rounds.size() == 1;
    case ProtocolKind::logical_or:
      return verify_logical_or(t, parsed);
    case ProtocolKind::notification:
      return verify_notification(t, parsed);
    case ProtocolKind::authentication:
      return verify_authentication(t, parsed);
    case ProtocolKind::collision_detection:
      return verify_collision(t, parsed);
    case ProtocolKind::anonymous_entanglement:
      return verify_aeg(t, parsed);
  }
  return false;
}

}  // namespace ghznet
