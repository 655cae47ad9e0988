#pragma once

// Multi-agent protocol state machines driven by a broadcast bus and a
// (possibly noisy, possibly untrusted) resource source. Each execution
// produces a complete transcript.
//
// Transcript layout. Entries carry a monotone sequence number, the acting
// agent (0 for protocol-level derived values), a kind and a name:
//   "round_begin" (derived)  opens one parity sub-run; its inputs follow as
//                            private entries ("x" or "p"), then one outcome
//                            bit per agent -- broadcast "a", or private
//                            "a_withheld" for a withholding agent -- and the
//                            closing parity value "y" (derived, or private to
//                            the withholder when one exists).
//   "block_begin"/"veto_begin"/"rep_begin" group rounds for the notification,
//   collision-detection and entanglement protocols.
// Broadcast entries inside an entanglement repetition all use the name "a"
// regardless of the sender's or receiver's role, mirroring the wire format:
// every agent announces exactly one unlabeled bit per repetition.
//
// A single execution is strictly sequential; independent executions may run
// in parallel with independent random streams. Transcripts are immutable
// after completion.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ghznet/qstate.hpp"
#include "ghznet/rng.hpp"
#include "ghznet/source.hpp"

namespace ghznet {

struct AgentId {
  int index = 0;  // 1..n
  friend bool operator==(AgentId a, AgentId b) { return a.index == b.index; }
};

struct NetworkConfig {
  int n = 3;                   // odd, >= 3
  int security_parameter = 1;  // S
  std::shared_ptr<const StateSource> source;
  std::uint64_t rng_seed = 0;  // stream seed used by the experiment harness
};

void validate(const NetworkConfig& cfg);

enum class ProtocolKind {
  parity,
  logical_or,
  notification,
  authentication,
  collision_detection,
  anonymous_entanglement,
};

enum class EntryKind { broadcast, private_value, derived };

using TranscriptValue = std::variant<std::int64_t, std::string>;

struct TranscriptEntry {
  int seq = 0;
  int agent = 0;
  EntryKind kind = EntryKind::derived;
  std::string name;
  TranscriptValue value;
};

struct Transcript {
  ProtocolKind protocol = ProtocolKind::parity;
  int n = 0;
  std::vector<TranscriptEntry> entries;
  bool aborted = false;
  std::string abort_reason;

  void log(int agent, EntryKind kind, std::string name, std::int64_t value);
  void log(int agent, EntryKind kind, std::string name, std::string value);
};

// Line-delimited JSON, one object {seq, agent, kind, name, value} per entry.
// Bit vectors appear as strings of '0'/'1' characters, agent order ascending.
std::string to_jsonl(const Transcript& t);

// Recomputes every derived output (parity values, veto verdicts, beliefs,
// detection flags, mismatch counts, mode and abort decisions) from the logged
// entries and compares with the recorded values.
bool verify_transcript(const Transcript& t);

struct ParityOptions {
  std::optional<AgentId> withhold;  // agent whose outcome stays private
};

struct ParityResult {
  // XOR of all outcome bits. When an agent withholds, only that agent can
  // form this value; everyone else sees the broadcasts alone.
  int y = 0;
  Transcript transcript;
};

ParityResult run_parity(const NetworkConfig& cfg, const std::vector<int>& inputs,
                        const ParityOptions& options, SplitMix64& rng);

struct LogicalOrResult {
  int V = 0;
  std::vector<int> round_parities;             // y per copy
  std::vector<std::vector<int>> round_inputs;  // p per round, one bit per agent
  Transcript transcript;
};

LogicalOrResult run_logical_or(const NetworkConfig& cfg, const std::vector<int>& inputs,
                               SplitMix64& rng);

struct NotificationResult {
  std::vector<int> beliefs;                      // y_i, index 0 = agent 1
  std::vector<std::vector<int>> local_parities;  // [block i-1][round t]
  std::vector<int> sender_round_inputs;          // sender's p per receiver-block round
  Transcript transcript;
};

NotificationResult run_notification(const NetworkConfig& cfg, AgentId sender, AgentId receiver,
                                    SplitMix64& rng);

struct AuthenticationResult {
  bool abort = false;
  int mismatches = 0;
  Transcript transcript;
};

// Replays the notification outputs through fresh parity runs: agent j != s
// inputs the value it obtained in its own round t, the sender inputs 0 and
// compares each outcome with the input she used in the receiver's round t.
// Aborts when mismatches exceed `tolerance` (0 suits ideal resources).
AuthenticationResult run_authentication(const NetworkConfig& cfg,
                                        const NotificationResult& notification, AgentId sender,
                                        int tolerance, SplitMix64& rng);

struct CollisionResult {
  int V = 0;       // 0 none / 1 single / 2 collision
  int veto_a = 0;  // V_A
  int veto_b = 0;  // V_B (0 when Veto B never ran)
  std::vector<int> detected;  // per agent: saw parity differing from own input
  Transcript transcript;
};

// A wishing agent flags detection iff some Veto-A round's parity differs from
// its own contribution (y xor p_i = 1): a lone wisher never fires, two or
// more fire unless every other wisher's coins were zero throughout.
CollisionResult run_collision_detection(const NetworkConfig& cfg,
                                        const std::vector<int>& wish_bits, SplitMix64& rng);

enum class AegStatus {
  success,
  abort_timeout,       // repetition cap hit before entanglement mode
  abort_verification,  // receiver's checks failed; conveyed in the final parity
  abort_final_parity,  // receiver accepted but the sender decoded an abort
};

struct AegOptions {
  int max_repetitions = 64;
  // Fraction of failed verification rounds the receiver tolerates before
  // deciding to abort. 0 = abort on the first failed check.
  double verification_tolerance = 0.0;
};

struct AegResult {
  AegStatus status = AegStatus::abort_timeout;
  int repetitions_used = 0;
  int verification_rounds = 0;
  int verification_failures = 0;
  // Repetitions where the receiver decoded a mode different from the
  // sender's actual coin outcome (possible only with a noisy resource).
  int mode_confusions = 0;
  // Two-qubit state held by (sender, receiver) on success, sender first.
  std::optional<QuantumRegister> pair_state;
  Transcript transcript;
};

// The repetition loop of the anonymous entanglement protocol (the caller is
// expected to have completed collision detection, notification and
// authentication). Each repetition consumes one resource copy for the
// measurements plus one for the mode-notification parity; a final parity
// conveys the receiver's abort flag to the sender.
AegResult run_aeg(const NetworkConfig& cfg, AgentId sender, AgentId receiver,
                  const AegOptions& options, SplitMix64& rng);

}  // namespace ghznet
