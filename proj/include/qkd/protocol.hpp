#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkd/bitstring.hpp"
#include "qkd/channel.hpp"
#include "qkd/qrng.hpp"

namespace qkd {

// How a protocol-level "measure" turns a qubit role into W bits.
//   Outcome:     W independent pair rounds, one collapse outcome per bit.
//   Probability: quantize(prob_of(qubit, 0, basis), W) from a single pair.
enum class MeasurementSemantics { Outcome, Probability };
const char* to_string(MeasurementSemantics s);

struct ProtocolConfig {
  int protocol = 3;  // 1 or 3
  int width = 64;    // W
  MeasurementSemantics semantics = MeasurementSemantics::Outcome;
  BellKind bell_kind = BellKind::PhiPlus;
  Basis basis = Basis::Computational;
  std::vector<GateSpec> alice_unitary;  // applied by each preparer to its pair
  std::vector<GateSpec> bob_unitary;
  int rounds = 1;             // protocol 1: repetitions hashed together
  std::int64_t shots = 1024;  // reserved for estimation-based measurement variants
  std::int64_t n = 256;       // protocol 1 random-number shot count
  std::array<std::int64_t, 4> n_parts{256, 256, 256, 256};  // protocol 3 shot counts
  std::uint64_t alice_seed = 1;
  std::uint64_t bob_seed = 2;
  std::uint64_t eve_seed = 3;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

// Throws std::invalid_argument on out-of-range fields.
void validate(const ProtocolConfig& cfg);

struct Channels {
  QuantumChannel quantum;
  ClassicalChannel classical;
};
Channels make_channels(const EveConfig& eve, std::uint64_t eve_seed);

// One party's view of a protocol-1 session. Field names follow the session
// report schema: the "own" row is M1/M13/MR_A for alice and M2/M24/MR_B for
// bob; "peer" rows hold the values as delivered over the classical channel.
struct Protocol1View {
  BitString random_value;  // R_A / R_B
  BitString m_own;         // M1 / M2: outcomes on the locally kept halves
  BitString m_recv;        // M3 / M4: outcomes on the received halves
  BitString m_pair;        // M13 / M24
  BitString m_pair_peer;   // M24 / M13 as delivered
  BitString m_combined;    // M1234
  BitString masked_own;    // MR_A / MR_B
  BitString masked_peer;   // MR_B / MR_A as delivered
  BitString shared;        // MR_AB
  BitString key;           // 256-bit derived key

  friend bool operator==(const Protocol1View&, const Protocol1View&) = default;
};

struct Protocol3View {
  BitString m_own;   // M1 / M2
  BitString m_recv;  // M3 / M4
  BitString c;       // C
  BitString r1, r2;  // R_A1, R_A2 / R_B1, R_B2
  BitString sent;    // Y / Z
  BitString received;  // Z / Y as delivered
  BitString recovered_mid;  // middle block of the peer's message
  BitString peer_r1, peer_r2;
  BitString k;    // K
  BitString key;  // 256-bit derived key

  friend bool operator==(const Protocol3View&, const Protocol3View&) = default;
};

struct EveView {
  std::vector<BitString> classical_log;
  BitString quantum_bits;   // one outcome bit per interception
  BitString quantum_bases;  // 0 computational, 1 hadamard
  bool knows_key = false;   // passive-log replay reproduced the session key

  friend bool operator==(const EveView&, const EveView&) = default;
};

struct SessionOutcome {
  int protocol = 0;
  std::optional<std::pair<Protocol1View, Protocol1View>> p1;  // alice, bob
  std::optional<std::pair<Protocol3View, Protocol3View>> p3;  // alice, bob
  EveView eve;
  bool aborted = false;
  std::string abort_reason;
  std::size_t embedded_mismatches = 0;
  // Observer-level per-bit disagreement between the parties' correlation
  // strings: C for protocol 3, MR_AB for protocol 1.
  double c_mismatch_rate = 0.0;
  bool agreed = false;

  friend bool operator==(const SessionOutcome&, const SessionOutcome&) = default;
};

SessionOutcome run_protocol1(const ProtocolConfig& cfg, Channels& ch);
SessionOutcome run_protocol3(const ProtocolConfig& cfg, Channels& ch);

// Builds the channels from the eavesdropper config and dispatches on
// cfg.protocol. The outcome is a pure function of (cfg, eve).
SessionOutcome run_session(const ProtocolConfig& cfg, const EveConfig& eve);

// SHA-256 digest of the packed concatenation of k and c; always 256 bits.
BitString derive_key(const BitString& k, const BitString& c);

// Y/Z wire format: [r1 ^ ext(c) || c || r2 ^ ext(c)]. The flanking random
// blocks are masked with the sender's correlation string; the correlation
// string itself rides in the middle block for the receiver's check.
BitString build_masked_triple(const BitString& r1, const BitString& c, const BitString& r2);

struct RecoveredTriple {
  BitString r1, mid, r2;
};

// Splits a delivered (w, w, w) payload and unmasks the flanking blocks with
// the receiver's correlation string. No check.
RecoveredTriple split_triple(const BitString& payload, const BitString& local_c);

// split_triple plus the embedded check: throws EavesdropDetected (carrying the
// disagreement count) unless the middle block equals local_c.
RecoveredTriple recover_triple(const BitString& payload, const BitString& local_c);

// Reconstructs the protocol-1 session key from a passive transcript of the
// classical channel (four entries per round, in transmission order). Empty
// when the log shape does not match.
std::optional<BitString> replay_protocol1_key(const std::vector<BitString>& log, int rounds);

}  // namespace qkd
