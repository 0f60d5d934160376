#include "qkd/protocol.hpp"

#include <stdexcept>
#include <string>

#include "qkd/errors.hpp"
#include "qkd/sha256.hpp"

namespace qkd {

const char* to_string(MeasurementSemantics s) {
  return s == MeasurementSemantics::Outcome ? "outcome" : "probability";
}

void validate(const ProtocolConfig& cfg) {
  if (cfg.protocol != 1 && cfg.protocol != 3) {
    throw std::invalid_argument("protocol must be 1 or 3");
  }
  if (cfg.width < 8 || cfg.width > kMaxQuantizeWidth) {
    throw std::invalid_argument("width must lie in [8, " + std::to_string(kMaxQuantizeWidth) + "]");
  }
  if (cfg.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (cfg.shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (cfg.n < 1) throw std::invalid_argument("n must be at least 1");
  for (auto n : cfg.n_parts) {
    if (n < 1) throw std::invalid_argument("n1..n4 must be at least 1");
  }
  for (const auto* unitary : {&cfg.alice_unitary, &cfg.bob_unitary}) {
    for (const auto& g : *unitary) {
      if (g.target0 < 0 || g.target0 > 1 || (g.arity() == 2 && (g.target1 < 0 || g.target1 > 1))) {
        throw std::invalid_argument("unitary gates must target the two pair qubits");
      }
    }
  }
}

Channels make_channels(const EveConfig& eve, std::uint64_t eve_seed) {
  return Channels{QuantumChannel(eve, derive_seed(eve_seed, 0)),
                  ClassicalChannel(eve, derive_seed(eve_seed, 1))};
}

BitString derive_key(const BitString& k, const BitString& c) {
  const auto digest = sha256(concat(k, c).to_bytes());
  BitString out;
  out.reserve(digest.size() * 8);
  for (auto byte : digest) {
    for (int b = 7; b >= 0; --b) out.push_back((byte >> b) & 1);
  }
  return out;
}

BitString build_masked_triple(const BitString& r1, const BitString& c, const BitString& r2) {
  return concat(xor_ext(r1, c), concat(c, xor_ext(r2, c)));
}

RecoveredTriple split_triple(const BitString& payload, const BitString& local_c) {
  const std::size_t w = local_c.width();
  if (payload.width() != 3 * w) {
    throw std::invalid_argument("payload width must be three times the correlation width");
  }
  RecoveredTriple out;
  out.r1 = xor_ext(payload.slice(0, w), local_c);
  out.mid = payload.slice(w, w);
  out.r2 = xor_ext(payload.slice(2 * w, w), local_c);
  return out;
}

RecoveredTriple recover_triple(const BitString& payload, const BitString& local_c) {
  auto triple = split_triple(payload, local_c);
  const std::size_t bad = hamming_distance(triple.mid, local_c);
  if (bad > 0) throw EavesdropDetected(bad, local_c.width());
  return triple;
}

namespace {

struct SessionRngs {
  Rng alice;
  Rng bob;
};

Rng& rng_for(SessionRngs& rngs, Party p) {
  return p == Party::Alice ? rngs.alice : rngs.bob;
}

const std::vector<GateSpec>& unitary_for(const ProtocolConfig& cfg, Party p) {
  return p == Party::Alice ? cfg.alice_unitary : cfg.bob_unitary;
}

// One preparer's pair stream: prepare, apply the preparer's unitary, hand the
// second half over the quantum channel, measure both halves. Returns the bits
// seen by the preparer (kept half) and by the receiver (transmitted half).
std::pair<BitString, BitString> run_pair_stream(Party preparer, const ProtocolConfig& cfg,
                                                Channels& ch, SessionRngs& rngs,
                                                std::uint64_t& next_register_id) {
  const Party receiver = other(preparer);
  const auto& unitary = unitary_for(cfg, preparer);
  BitString kept;
  BitString received;

  const auto prepare_and_send = [&]() {
    SharedRegister reg(make_bell_pair(cfg.bell_kind), preparer, next_register_id++);
    for (const auto& g : unitary) reg.apply(preparer, g);
    ch.quantum.transmit(reg, 1, receiver);
    return reg;
  };

  if (cfg.semantics == MeasurementSemantics::Outcome) {
    kept.reserve(static_cast<std::size_t>(cfg.width));
    received.reserve(static_cast<std::size_t>(cfg.width));
    for (int i = 0; i < cfg.width; ++i) {
      SharedRegister reg = prepare_and_send();
      kept.push_back(reg.measure(preparer, 0, cfg.basis, rng_for(rngs, preparer)));
      received.push_back(reg.measure(receiver, 1, cfg.basis, rng_for(rngs, receiver)));
    }
  } else {
    SharedRegister reg = prepare_and_send();
    kept = quantize(reg.prob_of(preparer, 0, 0, cfg.basis), cfg.width);
    received = quantize(reg.prob_of(receiver, 1, 0, cfg.basis), cfg.width);
  }
  return {kept, received};
}

void fill_eve_view(EveView& eve, const Channels& ch) {
  eve.classical_log = ch.classical.eve_log();
  for (const auto& hit : ch.quantum.interceptions()) {
    eve.quantum_bits.push_back(hit.outcome);
    eve.quantum_bases.push_back(hit.basis == Basis::Hadamard ? 1 : 0);
  }
}

double mismatch_rate(const BitString& a, const BitString& b) {
  if (a.width() == 0 || a.width() != b.width()) return 0.0;
  return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.width());
}

}  // namespace

std::optional<BitString> replay_protocol1_key(const std::vector<BitString>& log, int rounds) {
  if (rounds < 1 || log.size() != static_cast<std::size_t>(rounds) * 4) return std::nullopt;
  BitString shared_acc;
  BitString combined_acc;
  for (int r = 0; r < rounds; ++r) {
    const auto& m13 = log[static_cast<std::size_t>(r) * 4 + 0];
    const auto& m24 = log[static_cast<std::size_t>(r) * 4 + 1];
    const auto& mr_a = log[static_cast<std::size_t>(r) * 4 + 2];
    const auto& mr_b = log[static_cast<std::size_t>(r) * 4 + 3];
    if (m13.width() != m24.width() || mr_a.width() != mr_b.width() ||
        mr_a.width() != m13.width() + m24.width()) {
      return std::nullopt;
    }
    combined_acc = concat(combined_acc, concat(m13, m24));
    shared_acc = concat(shared_acc, xor_ext(mr_a, mr_b));
  }
  return derive_key(shared_acc, combined_acc);
}

SessionOutcome run_protocol1(const ProtocolConfig& cfg, Channels& ch) {
  validate(cfg);
  if (cfg.protocol != 1) throw std::invalid_argument("config is not for protocol 1");

  SessionRngs rngs{Rng(cfg.alice_seed), Rng(cfg.bob_seed)};
  std::uint64_t next_register_id = 1;
  const PrepSpec prep = PrepSpec::hadamard();

  Protocol1View alice;
  Protocol1View bob;
  BitString alice_shared_acc, alice_combined_acc;
  BitString bob_shared_acc, bob_combined_acc;

  for (int round = 0; round < cfg.rounds; ++round) {
    alice.random_value = random_bits(prep, cfg.n, cfg.width, rngs.alice);
    bob.random_value = random_bits(prep, cfg.n, cfg.width, rngs.bob);

    auto [m1, m4] = run_pair_stream(Party::Alice, cfg, ch, rngs, next_register_id);
    auto [m2, m3] = run_pair_stream(Party::Bob, cfg, ch, rngs, next_register_id);
    alice.m_own = m1;
    alice.m_recv = m3;
    bob.m_own = m2;
    bob.m_recv = m4;

    alice.m_pair = xor_ext(m1, m3);   // M13
    bob.m_pair = xor_ext(m2, m4);     // M24
    bob.m_pair_peer = ch.classical.transmit(alice.m_pair);
    alice.m_pair_peer = ch.classical.transmit(bob.m_pair);

    alice.m_combined = concat(alice.m_pair, alice.m_pair_peer);  // M13 || M24
    bob.m_combined = concat(bob.m_pair_peer, bob.m_pair);

    alice.masked_own = xor_ext(alice.m_combined, alice.random_value);  // MR_A
    bob.masked_own = xor_ext(bob.m_combined, bob.random_value);        // MR_B
    bob.masked_peer = ch.classical.transmit(alice.masked_own);
    alice.masked_peer = ch.classical.transmit(bob.masked_own);

    alice.shared = xor_ext(alice.masked_own, alice.masked_peer);  // MR_AB
    bob.shared = xor_ext(bob.masked_peer, bob.masked_own);

    alice_shared_acc = concat(alice_shared_acc, alice.shared);
    alice_combined_acc = concat(alice_combined_acc, alice.m_combined);
    bob_shared_acc = concat(bob_shared_acc, bob.shared);
    bob_combined_acc = concat(bob_combined_acc, bob.m_combined);
  }

  alice.key = derive_key(alice_shared_acc, alice_combined_acc);
  bob.key = derive_key(bob_shared_acc, bob_combined_acc);

  SessionOutcome outcome;
  outcome.protocol = 1;
  outcome.agreed = alice.key == bob.key;
  outcome.c_mismatch_rate = mismatch_rate(alice.shared, bob.shared);
  outcome.p1 = std::make_pair(alice, bob);
  fill_eve_view(outcome.eve, ch);
  if (auto eve_key = replay_protocol1_key(outcome.eve.classical_log, cfg.rounds)) {
    outcome.eve.knows_key = *eve_key == alice.key;
  }
  return outcome;
}

SessionOutcome run_protocol3(const ProtocolConfig& cfg, Channels& ch) {
  validate(cfg);
  if (cfg.protocol != 3) throw std::invalid_argument("config is not for protocol 3");

  SessionRngs rngs{Rng(cfg.alice_seed), Rng(cfg.bob_seed)};
  std::uint64_t next_register_id = 1;
  const PrepSpec prep = PrepSpec::hadamard();

  Protocol3View alice;
  Protocol3View bob;

  auto [m1, m4] = run_pair_stream(Party::Alice, cfg, ch, rngs, next_register_id);
  auto [m2, m3] = run_pair_stream(Party::Bob, cfg, ch, rngs, next_register_id);
  alice.m_own = m1;
  alice.m_recv = m3;
  bob.m_own = m2;
  bob.m_recv = m4;

  alice.c = xor_ext(m1, m3);
  bob.c = xor_ext(m2, m4);

  alice.r1 = random_bits(prep, cfg.n_parts[0], cfg.width, rngs.alice);
  alice.r2 = random_bits(prep, cfg.n_parts[1], cfg.width, rngs.alice);
  bob.r1 = random_bits(prep, cfg.n_parts[2], cfg.width, rngs.bob);
  bob.r2 = random_bits(prep, cfg.n_parts[3], cfg.width, rngs.bob);

  alice.sent = build_masked_triple(alice.r1, alice.c, alice.r2);  // Y
  bob.sent = build_masked_triple(bob.r1, bob.c, bob.r2);          // Z
  bob.received = ch.classical.transmit(alice.sent);
  alice.received = ch.classical.transmit(bob.sent);

  const auto at_bob = split_triple(bob.received, bob.c);
  bob.recovered_mid = at_bob.mid;
  bob.peer_r1 = at_bob.r1;
  bob.peer_r2 = at_bob.r2;
  const std::size_t bob_bad = hamming_distance(at_bob.mid, bob.c);

  const auto at_alice = split_triple(alice.received, alice.c);
  alice.recovered_mid = at_alice.mid;
  alice.peer_r1 = at_alice.r1;
  alice.peer_r2 = at_alice.r2;
  const std::size_t alice_bad = hamming_distance(at_alice.mid, alice.c);

  SessionOutcome outcome;
  outcome.protocol = 3;
  outcome.c_mismatch_rate = mismatch_rate(alice.c, bob.c);

  if (bob_bad > 0 || alice_bad > 0) {
    outcome.aborted = true;
    outcome.embedded_mismatches = bob_bad > 0 ? bob_bad : alice_bad;
    const EavesdropDetected err(outcome.embedded_mismatches, static_cast<std::size_t>(cfg.width));
    outcome.abort_reason = err.what();
  } else {
    alice.k = concat(xor_ext(alice.r1, alice.peer_r1), xor_ext(alice.r2, alice.peer_r2));
    bob.k = concat(xor_ext(bob.peer_r1, bob.r1), xor_ext(bob.peer_r2, bob.r2));
    alice.key = derive_key(alice.k, alice.c);
    bob.key = derive_key(bob.k, bob.c);
    outcome.agreed = alice.key == bob.key;
  }

  outcome.p3 = std::make_pair(alice, bob);
  fill_eve_view(outcome.eve, ch);
  return outcome;
}

SessionOutcome run_session(const ProtocolConfig& cfg, const EveConfig& eve) {
  validate(cfg);
  Channels ch = make_channels(eve, cfg.eve_seed);
  return cfg.protocol == 1 ? run_protocol1(cfg, ch) : run_protocol3(cfg, ch);
}

}  // namespace qkd
