#include <doctest.h>

#include <cmath>

#include "qkd/channel.hpp"
#include "qkd/errors.hpp"

using namespace qkd;

namespace {

EveConfig eve_off() { return EveConfig{}; }

EveConfig eve_intercept(EveBasisStrategy strategy) {
  EveConfig cfg;
  cfg.quantum_mode = QuantumEveMode::InterceptResend;
  cfg.basis_strategy = strategy;
  return cfg;
}

}  // namespace

TEST_CASE("holdership gates every register operation") {
  SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, 1);
  Rng rng(1);
  CHECK_NOTHROW(reg.apply(Party::Alice, GateSpec::single(Gate::Z, 0)));
  CHECK_THROWS_AS(reg.apply(Party::Bob, GateSpec::single(Gate::Z, 0)), NoCloneViolation);
  CHECK_THROWS_AS(reg.measure(Party::Bob, 1, Basis::Computational, rng), NoCloneViolation);
  CHECK_THROWS_AS(reg.prob_of(Party::Bob, 0, 0, Basis::Computational), NoCloneViolation);
  CHECK_THROWS_AS(reg.measure(Party::Alice, 2, Basis::Computational, rng), std::invalid_argument);
}

TEST_CASE("transmission revokes the sender and empowers the receiver") {
  QuantumChannel ch(eve_off(), 7);
  SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, 1);
  Rng rng(2);

  const auto before = reg.state().amplitudes();
  const QubitRef ref = ch.transmit(reg, 1, Party::Bob);
  CHECK(ref.register_id == 1);
  CHECK(ref.index == 1);
  // A quiet channel does not touch the joint state at all.
  CHECK(reg.state().amplitudes() == before);

  CHECK_THROWS_AS(reg.measure(Party::Alice, 1, Basis::Computational, rng), NoCloneViolation);
  CHECK_THROWS_AS(reg.prob_of(Party::Alice, 1, 0, Basis::Computational), NoCloneViolation);
  CHECK_THROWS_AS(reg.apply(Party::Alice, GateSpec::single(Gate::X, 1)), NoCloneViolation);
  CHECK_THROWS_AS(reg.apply(Party::Alice, GateSpec::two(Gate::CX, 0, 1)), NoCloneViolation);
  CHECK_NOTHROW(reg.measure(Party::Bob, 1, Basis::Computational, rng));
  CHECK_NOTHROW(reg.measure(Party::Alice, 0, Basis::Computational, rng));
}

TEST_CASE("double transmission and self-transmission are protocol violations") {
  QuantumChannel ch(eve_off(), 7);
  SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, 1);
  ch.transmit(reg, 1, Party::Bob);
  CHECK_THROWS_AS(ch.transmit(reg, 1, Party::Alice), ProtocolViolation);

  SharedRegister reg2(make_bell_pair(BellKind::PhiPlus), Party::Alice, 2);
  CHECK_THROWS_AS(ch.transmit(reg2, 0, Party::Alice), ProtocolViolation);
}

TEST_CASE("clone_attempt fails unconditionally") {
  CHECK_THROWS_AS(clone_attempt(QubitRef{1, 0}), NoCloneViolation);
  CHECK_THROWS_AS(clone_attempt(QubitRef{99, 3}), NoCloneViolation);
}

TEST_CASE("quiet channel preserves the correlations of phi+") {
  QuantumChannel ch(eve_off(), 3);
  Rng alice_rng(10), bob_rng(11);
  for (int i = 0; i < 500; ++i) {
    SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, static_cast<std::uint64_t>(i));
    ch.transmit(reg, 1, Party::Bob);
    const int a = reg.measure(Party::Alice, 0, Basis::Computational, alice_rng);
    const int b = reg.measure(Party::Bob, 1, Basis::Computational, bob_rng);
    CHECK(a == b);
  }
  CHECK(ch.interceptions().empty());
}

TEST_CASE("computational interception leaves computational correlations intact") {
  QuantumChannel ch(eve_intercept(EveBasisStrategy::FixedComputational), 4);
  Rng alice_rng(12), bob_rng(13);
  for (int i = 0; i < 500; ++i) {
    SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, static_cast<std::uint64_t>(i));
    ch.transmit(reg, 1, Party::Bob);
    const int a = reg.measure(Party::Alice, 0, Basis::Computational, alice_rng);
    const int b = reg.measure(Party::Bob, 1, Basis::Computational, bob_rng);
    CHECK(a == b);
  }
  CHECK(ch.interceptions().size() == 500);
}

TEST_CASE("random-basis interception disturbs a quarter of the pairs") {
  QuantumChannel ch(eve_intercept(EveBasisStrategy::Random), 5);
  Rng alice_rng(14), bob_rng(15);
  const int pairs = 10000;
  int disagreements = 0;
  for (int i = 0; i < pairs; ++i) {
    SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, static_cast<std::uint64_t>(i));
    ch.transmit(reg, 1, Party::Bob);
    const int a = reg.measure(Party::Alice, 0, Basis::Computational, alice_rng);
    const int b = reg.measure(Party::Bob, 1, Basis::Computational, bob_rng);
    disagreements += a != b;
  }
  const double rate = static_cast<double>(disagreements) / pairs;
  CHECK(std::abs(rate - 0.25) < 0.02);
}

TEST_CASE("interception records hold only outcomes and basis choices") {
  QuantumChannel ch(eve_intercept(EveBasisStrategy::Random), 6);
  for (int i = 0; i < 50; ++i) {
    SharedRegister reg(make_bell_pair(BellKind::PhiPlus), Party::Alice, static_cast<std::uint64_t>(i));
    ch.transmit(reg, 1, Party::Bob);
  }
  REQUIRE(ch.interceptions().size() == 50);
  for (const auto& hit : ch.interceptions()) {
    CHECK((hit.outcome == 0 || hit.outcome == 1));
    CHECK((hit.basis == Basis::Computational || hit.basis == Basis::Hadamard));
  }
}

TEST_CASE("interception is deterministic in the channel seed") {
  for (auto strategy : {EveBasisStrategy::Random, EveBasisStrategy::FixedHadamard}) {
    QuantumChannel ch1(eve_intercept(strategy), 99);
    QuantumChannel ch2(eve_intercept(strategy), 99);
    for (int i = 0; i < 64; ++i) {
      SharedRegister r1(make_bell_pair(BellKind::PsiPlus), Party::Alice, static_cast<std::uint64_t>(i));
      SharedRegister r2(make_bell_pair(BellKind::PsiPlus), Party::Alice, static_cast<std::uint64_t>(i));
      ch1.transmit(r1, 1, Party::Bob);
      ch2.transmit(r2, 1, Party::Bob);
      CHECK(r1.state().amplitudes() == r2.state().amplitudes());
    }
    for (std::size_t i = 0; i < ch1.interceptions().size(); ++i) {
      CHECK(ch1.interceptions()[i].outcome == ch2.interceptions()[i].outcome);
      CHECK(ch1.interceptions()[i].basis == ch2.interceptions()[i].basis);
    }
  }
}

TEST_CASE("passive classical delivery is bit-exact and fully logged") {
  ClassicalChannel ch(eve_off(), 1);
  const auto payload = BitString::from_string("101101");
  CHECK(ch.transmit(payload) == payload);
  const auto second = BitString::from_string("0011");
  ch.transmit(second);
  REQUIRE(ch.eve_log().size() == 2);
  CHECK(ch.eve_log()[0] == payload);
  CHECK(ch.eve_log()[1] == second);
}

TEST_CASE("tampering flips bits at the configured rate") {
  EveConfig always;
  always.classical_mode = ClassicalEveMode::Tamper;
  always.flip_probability = 1.0;
  ClassicalChannel flip_all(always, 2);
  CHECK(flip_all.transmit(BitString::from_string("1010")) == BitString::from_string("0101"));
  // The log still holds the payload as sent.
  CHECK(flip_all.eve_log()[0] == BitString::from_string("1010"));

  EveConfig never;
  never.classical_mode = ClassicalEveMode::Tamper;
  never.flip_probability = 0.0;
  ClassicalChannel flip_none(never, 3);
  const auto payload = BitString::from_string("110011");
  CHECK(flip_none.transmit(payload) == payload);

  EveConfig half;
  half.classical_mode = ClassicalEveMode::Tamper;
  half.flip_probability = 0.5;
  ClassicalChannel coin(half, 4);
  BitString wide(10000);
  const auto delivered = coin.transmit(wide);
  const double rate = static_cast<double>(delivered.count_ones()) / 10000.0;
  CHECK(std::abs(rate - 0.5) < 0.05);
}
