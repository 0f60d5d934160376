#include "qkd/session.hpp"

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "qkd/errors.hpp"

namespace qkd {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require_known_keys(const json& obj, std::initializer_list<const char*> allowed,
                        const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key \"" + item.key() + "\"" +
                        (where.empty() ? "" : " in " + where));
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key \"") + key + "\" has the wrong type");
  }
}

std::string get_string_or(const json& obj, const char* key, const std::string& fallback) {
  return get_or<std::string>(obj, key, fallback);
}

MeasurementSemantics parse_semantics(const std::string& s) {
  if (s == "outcome") return MeasurementSemantics::Outcome;
  if (s == "probability") return MeasurementSemantics::Probability;
  throw ConfigError("semantics must be \"outcome\" or \"probability\", got \"" + s + "\"");
}

BellKind parse_bell_kind(const std::string& s) {
  if (s == "phi_plus") return BellKind::PhiPlus;
  if (s == "phi_minus") return BellKind::PhiMinus;
  if (s == "psi_plus") return BellKind::PsiPlus;
  if (s == "psi_minus") return BellKind::PsiMinus;
  throw ConfigError("unknown bell_kind \"" + s + "\"");
}

Basis parse_basis(const std::string& s) {
  if (s == "computational") return Basis::Computational;
  if (s == "hadamard") return Basis::Hadamard;
  throw ConfigError("unknown basis \"" + s + "\"");
}

QuantumEveMode parse_quantum_mode(const std::string& s) {
  if (s == "off") return QuantumEveMode::Off;
  if (s == "intercept-resend") return QuantumEveMode::InterceptResend;
  throw ConfigError("unknown eve quantum_mode \"" + s + "\"");
}

EveBasisStrategy parse_basis_strategy(const std::string& s) {
  if (s == "random") return EveBasisStrategy::Random;
  if (s == "computational") return EveBasisStrategy::FixedComputational;
  if (s == "hadamard") return EveBasisStrategy::FixedHadamard;
  throw ConfigError("unknown eve basis_strategy \"" + s + "\"");
}

ClassicalEveMode parse_classical_mode(const std::string& s) {
  if (s == "passive") return ClassicalEveMode::Passive;
  if (s == "tamper") return ClassicalEveMode::Tamper;
  throw ConfigError("unknown eve classical_mode \"" + s + "\"");
}

const char* to_string(QuantumEveMode m) {
  return m == QuantumEveMode::Off ? "off" : "intercept-resend";
}

const char* to_string(EveBasisStrategy s) {
  switch (s) {
    case EveBasisStrategy::Random: return "random";
    case EveBasisStrategy::FixedComputational: return "computational";
    case EveBasisStrategy::FixedHadamard: return "hadamard";
  }
  return "?";
}

const char* to_string(ClassicalEveMode m) {
  return m == ClassicalEveMode::Passive ? "passive" : "tamper";
}

Gate parse_gate_name(const std::string& s) {
  if (s == "h") return Gate::H;
  if (s == "x") return Gate::X;
  if (s == "z") return Gate::Z;
  if (s == "cx") return Gate::CX;
  if (s == "swap") return Gate::Swap;
  throw ConfigError("unknown gate \"" + s + "\"");
}

std::vector<GateSpec> parse_gate_list(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + " must be an array of gates");
  std::vector<GateSpec> gates;
  for (const auto& g : arr) {
    require_known_keys(g, {"gate", "targets"}, where);
    if (!g.contains("gate") || !g.contains("targets")) {
      throw ConfigError("each gate in " + where + " needs \"gate\" and \"targets\"");
    }
    try {
      const Gate gate = parse_gate_name(g.at("gate").get<std::string>());
      const auto targets = g.at("targets").get<std::vector<int>>();
      if (targets.size() == 1) {
        gates.push_back(GateSpec::single(gate, targets[0]));
      } else if (targets.size() == 2) {
        gates.push_back(GateSpec::two(gate, targets[0], targets[1]));
      } else {
        throw std::invalid_argument("gates take one or two targets");
      }
    } catch (const json::exception&) {
      throw ConfigError(where + ": gates need a name string and an integer target list");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return gates;
}

ordered_json gate_list_to_json(const std::vector<GateSpec>& gates) {
  ordered_json arr = ordered_json::array();
  for (const auto& g : gates) {
    ordered_json item;
    item["gate"] = to_string(g.gate);
    if (g.arity() == 1) {
      item["targets"] = {g.target0};
    } else {
      item["targets"] = {g.target0, g.target1};
    }
    arr.push_back(item);
  }
  return arr;
}

ordered_json bits_to_json(const BitString& bits) {
  ordered_json j;
  j["hex"] = bits.to_hex();
  j["width"] = bits.width();
  return j;
}

BitString bits_from_json(const json& j) {
  try {
    return BitString::from_hex(j.at("hex").get<std::string>(), j.at("width").get<std::size_t>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed bit-string object: ") + e.what());
  }
}

ordered_json p1_view_to_json(const Protocol1View& v, bool is_alice) {
  ordered_json j;
  j[is_alice ? "R_A" : "R_B"] = bits_to_json(v.random_value);
  j[is_alice ? "M1" : "M2"] = bits_to_json(v.m_own);
  j[is_alice ? "M3" : "M4"] = bits_to_json(v.m_recv);
  j[is_alice ? "M13" : "M24"] = bits_to_json(v.m_pair);
  j[is_alice ? "M24" : "M13"] = bits_to_json(v.m_pair_peer);
  j["M1234"] = bits_to_json(v.m_combined);
  j[is_alice ? "MR_A" : "MR_B"] = bits_to_json(v.masked_own);
  j[is_alice ? "MR_B" : "MR_A"] = bits_to_json(v.masked_peer);
  j["MR_AB"] = bits_to_json(v.shared);
  j["Key"] = bits_to_json(v.key);
  return j;
}

Protocol1View p1_view_from_json(const json& j, bool is_alice) {
  Protocol1View v;
  v.random_value = bits_from_json(j.at(is_alice ? "R_A" : "R_B"));
  v.m_own = bits_from_json(j.at(is_alice ? "M1" : "M2"));
  v.m_recv = bits_from_json(j.at(is_alice ? "M3" : "M4"));
  v.m_pair = bits_from_json(j.at(is_alice ? "M13" : "M24"));
  v.m_pair_peer = bits_from_json(j.at(is_alice ? "M24" : "M13"));
  v.m_combined = bits_from_json(j.at("M1234"));
  v.masked_own = bits_from_json(j.at(is_alice ? "MR_A" : "MR_B"));
  v.masked_peer = bits_from_json(j.at(is_alice ? "MR_B" : "MR_A"));
  v.shared = bits_from_json(j.at("MR_AB"));
  v.key = bits_from_json(j.at("Key"));
  return v;
}

ordered_json p3_view_to_json(const Protocol3View& v, bool is_alice) {
  ordered_json j;
  j[is_alice ? "M1" : "M2"] = bits_to_json(v.m_own);
  j[is_alice ? "M3" : "M4"] = bits_to_json(v.m_recv);
  j["C"] = bits_to_json(v.c);
  j[is_alice ? "R_A1" : "R_B1"] = bits_to_json(v.r1);
  j[is_alice ? "R_A2" : "R_B2"] = bits_to_json(v.r2);
  j[is_alice ? "Y" : "Z"] = bits_to_json(v.sent);
  j[is_alice ? "Z" : "Y"] = bits_to_json(v.received);
  j["C_recovered"] = bits_to_json(v.recovered_mid);
  j[is_alice ? "R_B1" : "R_A1"] = bits_to_json(v.peer_r1);
  j[is_alice ? "R_B2" : "R_A2"] = bits_to_json(v.peer_r2);
  j["K"] = bits_to_json(v.k);
  j["Key"] = bits_to_json(v.key);
  return j;
}

Protocol3View p3_view_from_json(const json& j, bool is_alice) {
  Protocol3View v;
  v.m_own = bits_from_json(j.at(is_alice ? "M1" : "M2"));
  v.m_recv = bits_from_json(j.at(is_alice ? "M3" : "M4"));
  v.c = bits_from_json(j.at("C"));
  v.r1 = bits_from_json(j.at(is_alice ? "R_A1" : "R_B1"));
  v.r2 = bits_from_json(j.at(is_alice ? "R_A2" : "R_B2"));
  v.sent = bits_from_json(j.at(is_alice ? "Y" : "Z"));
  v.received = bits_from_json(j.at(is_alice ? "Z" : "Y"));
  v.recovered_mid = bits_from_json(j.at("C_recovered"));
  v.peer_r1 = bits_from_json(j.at(is_alice ? "R_B1" : "R_A1"));
  v.peer_r2 = bits_from_json(j.at(is_alice ? "R_B2" : "R_A2"));
  v.k = bits_from_json(j.at("K"));
  v.key = bits_from_json(j.at("Key"));
  return v;
}

}  // namespace

SessionConfig parse_session_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  require_known_keys(j,
                     {"protocol", "width", "semantics", "bell_kind", "basis", "rounds", "shots",
                      "rng_shots", "unitary", "eve", "seeds"},
                     "");
  SessionConfig cfg;
  auto& p = cfg.protocol;
  p.protocol = get_or<int>(j, "protocol", p.protocol);
  p.width = get_or<int>(j, "width", p.width);
  p.semantics = parse_semantics(get_string_or(j, "semantics", to_string(p.semantics)));
  p.bell_kind = parse_bell_kind(get_string_or(j, "bell_kind", qkd::to_string(p.bell_kind)));
  p.basis = parse_basis(get_string_or(j, "basis", qkd::to_string(p.basis)));
  p.rounds = get_or<int>(j, "rounds", p.rounds);
  p.shots = get_or<std::int64_t>(j, "shots", p.shots);

  if (j.contains("rng_shots")) {
    const auto& rs = j.at("rng_shots");
    require_known_keys(rs, {"n", "n1", "n2", "n3", "n4"}, "\"rng_shots\"");
    p.n = get_or<std::int64_t>(rs, "n", p.n);
    p.n_parts[0] = get_or<std::int64_t>(rs, "n1", p.n_parts[0]);
    p.n_parts[1] = get_or<std::int64_t>(rs, "n2", p.n_parts[1]);
    p.n_parts[2] = get_or<std::int64_t>(rs, "n3", p.n_parts[2]);
    p.n_parts[3] = get_or<std::int64_t>(rs, "n4", p.n_parts[3]);
  }

  if (j.contains("unitary")) {
    const auto& u = j.at("unitary");
    require_known_keys(u, {"alice", "bob"}, "\"unitary\"");
    if (u.contains("alice")) p.alice_unitary = parse_gate_list(u.at("alice"), "\"unitary.alice\"");
    if (u.contains("bob")) p.bob_unitary = parse_gate_list(u.at("bob"), "\"unitary.bob\"");
  }

  if (j.contains("eve")) {
    const auto& e = j.at("eve");
    require_known_keys(e, {"quantum_mode", "basis_strategy", "classical_mode", "flip_probability"},
                       "\"eve\"");
    cfg.eve.quantum_mode =
        parse_quantum_mode(get_string_or(e, "quantum_mode", to_string(cfg.eve.quantum_mode)));
    cfg.eve.basis_strategy =
        parse_basis_strategy(get_string_or(e, "basis_strategy", to_string(cfg.eve.basis_strategy)));
    cfg.eve.classical_mode =
        parse_classical_mode(get_string_or(e, "classical_mode", to_string(cfg.eve.classical_mode)));
    cfg.eve.flip_probability = get_or<double>(e, "flip_probability", cfg.eve.flip_probability);
    if (cfg.eve.flip_probability < 0.0 || cfg.eve.flip_probability > 1.0) {
      throw ConfigError("eve.flip_probability must lie in [0, 1]");
    }
  }

  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    require_known_keys(s, {"alice", "bob", "eve"}, "\"seeds\"");
    p.alice_seed = get_or<std::uint64_t>(s, "alice", p.alice_seed);
    p.bob_seed = get_or<std::uint64_t>(s, "bob", p.bob_seed);
    p.eve_seed = get_or<std::uint64_t>(s, "eve", p.eve_seed);
  }

  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

SessionConfig load_session_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file \"" + path + "\" is not valid JSON: " + e.what());
  }
  return parse_session_config(j);
}

ordered_json config_to_json(const SessionConfig& cfg) {
  const auto& p = cfg.protocol;
  ordered_json j;
  j["protocol"] = p.protocol;
  j["width"] = p.width;
  j["semantics"] = to_string(p.semantics);
  j["bell_kind"] = to_string(p.bell_kind);
  j["basis"] = to_string(p.basis);
  j["rounds"] = p.rounds;
  j["shots"] = p.shots;
  j["rng_shots"] = {{"n", p.n},
                    {"n1", p.n_parts[0]},
                    {"n2", p.n_parts[1]},
                    {"n3", p.n_parts[2]},
                    {"n4", p.n_parts[3]}};
  j["unitary"] = {{"alice", gate_list_to_json(p.alice_unitary)},
                  {"bob", gate_list_to_json(p.bob_unitary)}};
  j["eve"] = {{"quantum_mode", to_string(cfg.eve.quantum_mode)},
              {"basis_strategy", to_string(cfg.eve.basis_strategy)},
              {"classical_mode", to_string(cfg.eve.classical_mode)},
              {"flip_probability", cfg.eve.flip_probability}};
  j["seeds"] = {{"alice", p.alice_seed}, {"bob", p.bob_seed}, {"eve", p.eve_seed}};
  return j;
}

ordered_json report_to_json(const SessionReport& report) {
  const auto& o = report.outcome;
  ordered_json j;
  j["config"] = config_to_json(report.config);
  j["protocol"] = o.protocol;
  if (o.p1) {
    j["alice"] = p1_view_to_json(o.p1->first, true);
    j["bob"] = p1_view_to_json(o.p1->second, false);
  }
  if (o.p3) {
    j["alice"] = p3_view_to_json(o.p3->first, true);
    j["bob"] = p3_view_to_json(o.p3->second, false);
  }
  j["agreed"] = o.agreed;
  j["aborted"] = o.aborted;
  j["abort_reason"] = o.abort_reason;
  j["embedded_mismatches"] = o.embedded_mismatches;
  ordered_json eve;
  eve["classical_log"] = ordered_json::array();
  for (const auto& entry : o.eve.classical_log) eve["classical_log"].push_back(bits_to_json(entry));
  eve["quantum_outcomes"] = {{"bits", bits_to_json(o.eve.quantum_bits)},
                             {"bases", bits_to_json(o.eve.quantum_bases)}};
  eve["c_mismatch_rate"] = o.c_mismatch_rate;
  eve["eve_knowledge"] = o.eve.knows_key;
  j["eve"] = eve;
  return j;
}

SessionReport report_from_json(const json& j) {
  SessionReport report;
  report.config = parse_session_config(j.at("config"));
  auto& o = report.outcome;
  o.protocol = j.at("protocol").get<int>();
  if (o.protocol == 1) {
    o.p1 = std::make_pair(p1_view_from_json(j.at("alice"), true),
                          p1_view_from_json(j.at("bob"), false));
  } else {
    o.p3 = std::make_pair(p3_view_from_json(j.at("alice"), true),
                          p3_view_from_json(j.at("bob"), false));
  }
  o.agreed = j.at("agreed").get<bool>();
  o.aborted = j.at("aborted").get<bool>();
  o.abort_reason = j.at("abort_reason").get<std::string>();
  o.embedded_mismatches = j.at("embedded_mismatches").get<std::size_t>();
  const auto& eve = j.at("eve");
  for (const auto& entry : eve.at("classical_log")) {
    o.eve.classical_log.push_back(bits_from_json(entry));
  }
  o.eve.quantum_bits = bits_from_json(eve.at("quantum_outcomes").at("bits"));
  o.eve.quantum_bases = bits_from_json(eve.at("quantum_outcomes").at("bases"));
  o.c_mismatch_rate = eve.at("c_mismatch_rate").get<double>();
  o.eve.knows_key = eve.at("eve_knowledge").get<bool>();
  return report;
}

SessionReport run_session_report(const SessionConfig& cfg) {
  return SessionReport{cfg, run_session(cfg.protocol, cfg.eve)};
}

}  // namespace qkd
