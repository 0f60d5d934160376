#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qkd/errors.hpp"
#include "qkd/harness.hpp"
#include "qkd/session.hpp"

using namespace qkd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "qkd_harness_tests";
  fs::create_directories(dir);
  return dir;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("qkdsim");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

SessionConfig seeded_default_config(std::uint64_t seed) {
  SessionConfig cfg;
  cfg.protocol.alice_seed = derive_seed(seed, 0);
  cfg.protocol.bob_seed = derive_seed(seed, 1);
  cfg.protocol.eve_seed = derive_seed(seed, 2);
  return cfg;
}

}  // namespace

TEST_CASE("an empty config object yields the documented defaults") {
  const auto cfg = parse_session_config(nlohmann::json::object());
  CHECK(cfg.protocol.protocol == 3);
  CHECK(cfg.protocol.width == 64);
  CHECK(cfg.protocol.semantics == MeasurementSemantics::Outcome);
  CHECK(cfg.protocol.bell_kind == BellKind::PhiPlus);
  CHECK(cfg.protocol.basis == Basis::Computational);
  CHECK(cfg.protocol.alice_unitary.empty());
  CHECK(cfg.protocol.bob_unitary.empty());
  CHECK(cfg.eve.quantum_mode == QuantumEveMode::Off);
  CHECK(cfg.eve.classical_mode == ClassicalEveMode::Passive);
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    parse_session_config(nlohmann::json{{"protcol", 3}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("protcol") != std::string::npos);
  }

  try {
    parse_session_config(nlohmann::json{{"eve", {{"basis", "random"}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("basis") != std::string::npos);
    CHECK(std::string(e.what()).find("eve") != std::string::npos);
  }
}

TEST_CASE("type and value errors are diagnosed") {
  CHECK_THROWS_AS(parse_session_config(nlohmann::json{{"width", "wide"}}), ConfigError);
  CHECK_THROWS_AS(parse_session_config(nlohmann::json{{"protocol", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_session_config(nlohmann::json{{"semantics", "exact"}}), ConfigError);
  CHECK_THROWS_AS(parse_session_config(nlohmann::json{{"eve", {{"flip_probability", 1.5}}}}),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_session_config(nlohmann::json{
          {"unitary", {{"alice", {{{"gate", "cx"}, {"targets", {0, 0}}}}}}}}),
      ConfigError);
}

TEST_CASE("configs survive a serialization round trip") {
  nlohmann::json j = {
      {"protocol", 1},
      {"width", 24},
      {"semantics", "probability"},
      {"bell_kind", "psi_minus"},
      {"basis", "hadamard"},
      {"rounds", 2},
      {"rng_shots", {{"n", 99}, {"n2", 17}}},
      {"unitary",
       {{"alice", {{{"gate", "x"}, {"targets", {0}}}, {{"gate", "cx"}, {"targets", {0, 1}}}}},
        {"bob", nlohmann::json::array()}}},
      {"eve",
       {{"quantum_mode", "intercept-resend"},
        {"basis_strategy", "hadamard"},
        {"classical_mode", "tamper"},
        {"flip_probability", 0.25}}},
      {"seeds", {{"alice", 10}, {"bob", 20}, {"eve", 30}}},
  };
  const auto cfg = parse_session_config(j);
  CHECK(cfg.protocol.protocol == 1);
  CHECK(cfg.protocol.n == 99);
  CHECK(cfg.protocol.n_parts[1] == 17);
  CHECK(cfg.protocol.alice_unitary.size() == 2);
  CHECK(cfg.eve.flip_probability == 0.25);
  const auto round_tripped = parse_session_config(config_to_json(cfg));
  CHECK(round_tripped == cfg);
}

TEST_CASE("session reports round-trip losslessly") {
  SessionConfig cfg = seeded_default_config(42);
  cfg.protocol.width = 16;

  SUBCASE("protocol 3, no eavesdropper") {}
  SUBCASE("protocol 1") { cfg.protocol.protocol = 1; }
  SUBCASE("protocol 3, aborted") {
    cfg.eve.quantum_mode = QuantumEveMode::InterceptResend;
  }

  const auto report = run_session_report(cfg);
  const auto j = report_to_json(report);
  const auto back = report_from_json(j);
  CHECK(back == report);
}

TEST_CASE("the default seed-42 report matches its golden file") {
  const auto report = run_session_report(seeded_default_config(42));
  CHECK(report.outcome.agreed);
  const std::string produced = report_to_json(report).dump(2) + "\n";
  const std::string golden = read_text(fs::path(QKD_TEST_DATA_DIR) / "report_seed42.json");
  CHECK(produced == golden);
}

TEST_CASE("rng sweep emits one well-formed row per shot count") {
  SweepOptions opt;
  opt.n_min = 1;
  opt.n_max = 100;
  std::ostringstream first;
  write_rng_sweep_csv(first, opt);
  std::ostringstream second;
  write_rng_sweep_csv(second, opt);
  CHECK(first.str() == second.str());

  std::istringstream lines(first.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "n,raw,unit,hex_bits");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    REQUIRE(c3 != std::string::npos);
    const double unit = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    CHECK(unit >= 0.0);
    CHECK(unit < 1.0);
  }
  CHECK(rows == 100);
}

TEST_CASE("identity-prep sweep rows quantize to zero") {
  SweepOptions opt;
  opt.n_min = 1;
  opt.n_max = 20;
  opt.prep = PrepSpec::identity();
  std::ostringstream out;
  write_rng_sweep_csv(out, opt);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "00000000");
  }
}

TEST_CASE("the first sweep rows match their golden file") {
  SweepOptions opt;
  opt.n_min = 1;
  opt.n_max = 5;
  std::ostringstream out;
  write_rng_sweep_csv(out, opt);
  CHECK(out.str() == read_text(fs::path(QKD_TEST_DATA_DIR) / "rng_sweep_head.csv"));
}

TEST_CASE("sweep range validation") {
  SweepOptions opt;
  opt.n_min = 0;
  std::ostringstream out;
  CHECK_THROWS_AS(write_rng_sweep_csv(out, opt), std::invalid_argument);
  opt.n_min = 10;
  opt.n_max = 5;
  CHECK_THROWS_AS(write_rng_sweep_csv(out, opt), std::invalid_argument);
}

TEST_CASE("a quiet eve-study reports full agreement") {
  StudyOptions opt;
  opt.trials = 20;
  opt.base.protocol.width = 16;
  std::ostringstream out;
  const auto stats = write_eve_study_csv(out, opt);
  CHECK(stats.mean_c_mismatch_rate == 0.0);
  CHECK(stats.abort_frequency == 0.0);
  CHECK(stats.agreement_frequency == 1.0);
  const auto text = out.str();
  CHECK(text.rfind("trial,c_mismatch_rate,aborted,agreed\n", 0) == 0);
  CHECK(text.find("\n# trials=20 ") != std::string::npos);
}

TEST_CASE("eve-study output does not depend on the thread count") {
  StudyOptions opt;
  opt.trials = 12;
  opt.base.protocol.width = 16;
  opt.base.eve.quantum_mode = QuantumEveMode::InterceptResend;

  std::ostringstream serial;
  opt.threads = 1;
  write_eve_study_csv(serial, opt);

  std::ostringstream parallel;
  opt.threads = 4;
  write_eve_study_csv(parallel, opt);

  CHECK(serial.str() == parallel.str());
}

TEST_CASE("cli run writes a report and returns the agreement exit code") {
  const auto out_path = temp_dir() / "run_report.json";
  CHECK(run_cli({"run", "--seed", "42", "--out", out_path.string()}) == kExitAgreed);
  const auto j = nlohmann::json::parse(read_text(out_path));
  CHECK(j.at("agreed").get<bool>());
  CHECK(j.at("protocol").get<int>() == 3);
  CHECK(j.at("alice").at("Key").at("width").get<int>() == 256);
}

TEST_CASE("cli run reports detected eavesdropping through exit code 2") {
  const auto out_path = temp_dir() / "run_abort.json";
  CHECK(run_cli({"run", "--seed", "1", "--eve", "intercept-resend", "--out",
                 out_path.string()}) == kExitDetectedAbort);
  const auto j = nlohmann::json::parse(read_text(out_path));
  CHECK(j.at("aborted").get<bool>());
  CHECK_FALSE(j.at("agreed").get<bool>());
}

TEST_CASE("cli run rejects a malformed config file") {
  const auto cfg_path = temp_dir() / "bad_config.json";
  write_text(cfg_path, R"({"protcol": 3})");
  CHECK(run_cli({"run", "--config", cfg_path.string()}) == kExitError);
  write_text(cfg_path, "not json");
  CHECK(run_cli({"run", "--config", cfg_path.string()}) == kExitError);
  CHECK(run_cli({"run", "--config", (temp_dir() / "missing.json").string()}) == kExitError);
}

TEST_CASE("cli run honors a config file with overrides") {
  const auto cfg_path = temp_dir() / "p1_config.json";
  write_text(cfg_path, R"({"protocol": 1, "width": 16, "seeds": {"alice": 5, "bob": 6, "eve": 7}})");
  const auto out_path = temp_dir() / "p1_report.json";
  CHECK(run_cli({"run", "--config", cfg_path.string(), "--out", out_path.string()}) == kExitAgreed);
  const auto j = nlohmann::json::parse(read_text(out_path));
  CHECK(j.at("protocol").get<int>() == 1);
  CHECK(j.at("config").at("width").get<int>() == 16);
  CHECK(j.at("eve").at("eve_knowledge").get<bool>());
}

TEST_CASE("cli run exits 1 when tampering breaks agreement without an abort") {
  const auto cfg_path = temp_dir() / "tamper_config.json";
  write_text(cfg_path,
             R"({"protocol": 1, "width": 16,
                 "eve": {"classical_mode": "tamper", "flip_probability": 0.5},
                 "seeds": {"alice": 1, "bob": 2, "eve": 3}})");
  const auto out_path = temp_dir() / "tamper_report.json";
  CHECK(run_cli({"run", "--config", cfg_path.string(), "--out", out_path.string()}) == kExitError);
  const auto j = nlohmann::json::parse(read_text(out_path));
  CHECK_FALSE(j.at("agreed").get<bool>());
  CHECK_FALSE(j.at("aborted").get<bool>());
}

TEST_CASE("cli rng-sweep takes its fallback seed from a config file") {
  const auto cfg_path = temp_dir() / "sweep_config.json";
  write_text(cfg_path, R"({"seeds": {"alice": 7, "bob": 2, "eve": 3}})");
  const auto from_config = temp_dir() / "sweep_from_config.csv";
  const auto from_flag = temp_dir() / "sweep_from_flag.csv";
  CHECK(run_cli({"rng-sweep", "--n-min", "1", "--n-max", "10", "--config", cfg_path.string(),
                 "--out", from_config.string()}) == kExitAgreed);
  CHECK(run_cli({"rng-sweep", "--n-min", "1", "--n-max", "10", "--seed", "7", "--out",
                 from_flag.string()}) == kExitAgreed);
  CHECK(read_text(from_config) == read_text(from_flag));
}

TEST_CASE("cli rng-sweep runs are byte-identical") {
  const auto a = temp_dir() / "sweep_a.csv";
  const auto b = temp_dir() / "sweep_b.csv";
  CHECK(run_cli({"rng-sweep", "--n-min", "1", "--n-max", "50", "--seed", "7", "--out",
                 a.string()}) == kExitAgreed);
  CHECK(run_cli({"rng-sweep", "--n-min", "1", "--n-max", "50", "--seed", "7", "--out",
                 b.string()}) == kExitAgreed);
  CHECK(read_text(a) == read_text(b));
}

TEST_CASE("cli eve-study writes rows plus an aggregate comment") {
  const auto out_path = temp_dir() / "study.csv";
  CHECK(run_cli({"eve-study", "--trials", "5", "--width", "16", "--seed", "3", "--out",
                 out_path.string()}) == kExitAgreed);
  const auto text = read_text(out_path);
  CHECK(text.rfind("trial,c_mismatch_rate,aborted,agreed\n", 0) == 0);
  CHECK(text.find("# trials=5 ") != std::string::npos);
}

TEST_CASE("cli rejects missing subcommands and bad flags") {
  CHECK(run_cli({}) == kExitError);
  CHECK(run_cli({"run", "--no-such-flag"}) == kExitError);
  CHECK(run_cli({"rng-sweep", "--n-min", "5", "--n-max", "1"}) == kExitError);
  CHECK(run_cli({"run", "--protocol", "2"}) == kExitError);
}
