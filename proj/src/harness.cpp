#include "qkd/harness.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qkd/errors.hpp"

namespace qkd {

namespace {

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

const char* bool_word(bool b) { return b ? "true" : "false"; }

PrepSpec prep_by_name(const std::string& name) {
  if (name == "h") return PrepSpec::hadamard();
  if (name == "identity") return PrepSpec::identity();
  throw ConfigError("unknown prep \"" + name + "\" (expected \"h\" or \"identity\")");
}

void apply_seed(SessionConfig& cfg, std::uint64_t seed) {
  cfg.protocol.alice_seed = derive_seed(seed, 0);
  cfg.protocol.bob_seed = derive_seed(seed, 1);
  cfg.protocol.eve_seed = derive_seed(seed, 2);
}

struct TrialRow {
  double c_mismatch_rate = 0.0;
  bool aborted = false;
  bool agreed = false;
};

}  // namespace

void write_rng_sweep_csv(std::ostream& out, const SweepOptions& opt) {
  if (opt.n_min < 1 || opt.n_min > opt.n_max) {
    throw std::invalid_argument("sweep range must satisfy 1 <= n_min <= n_max");
  }
  out << "n,raw,unit,hex_bits\n";
  for (std::int64_t n = opt.n_min; n <= opt.n_max; ++n) {
    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(n)));
    const RandomDraw draw = draw_random(opt.prep, n, opt.width, rng);
    out << n << ',' << fixed(draw.raw, 9) << ',' << fixed(draw.unit, 9) << ','
        << draw.bits.to_hex() << '\n';
  }
}

StudyStats write_eve_study_csv(std::ostream& out, const StudyOptions& opt) {
  if (opt.trials < 1) throw std::invalid_argument("trials must be at least 1");
  const int threads = opt.threads < 1 ? 1 : opt.threads;

  std::vector<TrialRow> rows(static_cast<std::size_t>(opt.trials));
  const auto run_trial = [&](int trial) {
    SessionConfig cfg = opt.base;
    cfg.protocol.alice_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(trial) * 3 + 0);
    cfg.protocol.bob_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(trial) * 3 + 1);
    cfg.protocol.eve_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(trial) * 3 + 2);
    const SessionOutcome outcome = run_session(cfg.protocol, cfg.eve);
    rows[static_cast<std::size_t>(trial)] =
        TrialRow{outcome.c_mismatch_rate, outcome.aborted, outcome.agreed};
  };

  if (threads == 1) {
    for (int t = 0; t < opt.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w]() {
        for (int t = w; t < opt.trials; t += threads) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  StudyStats stats;
  out << "trial,c_mismatch_rate,aborted,agreed\n";
  for (int t = 0; t < opt.trials; ++t) {
    const auto& row = rows[static_cast<std::size_t>(t)];
    out << t << ',' << fixed(row.c_mismatch_rate, 6) << ',' << bool_word(row.aborted) << ','
        << bool_word(row.agreed) << '\n';
    stats.mean_c_mismatch_rate += row.c_mismatch_rate;
    stats.abort_frequency += row.aborted ? 1.0 : 0.0;
    stats.agreement_frequency += row.agreed ? 1.0 : 0.0;
  }
  stats.mean_c_mismatch_rate /= opt.trials;
  stats.abort_frequency /= opt.trials;
  stats.agreement_frequency /= opt.trials;
  out << "# trials=" << opt.trials << " mean_c_mismatch_rate="
      << fixed(stats.mean_c_mismatch_rate, 6) << " abort_frequency="
      << fixed(stats.abort_frequency, 6) << " agreement_frequency="
      << fixed(stats.agreement_frequency, 6) << '\n';
  return stats;
}

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int protocol = 0;
  int width = 0;
  std::string eve_mode;
  std::string eve_basis;
  std::string semantics;
};

void add_session_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "path to a JSON session config");
  cmd->add_option("--out", flags.out_path, "output file path");
  cmd->add_option("--seed", flags.seed, "base seed; derives the alice/bob/eve seeds")
      ->each([&flags](const std::string&) { flags.seed_given = true; });
  cmd->add_option("--protocol", flags.protocol, "protocol to run (1 or 3)")
      ->check(CLI::IsMember({1, 3}));
  cmd->add_option("--width", flags.width, "protocol width W in bits")
      ->check(CLI::Range(8, kMaxQuantizeWidth));
  cmd->add_option("--eve", flags.eve_mode, "eavesdropper quantum mode")
      ->check(CLI::IsMember({"off", "intercept-resend"}));
  cmd->add_option("--eve-basis", flags.eve_basis, "eavesdropper basis strategy")
      ->check(CLI::IsMember({"random", "computational", "hadamard"}));
  cmd->add_option("--semantics", flags.semantics, "measurement semantics")
      ->check(CLI::IsMember({"outcome", "probability"}));
}

SessionConfig build_session_config(const CommonFlags& flags) {
  SessionConfig cfg;
  if (!flags.config_path.empty()) cfg = load_session_config(flags.config_path);
  if (flags.seed_given) apply_seed(cfg, flags.seed);
  if (flags.protocol != 0) cfg.protocol.protocol = flags.protocol;
  if (flags.width != 0) cfg.protocol.width = flags.width;
  if (!flags.eve_mode.empty()) {
    cfg.eve.quantum_mode =
        flags.eve_mode == "off" ? QuantumEveMode::Off : QuantumEveMode::InterceptResend;
  }
  if (!flags.eve_basis.empty()) {
    cfg.eve.basis_strategy = flags.eve_basis == "random" ? EveBasisStrategy::Random
                             : flags.eve_basis == "computational"
                                 ? EveBasisStrategy::FixedComputational
                                 : EveBasisStrategy::FixedHadamard;
  }
  if (!flags.semantics.empty()) {
    cfg.protocol.semantics = flags.semantics == "outcome" ? MeasurementSemantics::Outcome
                                                          : MeasurementSemantics::Probability;
  }
  validate(cfg.protocol);
  return cfg;
}

int do_run(const CommonFlags& flags) {
  const SessionConfig cfg = build_session_config(flags);
  const auto start = std::chrono::steady_clock::now();
  const SessionReport report = run_session_report(cfg);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();

  if (!flags.out_path.empty()) {
    std::ofstream out(flags.out_path);
    if (!out) throw std::runtime_error("cannot open output file \"" + flags.out_path + "\"");
    out << report_to_json(report).dump(2) << '\n';
  }

  const auto& o = report.outcome;
  std::string key_prefix = "-";
  if (!o.aborted) {
    const BitString& key = o.protocol == 1 ? o.p1->first.key : o.p3->first.key;
    key_prefix = key.to_hex().substr(0, 16) + "...";
  }
  std::cout << "protocol=" << o.protocol << " agreed=" << bool_word(o.agreed)
            << " aborted=" << bool_word(o.aborted) << " key=" << key_prefix
            << " eve_knowledge=" << bool_word(o.eve.knows_key) << " duration_ms=" << elapsed
            << '\n';
  if (o.aborted) {
    std::cout << "abort: " << o.abort_reason << '\n';
    return kExitDetectedAbort;
  }
  if (!o.agreed) {
    std::cerr << "session completed without key agreement\n";
    return kExitError;
  }
  return kExitAgreed;
}

int do_rng_sweep(const CommonFlags& flags, std::int64_t n_min, std::int64_t n_max,
                 const std::string& prep_name, int width) {
  SweepOptions opt;
  opt.n_min = n_min;
  opt.n_max = n_max;
  opt.prep = prep_by_name(prep_name);
  opt.width = width;
  opt.seed = 42;
  if (!flags.config_path.empty()) {
    opt.seed = load_session_config(flags.config_path).protocol.alice_seed;
  }
  if (flags.seed_given) opt.seed = flags.seed;
  if (flags.out_path.empty()) {
    write_rng_sweep_csv(std::cout, opt);
  } else {
    std::ofstream out(flags.out_path);
    if (!out) throw std::runtime_error("cannot open output file \"" + flags.out_path + "\"");
    write_rng_sweep_csv(out, opt);
    std::cout << "wrote " << (n_max - n_min + 1) << " rows to " << flags.out_path << '\n';
  }
  return kExitAgreed;
}

int do_eve_study(const CommonFlags& flags, int trials, int threads) {
  StudyOptions opt;
  opt.base = build_session_config(flags);
  opt.trials = trials;
  opt.threads = threads;
  opt.seed = flags.seed_given ? flags.seed : 42;

  StudyStats stats;
  if (flags.out_path.empty()) {
    stats = write_eve_study_csv(std::cout, opt);
  } else {
    std::ofstream out(flags.out_path);
    if (!out) throw std::runtime_error("cannot open output file \"" + flags.out_path + "\"");
    stats = write_eve_study_csv(out, opt);
  }
  std::cout << "trials=" << trials << " mean_c_mismatch_rate="
            << fixed(stats.mean_c_mismatch_rate, 6) << " abort_frequency="
            << fixed(stats.abort_frequency, 6) << " agreement_frequency="
            << fixed(stats.agreement_frequency, 6) << '\n';
  return kExitAgreed;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Hybrid quantum/classical key-distribution simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one protocol session and write a report");
  add_session_flags(run, run_flags);

  CommonFlags sweep_flags;
  std::int64_t n_min = 1;
  std::int64_t n_max = 100;
  std::string prep_name = "h";
  int sweep_width = 32;
  CLI::App* sweep = app.add_subcommand("rng-sweep", "random-number pipeline sweep over shot counts");
  sweep->add_option("--n-min", n_min, "smallest shot count")->required();
  sweep->add_option("--n-max", n_max, "largest shot count")->required();
  sweep->add_option("--prep", prep_name, "preparation circuit: h or identity")
      ->check(CLI::IsMember({"h", "identity"}));
  sweep->add_option("--width", sweep_width, "quantization width in bits")
      ->check(CLI::Range(1, kMaxQuantizeWidth));
  sweep->add_option("--config", sweep_flags.config_path,
                    "session config; its alice seed is the fallback base seed");
  sweep->add_option("--seed", sweep_flags.seed, "base seed; each row derives its own")
      ->each([&sweep_flags](const std::string&) { sweep_flags.seed_given = true; });
  sweep->add_option("--out", sweep_flags.out_path, "CSV output path (stdout when omitted)");

  CommonFlags study_flags;
  int trials = 100;
  int threads = 1;
  CLI::App* study = app.add_subcommand("eve-study", "per-trial eavesdropping statistics");
  add_session_flags(study, study_flags);
  study->add_option("--trials", trials, "number of sessions to run");
  study->add_option("--threads", threads, "worker threads (output is identical for any count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitAgreed : kExitError;
  }

  try {
    if (run->parsed()) return do_run(run_flags);
    if (sweep->parsed()) return do_rng_sweep(sweep_flags, n_min, n_max, prep_name, sweep_width);
    if (study->parsed()) return do_eve_study(study_flags, trials, threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace qkd
