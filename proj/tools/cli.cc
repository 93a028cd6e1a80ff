// Copyright 2026 The rqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rqp/errors.h"
#include "rqp/experiment.h"
#include "rqp/measurement.h"
#include "rqp/parity.h"
#include "rqp/protocol.h"

namespace rqp::cli {
namespace {

using Json = nlohmann::json;

Json LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " +
                      e.what());
  }
}

Localization ParseLocalization(const std::string& s) {
  if (s == "compact") return Localization::kCompact;
  if (s == "tailed") return Localization::kTailed;
  throw ConfigError("localization must be 'compact' or 'tailed'");
}

Bit ParseBitValue(int v) {
  if (v != 0 && v != 1) throw ConfigError("bit values must be 0 or 1");
  return ToBit(v);
}

// Applies one protocol-level key; false if the key is not a protocol key.
bool ApplyProtocolKey(const std::string& key, const Json& v,
                      ProtocolConfig& c) {
  if (key == "N") {
    c.blocks = v.get<int>();
  } else if (key == "k") {
    c.block_length = v.get<int>();
  } else if (key == "half_width") {
    c.half_width = v.get<double>();
  } else if (key == "tau0") {
    c.separation = v.get<double>();
  } else if (key == "channel_length") {
    c.channel_length = v.get<double>();
  } else if (key == "localization") {
    c.localization = ParseLocalization(v.get<std::string>());
  } else if (key == "xi") {
    c.tail_exponent = v.get<double>();
  } else if (key == "tau_d") {
    if (v.is_null()) {
      c.disclosure_horizon.reset();
    } else {
      c.disclosure_horizon = v.get<double>();
    }
  } else if (key == "seed") {
    c.seed = v.get<std::uint64_t>();
  } else if (key == "a_wins_on") {
    c.a_wins_on = ParseBitValue(v.get<int>());
  } else if (key == "enumerated_guesser") {
    c.enumerated_guesser = v.get<bool>();
  } else {
    return false;
  }
  return true;
}

bool IsExperimentKey(const std::string& key) {
  return key == "scenario" || key == "trials" || key == "jobs" ||
         key == "grid";
}

void ApplyProtocolJson(const Json& doc, ProtocolConfig& c) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (!ApplyProtocolKey(key, v, c) && !IsExperimentKey(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

template <typename T>
std::vector<T> JsonList(const Json& v, const std::string& name) {
  if (!v.is_array()) throw ConfigError("grid." + name + " must be a list");
  return v.get<std::vector<T>>();
}

void ApplyGridJson(const Json& grid, ParameterGrid& g) {
  if (!grid.is_object()) throw ConfigError("grid must be a JSON object");
  for (const auto& [key, v] : grid.items()) {
    if (key == "N") {
      g.blocks = JsonList<int>(v, key);
    } else if (key == "k") {
      g.block_length = JsonList<int>(v, key);
    } else if (key == "xi") {
      g.tail_exponent = JsonList<double>(v, key);
    } else if (key == "tau_d") {
      if (!v.is_array()) throw ConfigError("grid.tau_d must be a list");
      g.disclosure_horizon.clear();
      for (const Json& e : v) {
        g.disclosure_horizon.push_back(
            e.is_null() ? std::nullopt : std::optional<double>(e.get<double>()));
      }
    } else if (key == "delayed_blocks") {
      g.delayed_blocks = JsonList<int>(v, key);
    } else if (key == "half_disclosure") {
      g.half_disclosure = JsonList<bool>(v, key);
    } else {
      throw ConfigError("unknown grid key '" + key + "'");
    }
  }
}

void ApplyExperimentJson(const Json& doc, ExperimentSpec& spec) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "scenario") {
      spec.scenario = ParseScenario(v.get<std::string>());
    } else if (key == "trials") {
      spec.trials = v.get<std::int64_t>();
    } else if (key == "jobs") {
      spec.jobs = v.get<int>();
    } else if (key == "grid") {
      ApplyGridJson(v, spec.grid);
    } else if (key == "seed") {
      spec.master_seed = v.get<std::uint64_t>();
      spec.base.seed = spec.master_seed;
    } else if (!ApplyProtocolKey(key, v, spec.base)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void Row(std::ostream& out, const std::string& label, const std::string& value) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-44s %s\n", label.c_str(), value.c_str());
  out << buf;
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
}

// Options shared by the protocol-facing subcommands.
struct ProtocolFlags {
  std::string config;
  std::uint64_t seed = kDefaultSeed;
  int blocks = 0;
  int block_length = 0;
  double half_width = 0;
  double separation = 0;
  double channel_length = 0;
  std::string localization;
  double xi = 0;
  double tau_d = 0;
  int a_wins_on = 0;
  bool enumerated_guesser = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* blocks_opt = nullptr;
  CLI::Option* block_length_opt = nullptr;
  CLI::Option* half_width_opt = nullptr;
  CLI::Option* separation_opt = nullptr;
  CLI::Option* channel_length_opt = nullptr;
  CLI::Option* localization_opt = nullptr;
  CLI::Option* xi_opt = nullptr;
  CLI::Option* tau_d_opt = nullptr;
  CLI::Option* a_wins_on_opt = nullptr;

  void Register(CLI::App* app, bool with_sizes) {
    app->add_option("--config", config, "JSON config file");
    seed_opt = app->add_option("--seed", seed, "Master seed (default 20010417)");
    if (with_sizes) {
      blocks_opt = app->add_option("--N", blocks, "Number of blocks");
      block_length_opt = app->add_option("--k", block_length, "Block length");
      xi_opt = app->add_option("--xi", xi, "Tail exponent (tailed mode)");
      tau_d_opt = app->add_option("--tau-d", tau_d, "Disclosure horizon");
    }
    half_width_opt = app->add_option("--dt", half_width, "Hump half width");
    separation_opt = app->add_option("--tau0", separation, "Hump separation");
    channel_length_opt =
        app->add_option("--channel-length", channel_length, "Channel length");
    localization_opt = app->add_option("--localization", localization,
                                       "compact or tailed");
    a_wins_on_opt =
        app->add_option("--a-wins-on", a_wins_on, "Coin toss: A wins on bit");
    app->add_flag("--enumerated-guesser", enumerated_guesser,
                  "Use the brute-force early guesser");
  }

  // Flags override file values.
  void Apply(ProtocolConfig& c) const {
    if (seed_opt->count()) c.seed = seed;
    if (blocks_opt && blocks_opt->count()) c.blocks = blocks;
    if (block_length_opt && block_length_opt->count()) c.block_length = block_length;
    if (xi_opt && xi_opt->count()) c.tail_exponent = xi;
    if (tau_d_opt && tau_d_opt->count()) c.disclosure_horizon = tau_d;
    if (half_width_opt->count()) c.half_width = half_width;
    if (separation_opt->count()) c.separation = separation;
    if (channel_length_opt->count()) c.channel_length = channel_length;
    if (localization_opt->count()) c.localization = ParseLocalization(localization);
    if (a_wins_on_opt->count()) c.a_wins_on = ParseBitValue(a_wins_on);
    if (enumerated_guesser) c.enumerated_guesser = true;
  }
};

int CmdAnalytic(int n, int k, std::optional<double> xi, std::ostream& out) {
  if (n < 1 || k < 1) throw ConfigError("N and k must be >= 1");
  Row(out, "quantity", "value");
  Row(out, "single-state identification success",
      Num(1.0 - CompositeError(0.5, 0.0, 0.5)));
  Row(out, "parity guess success, plain coding", Num(PcParityPlain(n)));
  Row(out, "parity guess bound, block coding", Num(PcParityBlockBound(n, k)));
  Row(out, "exact Bayes parity guess success", Num(BayesGuessSuccess(n, k, 0.5)));
  Row(out, "alpha(N,k)", Num(Alpha(n, k)));
  Row(out, "fixed-block identification", Num(PFixedBlock(k)));
  Row(out, "all fixed blocks identified", Num(PAccFixed(n, k)));
  Row(out, "delayed-block escape", Num(std::ldexp(1.0, -k)));
  if (xi) {
    if (!(*xi > 0.0)) throw ConfigError("xi must be positive");
    Row(out, "tailed honest completion",
        Num(std::pow(-std::expm1(-*xi), n * k)));
  }
  out << "note: at k = 1 the block-coding bound has excess 2^-N, twice the\n"
         "      plain-coding excess 2^-(N+1); the plain value is exact.\n";
  return kExitOk;
}

int CmdCount(int n, int k, bool verify, int bound, std::ostream& out,
             std::ostream& err) {
  if (n < 1 || k < 1) throw ConfigError("N and k must be >= 1");
  const BlockCounts closed = CountBlockStringsClosed(n, k);
  out << "S_even " << closed.even << "\n"
      << "S_odd " << closed.odd << "\n"
      << "total " << closed.total() << "\n"
      << "alpha " << Num(Alpha(n, k)) << "\n";
  if (!verify) return kExitOk;
  if (static_cast<long long>(n) * k > bound) {
    err << "error: enumeration of Nk = " << static_cast<long long>(n) * k
        << " exceeds bound " << bound << " (raise --enum-bound)\n";
    return kExitBound;
  }
  const BlockCounts enumerated = EnumerateBlockStrings(n, k, bound);
  const BlockCounts sums = CountBlockStrings(n, k);
  if (enumerated == closed && sums == closed) {
    out << "verify ok\n";
    return kExitOk;
  }
  out << "verify MISMATCH: enumeration " << enumerated.even << "/"
      << enumerated.odd << "\n";
  return kExitMismatch;
}

struct RunFlags {
  std::string protocol;
  std::string a = "honest";
  int delay_blocks = 0;
  std::string b = "honest";
  bool no_half_disclosure = false;
  std::string out_path;
  CLI::Option* delay_opt = nullptr;
};

int CmdRun(const RunFlags& flags, const ProtocolFlags& pflags,
           std::ostream& out) {
  ProtocolConfig config;
  if (!pflags.config.empty()) ApplyProtocolJson(LoadConfig(pflags.config), config);
  pflags.Apply(config);

  StrategyA a = StrategyA::Honest();
  if (flags.a == "delay" || flags.delay_opt->count()) {
    a = StrategyA::DelayBlocks(flags.delay_opt->count() ? flags.delay_blocks : 1);
  } else if (flags.a != "honest") {
    throw ConfigError("--a must be 'honest' or 'delay'");
  }
  StrategyB b = StrategyB::kHonest;
  if (flags.b == "early-guess") {
    b = StrategyB::kEarlyGuess;
  } else if (flags.b == "sendback") {
    b = StrategyB::kSendBack;
  } else if (flags.b != "honest") {
    throw ConfigError("--b must be 'honest', 'early-guess' or 'sendback'");
  }

  std::optional<Verdict> verdict;
  std::string transcript;
  std::ostringstream extra;
  auto report_guess = [&](const std::optional<EarlyGuessOutcome>& g) {
    if (!g) return;
    extra << "early_guess " << ToInt(g->guess) << " confidence "
          << Num(g->confidence) << " correct " << (g->correct ? "yes" : "no")
          << " fired " << g->fired << "\n";
  };
  if (flags.protocol == "bc") {
    if (b == StrategyB::kSendBack) {
      throw ConfigError("send-back applies to coin tossing only");
    }
    const BitCommitmentResult r = RunBitCommitment(config, a, b);
    verdict = r.verdict;
    transcript = r.transcript.ToJsonLines();
    extra << "committed_bit " << ToInt(r.committed_bit) << "\n";
    report_guess(r.early_guess);
  } else {
    const CoinTossResult r =
        RunCoinToss(config, a, b, !flags.no_half_disclosure);
    verdict = r.verdict;
    transcript = r.transcript.ToJsonLines();
    extra << "bit_a " << ToInt(r.bit_a) << "\n";
    if (r.bit_b) extra << "bit_b " << ToInt(*r.bit_b) << "\n";
    report_guess(r.early_guess);
  }
  if (!flags.out_path.empty()) WriteFile(flags.out_path, transcript);
  out << verdict->Code() << "\n" << extra.str();
  return verdict->accepted() ? kExitOk : kExitAborted;
}

struct SweepFlags {
  std::string scenario;
  std::int64_t trials = 0;
  int jobs = 1;
  std::string out_path;
  std::string format = "csv";
  std::vector<int> blocks;
  std::vector<int> block_length;
  std::vector<double> xi;
  std::vector<double> tau_d;
  std::vector<int> delayed_blocks;
  bool no_half_disclosure = false;
  int verbose = 0;
  CLI::Option* scenario_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* blocks_opt = nullptr;
  CLI::Option* block_length_opt = nullptr;
  CLI::Option* xi_opt = nullptr;
  CLI::Option* tau_d_opt = nullptr;
  CLI::Option* delayed_opt = nullptr;
};

int CmdSweep(const SweepFlags& flags, const ProtocolFlags& pflags,
             std::ostream& out, std::ostream& err) {
  ExperimentSpec spec;
  if (pflags.config.empty() && !flags.scenario_opt->count()) {
    throw ConfigError("sweep needs --config or --scenario");
  }
  if (!pflags.config.empty()) ApplyExperimentJson(LoadConfig(pflags.config), spec);
  pflags.Apply(spec.base);
  if (pflags.seed_opt->count()) spec.master_seed = pflags.seed;
  if (flags.scenario_opt->count()) spec.scenario = ParseScenario(flags.scenario);
  if (flags.trials_opt->count()) spec.trials = flags.trials;
  if (flags.jobs_opt->count()) spec.jobs = flags.jobs;
  if (flags.blocks_opt->count()) spec.grid.blocks = flags.blocks;
  if (flags.block_length_opt->count()) spec.grid.block_length = flags.block_length;
  if (flags.xi_opt->count()) spec.grid.tail_exponent = flags.xi;
  if (flags.tau_d_opt->count()) {
    spec.grid.disclosure_horizon.assign(flags.tau_d.begin(), flags.tau_d.end());
  }
  if (flags.delayed_opt->count()) spec.grid.delayed_blocks = flags.delayed_blocks;
  if (flags.no_half_disclosure) spec.grid.half_disclosure = {false};

  if (flags.verbose > 0) {
    err << "sweep " << ScenarioName(spec.scenario) << ": "
        << ExpandGrid(spec).size() << " cells x " << spec.trials
        << " trials, seed " << spec.master_seed << ", jobs " << spec.jobs
        << "\n";
  }
  const std::vector<SummaryCell> cells = RunExperiment(spec);
  std::ostringstream body;
  if (flags.format == "json") {
    WriteJson(body, cells);
  } else {
    WriteCsv(body, cells);
  }
  if (flags.out_path.empty()) {
    out << body.str();
  } else {
    WriteFile(flags.out_path, body.str());
  }
  const bool all_pass = std::all_of(cells.begin(), cells.end(), [](const auto& c) {
    return Compare(c) == Comparison::kPass;
  });
  if (!all_pass) err << "sweep: at least one cell failed its reference\n";
  return all_pass ? kExitOk : kExitSweepFail;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Relativistic quantum bit commitment and coin tossing simulator",
               "rqp"};
  app.require_subcommand(1);

  // analytic
  CLI::App* analytic = app.add_subcommand("analytic", "Print closed forms");
  int an_n = 0;
  int an_k = 0;
  double an_xi = 0.0;
  analytic->add_option("--N", an_n, "Number of blocks")->required();
  analytic->add_option("--k", an_k, "Block length")->required();
  CLI::Option* an_xi_opt = analytic->add_option("--xi", an_xi, "Tail exponent");

  // count
  CLI::App* count = app.add_subcommand("count", "Count block strings");
  int co_n = 0;
  int co_k = 0;
  bool co_verify = false;
  int co_bound = kDefaultEnumerationBound;
  count->add_option("--N", co_n, "Number of blocks")->required();
  count->add_option("--k", co_k, "Block length")->required();
  count->add_flag("--verify", co_verify, "Check against brute-force enumeration");
  count->add_option("--enum-bound", co_bound, "Largest Nk to enumerate")
      ->capture_default_str();

  // run
  CLI::App* run = app.add_subcommand("run", "Run one protocol instance");
  RunFlags run_flags;
  ProtocolFlags run_pflags;
  run->add_option("protocol", run_flags.protocol, "bc or ct")
      ->required()
      ->check(CLI::IsMember({"bc", "ct"}));
  run->add_option("--a", run_flags.a, "A strategy: honest or delay")
      ->check(CLI::IsMember({"honest", "delay"}));
  run_flags.delay_opt = run->add_option("--delay-blocks", run_flags.delay_blocks,
                                        "Blocks A delays (implies --a delay)");
  run->add_option("--b", run_flags.b, "B strategy: honest, early-guess, sendback")
      ->check(CLI::IsMember({"honest", "early-guess", "sendback"}));
  run->add_flag("--no-half-disclosure", run_flags.no_half_disclosure,
                "Coin toss: disclose everything at once");
  run->add_option("--out", run_flags.out_path, "Transcript path (JSON lines)");
  run_pflags.Register(run, /*with_sizes=*/true);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte Carlo campaign");
  SweepFlags sweep_flags;
  ProtocolFlags sweep_pflags;
  sweep_flags.scenario_opt =
      sweep->add_option("--scenario", sweep_flags.scenario, "Scenario id");
  sweep_flags.trials_opt =
      sweep->add_option("--trials", sweep_flags.trials, "Trials per cell");
  sweep_flags.jobs_opt =
      sweep->add_option("--jobs", sweep_flags.jobs, "Worker threads");
  sweep->add_option("--out", sweep_flags.out_path, "Output path");
  sweep->add_option("--format", sweep_flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_flags.blocks_opt = sweep->add_option("--N", sweep_flags.blocks, "Grid: N");
  sweep_flags.block_length_opt =
      sweep->add_option("--k", sweep_flags.block_length, "Grid: k");
  sweep_flags.xi_opt = sweep->add_option("--xi", sweep_flags.xi, "Grid: xi");
  sweep_flags.tau_d_opt =
      sweep->add_option("--tau-d", sweep_flags.tau_d, "Grid: disclosure horizon");
  sweep_flags.delayed_opt = sweep->add_option(
      "--delay-blocks", sweep_flags.delayed_blocks, "Grid: delayed blocks");
  sweep->add_flag("--no-half-disclosure", sweep_flags.no_half_disclosure,
                  "Coin toss: disclose everything at once");
  sweep->add_flag("-v,--verbose", sweep_flags.verbose, "Progress on stderr");
  sweep_pflags.Register(sweep, /*with_sizes=*/false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (analytic->parsed()) {
      return CmdAnalytic(an_n, an_k,
                         an_xi_opt->count() ? std::optional<double>(an_xi)
                                            : std::nullopt,
                         out);
    }
    if (count->parsed()) {
      return CmdCount(co_n, co_k, co_verify, co_bound, out, err);
    }
    if (run->parsed()) return CmdRun(run_flags, run_pflags, out);
    if (sweep->parsed()) return CmdSweep(sweep_flags, sweep_pflags, out, err);
  } catch (const EnumerationBoundError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBound;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "usage error: bad config value: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "usage error: no subcommand\n";
  return kExitUsage;
}

}  // namespace rqp::cli
