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

#include "rqp/experiment.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "json.hpp"
#include "rqp/errors.h"

namespace rqp {
namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 7> kScenarios{{
    {Scenario::kIdentification, "identification"},
    {Scenario::kParityGuess, "parity_guess"},
    {Scenario::kCheatDetection, "cheat_detection"},
    {Scenario::kBcHonest, "bc_honest"},
    {Scenario::kCtHonest, "ct_honest"},
    {Scenario::kCtSendBack, "ct_sendback"},
    {Scenario::kTailedCompletion, "tailed_completion"},
}};

constexpr std::int64_t kChunk = 512;

// Probability that a state's outcome is a 0/1 detection at or before
// light-cone horizon `horizon`.
double NominalMassUpTo(const StretchedState& state, double horizon) {
  double mass = 0.0;
  for (const Window& w : {state.FrontInterval(), state.RearInterval()}) {
    const double hi = std::min(w.hi(), horizon);
    if (hi > w.lo()) mass += WindowMass(state, Window(w.lo(), hi));
  }
  return mass;
}

// Probability that an honest state passes verification at full access.
double HonestPass(const ProtocolConfig& config) {
  if (config.localization == Localization::kCompact) return 1.0;
  return -std::expm1(-config.tail_exponent);
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::ordered_json JsonDouble(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string_view ScenarioName(Scenario scenario) {
  for (const auto& [s, name] : kScenarios) {
    if (s == scenario) return name;
  }
  return "unknown";
}

Scenario ParseScenario(std::string_view id) {
  for (const auto& [s, name] : kScenarios) {
    if (name == id) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(id) + "'");
}

std::string_view ComparisonName(Comparison comparison) {
  return comparison == Comparison::kPass ? "Pass" : "Fail";
}

void ExperimentSpec::Validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (grid.blocks.empty() || grid.block_length.empty() ||
      grid.tail_exponent.empty() || grid.disclosure_horizon.empty() ||
      grid.delayed_blocks.empty() || grid.half_disclosure.empty()) {
    throw ConfigError("empty grid dimension");
  }
  for (int n : grid.blocks) {
    if (n < 1) throw ConfigError("N must be >= 1");
  }
  for (int k : grid.block_length) {
    if (k < 1) throw ConfigError("k must be >= 1");
  }
  for (int m : grid.delayed_blocks) {
    if (m < 1) throw ConfigError("delayed block count must be >= 1");
    if (scenario == Scenario::kCheatDetection) {
      for (int n : grid.blocks) {
        if (m > n) throw ConfigError("delayed block count exceeds N");
      }
    }
  }
}

WilsonInterval Wilson(std::int64_t successes, std::int64_t trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw PreconditionError("Wilson interval needs 0 <= successes <= trials");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return WilsonInterval{std::max(0.0, std::min(center - half, p)),
                        std::min(1.0, std::max(center + half, p))};
}

double ZScore(double estimate, double reference, std::int64_t trials) {
  if (trials < 1) throw PreconditionError("trials must be >= 1");
  const double variance =
      reference * (1.0 - reference) / static_cast<double>(trials);
  if (estimate == reference) return 0.0;
  if (!(variance > 0.0)) {
    return estimate > reference ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
  }
  return (estimate - reference) / std::sqrt(variance);
}

Comparison Compare(const SummaryCell& cell) {
  if (std::isnan(cell.reference)) {
    throw PreconditionError("cell has no reference value");
  }
  return std::abs(cell.z) <= 3.0 ? Comparison::kPass : Comparison::kFail;
}

ProtocolConfig CellConfig(const ExperimentSpec& spec,
                          const CellParameters& parameters) {
  ProtocolConfig config = spec.base;
  config.blocks = parameters.blocks;
  config.block_length = parameters.block_length;
  config.tail_exponent = parameters.tail_exponent;
  config.disclosure_horizon = parameters.disclosure_horizon;
  if (spec.scenario == Scenario::kIdentification) {
    config.blocks = 1;
    config.block_length = 1;
  }
  if (spec.scenario == Scenario::kTailedCompletion) {
    config.localization = Localization::kTailed;
  }
  config.Validate();
  return config;
}

double ReferenceValue(Scenario scenario, const ProtocolConfig& config,
                      const CellParameters& parameters) {
  const int n = config.channel_count();
  const double q = HonestPass(config);
  const double horizon = config.DisclosureHorizon();
  switch (scenario) {
    case Scenario::kIdentification: {
      const double p = NominalMassUpTo(config.HonestState(Bit::kZero), horizon);
      return 1.0 - CompositeError(p, 0.0, 0.5);
    }
    case Scenario::kParityGuess: {
      const double p = NominalMassUpTo(config.HonestState(Bit::kZero), horizon);
      if (config.block_length == 1 && p == 0.5) {
        return PcParityPlain(config.blocks);
      }
      return BayesGuessSuccess(config.blocks, config.block_length, p);
    }
    case Scenario::kCheatDetection: {
      const StretchedState honest = config.HonestState(Bit::kZero);
      const DelayedState late = DelayedState::RearHumpOf(honest);
      const double per_late = DelayedOverlap(late, honest) *
                              honest.rear().Cdf(config.FullAccessHorizon());
      const int late_channels = parameters.delayed_blocks * config.block_length;
      return std::pow(per_late, late_channels) *
             std::pow(q, n - late_channels);
    }
    case Scenario::kBcHonest:
    case Scenario::kTailedCompletion:
      return std::pow(q, n);
    case Scenario::kCtHonest:
      return std::pow(q, 2 * n);
    case Scenario::kCtSendBack: {
      if (!parameters.half_disclosure) return std::pow(q, n);
      const int guessed =
          (config.blocks - (config.blocks + 1) / 2) * config.block_length;
      return 1.0 - std::ldexp(1.0, -guessed) * std::pow(q, n);
    }
  }
  throw ConfigError("unknown scenario");
}

std::optional<double> BoundValue(Scenario scenario,
                                 const CellParameters& parameters) {
  if (scenario != Scenario::kParityGuess) return std::nullopt;
  return PcParityBlockBound(parameters.blocks, parameters.block_length);
}

std::vector<CellParameters> ExpandGrid(const ExperimentSpec& spec) {
  spec.Validate();
  ProtocolConfig probe = spec.base;
  std::vector<CellParameters> cells;
  for (int n : spec.grid.blocks) {
    for (int k : spec.grid.block_length) {
      for (double xi : spec.grid.tail_exponent) {
        for (const auto& tau : spec.grid.disclosure_horizon) {
          probe.disclosure_horizon =
              tau ? tau : spec.base.disclosure_horizon;
          const double resolved = probe.DisclosureHorizon();
          for (int m : spec.grid.delayed_blocks) {
            for (bool half : spec.grid.half_disclosure) {
              if (spec.scenario == Scenario::kIdentification) {
                cells.push_back(CellParameters{1, 1, xi, resolved, m, half});
              } else {
                cells.push_back(CellParameters{n, k, xi, resolved, m, half});
              }
            }
          }
        }
      }
    }
  }
  return cells;
}

bool RunTrial(Scenario scenario, const ProtocolConfig& config,
              const CellParameters& parameters, RngStream& rng) {
  switch (scenario) {
    case Scenario::kIdentification: {
      const Bit bit = Bernoulli(rng, 0.5) ? Bit::kOne : Bit::kZero;
      const DetectionRecord record = SampleDetection(
          config.HonestState(bit), config.DisclosureHorizon(), rng);
      Bit guess = Bit::kZero;
      if (record.channel() == Channel::kOne) guess = Bit::kOne;
      return guess == bit;
    }
    case Scenario::kParityGuess: {
      const BitCommitmentResult r = RunBitCommitment(
          config, StrategyA::Honest(), StrategyB::kEarlyGuess, rng);
      return r.early_guess->correct;
    }
    case Scenario::kCheatDetection: {
      const BitCommitmentResult r =
          RunBitCommitment(config, StrategyA::DelayBlocks(parameters.delayed_blocks),
                           StrategyB::kHonest, rng);
      return r.verdict.accepted();
    }
    case Scenario::kBcHonest:
    case Scenario::kTailedCompletion: {
      const BitCommitmentResult r = RunBitCommitment(
          config, StrategyA::Honest(), StrategyB::kHonest, rng);
      return r.verdict.accepted() && r.verdict.bit() == r.committed_bit;
    }
    case Scenario::kCtHonest: {
      const CoinTossResult r = RunCoinToss(config, StrategyA::Honest(),
                                           StrategyB::kHonest,
                                           parameters.half_disclosure, rng);
      return r.verdict.accepted() && r.bit_b &&
             r.verdict.bit() == (r.bit_a ^ *r.bit_b);
    }
    case Scenario::kCtSendBack: {
      const CoinTossResult r = RunCoinToss(config, StrategyA::Honest(),
                                           StrategyB::kSendBack,
                                           parameters.half_disclosure, rng);
      if (parameters.half_disclosure) return !r.verdict.accepted();
      return r.verdict.accepted() && r.verdict.bit() == Bit::kZero;
    }
  }
  throw ConfigError("unknown scenario");
}

std::vector<SummaryCell> RunExperiment(const ExperimentSpec& spec) {
  const std::vector<CellParameters> grid = ExpandGrid(spec);
  std::vector<SummaryCell> out;
  out.reserve(grid.size());

  for (const CellParameters& params : grid) {
    const ProtocolConfig config = CellConfig(spec, params);
    // Stream path omits N so cells differing only in N share randomness.
    const std::uint64_t cell_key = DeriveSeed(
        spec.master_seed,
        {static_cast<std::uint64_t>(spec.scenario),
         static_cast<std::uint64_t>(params.block_length),
         std::bit_cast<std::uint64_t>(params.tail_exponent),
         std::bit_cast<std::uint64_t>(params.disclosure_horizon),
         static_cast<std::uint64_t>(params.delayed_blocks),
         static_cast<std::uint64_t>(params.half_disclosure)});

    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> successes{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      try {
        for (;;) {
          const std::int64_t begin = next.fetch_add(kChunk);
          if (begin >= spec.trials) return;
          const std::int64_t end = std::min(spec.trials, begin + kChunk);
          std::int64_t local = 0;
          for (std::int64_t i = begin; i < end; ++i) {
            RngStream rng(DeriveSeed(cell_key, {static_cast<std::uint64_t>(i)}));
            if (RunTrial(spec.scenario, config, params, rng)) ++local;
          }
          successes.fetch_add(local);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(spec.trials);
      }
    };
    const int threads = static_cast<int>(std::min<std::int64_t>(
        spec.jobs, (spec.trials + kChunk - 1) / kChunk));
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    SummaryCell cell;
    cell.scenario = spec.scenario;
    cell.parameters = params;
    cell.trials = spec.trials;
    cell.successes = successes.load();
    cell.estimate = static_cast<double>(cell.successes) /
                    static_cast<double>(cell.trials);
    const WilsonInterval ci = Wilson(cell.successes, cell.trials);
    cell.ci_lo = ci.lo;
    cell.ci_hi = ci.hi;
    cell.reference = ReferenceValue(spec.scenario, config, params);
    cell.bound = BoundValue(spec.scenario, params);
    cell.z = ZScore(cell.estimate, cell.reference, cell.trials);
    out.push_back(cell);
  }
  return out;
}

void WriteCsv(std::ostream& out, const std::vector<SummaryCell>& cells) {
  out << "# " << kSweepSchema << "\n"
      << "scenario,N,k,xi,tau_d,delayed_blocks,half_disclosure,trials,"
         "successes,estimate,ci_lo,ci_hi,reference,bound,z,pass\n";
  for (const SummaryCell& c : cells) {
    const CellParameters& p = c.parameters;
    out << ScenarioName(c.scenario) << ',' << p.blocks << ',' << p.block_length
        << ',' << FormatDouble(p.tail_exponent) << ','
        << FormatDouble(p.disclosure_horizon) << ',' << p.delayed_blocks << ','
        << (p.half_disclosure ? "true" : "false") << ',' << c.trials << ','
        << c.successes << ',' << FormatDouble(c.estimate) << ','
        << FormatDouble(c.ci_lo) << ',' << FormatDouble(c.ci_hi) << ','
        << FormatDouble(c.reference) << ','
        << (c.bound ? FormatDouble(*c.bound) : "") << ','
        << FormatDouble(c.z) << ',' << ComparisonName(Compare(c)) << '\n';
  }
}

void WriteJson(std::ostream& out, const std::vector<SummaryCell>& cells) {
  nlohmann::ordered_json doc;
  doc["schema"] = kSweepSchema;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const SummaryCell& c : cells) {
    const CellParameters& p = c.parameters;
    nlohmann::ordered_json row;
    row["scenario"] = ScenarioName(c.scenario);
    row["N"] = p.blocks;
    row["k"] = p.block_length;
    row["xi"] = p.tail_exponent;
    row["tau_d"] = p.disclosure_horizon;
    row["delayed_blocks"] = p.delayed_blocks;
    row["half_disclosure"] = p.half_disclosure;
    row["trials"] = c.trials;
    row["successes"] = c.successes;
    row["estimate"] = c.estimate;
    row["ci_lo"] = c.ci_lo;
    row["ci_hi"] = c.ci_hi;
    row["reference"] = c.reference;
    row["bound"] = c.bound ? nlohmann::ordered_json(*c.bound) : nullptr;
    row["z"] = JsonDouble(c.z);
    row["pass"] = ComparisonName(Compare(c));
    doc["cells"].push_back(std::move(row));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace rqp
