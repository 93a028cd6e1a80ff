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

#ifndef RQP_EXPERIMENT_H_
#define RQP_EXPERIMENT_H_

// Monte Carlo campaigns over a parameter grid, summarized per cell with a
// Wilson interval and compared against a closed-form reference.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rqp/protocol.h"

namespace rqp {

enum class Scenario {
  kIdentification,    // one state, guess its bit at the disclosure horizon
  kParityGuess,       // early parity guess in an honest bit commitment
  kCheatDetection,    // bit commitment with delayed blocks is accepted
  kBcHonest,          // honest bit commitment accepted with the right bit
  kCtHonest,          // honest coin toss accepted
  kCtSendBack,        // mirror attack: aborted (half disclosure) or b = 0
  kTailedCompletion,  // honest bit commitment with tailed states accepted
};

std::string_view ScenarioName(Scenario scenario);
// Throws ConfigError for an unknown id.
Scenario ParseScenario(std::string_view id);

// Each list is one grid dimension; the grid is their cross product.
// tau_d entries of nullopt mean the protocol's default horizon.
struct ParameterGrid {
  std::vector<int> blocks{2};
  std::vector<int> block_length{2};
  std::vector<double> tail_exponent{4.0};
  std::vector<std::optional<double>> disclosure_horizon{std::nullopt};
  std::vector<int> delayed_blocks{1};
  std::vector<bool> half_disclosure{true};
};

struct ExperimentSpec {
  Scenario scenario = Scenario::kIdentification;
  ParameterGrid grid;
  std::int64_t trials = 10000;
  std::uint64_t master_seed = kDefaultSeed;
  // Geometry and mode shared by every cell; grid values override the
  // matching fields.
  ProtocolConfig base;
  int jobs = 1;

  // Throws ConfigError.
  void Validate() const;
};

struct CellParameters {
  int blocks;
  int block_length;
  double tail_exponent;
  double disclosure_horizon;  // resolved light-cone horizon
  int delayed_blocks;
  bool half_disclosure;
};

enum class Comparison { kPass, kFail };
std::string_view ComparisonName(Comparison comparison);

struct SummaryCell {
  Scenario scenario;
  CellParameters parameters;
  std::int64_t trials;
  std::int64_t successes;
  double estimate;
  double ci_lo;
  double ci_hi;
  double reference;
  // Block-coding guessing bound, set for parity_guess cells only.
  std::optional<double> bound;
  // Infinite when the reference is deterministic and missed.
  double z;
};

struct WilsonInterval {
  double lo;
  double hi;
};
// Wilson score interval at the given normal quantile (95% by default).
WilsonInterval Wilson(std::int64_t successes, std::int64_t trials,
                      double z = 1.959963984540054);

// z-score of the estimate against the reference under the reference's
// binomial variance. Deterministic references (0 or 1) give 0 on exact
// equality and +-infinity otherwise.
double ZScore(double estimate, double reference, std::int64_t trials);

// Pass iff |z| <= 3, which for deterministic references means exact
// equality.
Comparison Compare(const SummaryCell& cell);

// Resolved protocol config of one cell.
ProtocolConfig CellConfig(const ExperimentSpec& spec,
                          const CellParameters& parameters);

// Closed-form success probability of a cell and its optional bound.
double ReferenceValue(Scenario scenario, const ProtocolConfig& config,
                      const CellParameters& parameters);
std::optional<double> BoundValue(Scenario scenario,
                                 const CellParameters& parameters);

// Grid cells in row-major order (blocks slowest, half_disclosure fastest).
std::vector<CellParameters> ExpandGrid(const ExperimentSpec& spec);

// Deterministic in the spec, independent of jobs. Trials of cells that
// differ only in N share their random streams.
std::vector<SummaryCell> RunExperiment(const ExperimentSpec& spec);

// One trial of one cell; exposed for tests.
bool RunTrial(Scenario scenario, const ProtocolConfig& config,
              const CellParameters& parameters, RngStream& rng);

inline constexpr std::string_view kSweepSchema = "rqp-sweep v1";

void WriteCsv(std::ostream& out, const std::vector<SummaryCell>& cells);
void WriteJson(std::ostream& out, const std::vector<SummaryCell>& cells);

}  // namespace rqp

#endif  // RQP_EXPERIMENT_H_
