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

#ifndef RQP_PROTOCOL_H_
#define RQP_PROTOCOL_H_

// Two-party bit commitment and coin tossing on a continuous light-cone
// timeline.
//
// Wall time t is measured at the receiver's side of the channel. A state
// whose light-cone coordinate is tau becomes available to the receiver at
// t = tau + channel_length. Honest front humps occupy (-dt, dt), rear humps
// (tau0 - dt, tau0 + dt), so the receiver's horizon T = t - channel_length
// reaches full access at T = tau0 + dt. Classical messages are instantaneous
// and authenticated.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rqp/measurement.h"
#include "rqp/parity.h"
#include "rqp/rng.h"
#include "rqp/transcript.h"
#include "rqp/wavepacket.h"

namespace rqp {

struct ProtocolConfig {
  int blocks = 2;        // N
  int block_length = 2;  // k
  double half_width = 1.0;
  double separation = 8.0;  // tau0
  double channel_length = 0.0;
  Localization localization = Localization::kCompact;
  double tail_exponent = 4.0;  // xi, tailed mode only
  // Receiver's horizon at which disclosure starts; defaults to the
  // midpoint of (dt, tau0 + dt).
  std::optional<double> disclosure_horizon;
  std::uint64_t seed = kDefaultSeed;
  // Coin toss: A wins when the joint bit equals this value.
  Bit a_wins_on = Bit::kZero;
  // Early guesses use the class-count guesser; when set, the brute-force
  // enumeration guesser instead (Nk limited by kDefaultEnumerationBound).
  bool enumerated_guesser = false;

  // Throws ConfigError on violated invariants.
  void Validate() const;

  double DisclosureHorizon() const;
  double FullAccessHorizon() const { return separation + half_width; }
  int channel_count() const { return blocks * block_length; }

  Waveform Profile() const;
  StretchedState HonestState(Bit bit, double extra_translation = 0.0) const;
};

// Receiver's light-cone horizon at wall time t: T = t - channel_length.
// Throws PreconditionError for t < 0.
double AccessibleHorizon(const ProtocolConfig& config, double wall_time);

struct StrategyA {
  enum class Kind { kHonest, kDelayBlocks };

  Kind kind = Kind::kHonest;
  int delayed_blocks = 0;

  static StrategyA Honest() { return {}; }
  // Postpones the choice of `blocks` whole blocks: their states are
  // prepared late, without front humps.
  static StrategyA DelayBlocks(int blocks) {
    return StrategyA{Kind::kDelayBlocks, blocks};
  }
};

enum class StrategyB {
  kHonest,
  kEarlyGuess,  // honest, plus a parity guess at the disclosure moment
  kSendBack,    // coin toss only: reflect the peer's states
};

struct EarlyGuessOutcome {
  Bit guess;
  double confidence;
  bool correct;
  int fired;  // outcomes available at guess time
};

struct BitCommitmentResult {
  Transcript transcript;
  Verdict verdict;
  Bit committed_bit;  // bit A intended at the start
  std::optional<EarlyGuessOutcome> early_guess;
};

// Throws ConfigError for invalid configs, SendBack, or more delayed blocks
// than blocks.
BitCommitmentResult RunBitCommitment(const ProtocolConfig& config,
                                     const StrategyA& strategy_a,
                                     StrategyB strategy_b, RngStream& rng);
BitCommitmentResult RunBitCommitment(const ProtocolConfig& config,
                                     const StrategyA& strategy_a,
                                     StrategyB strategy_b);

struct CoinTossResult {
  Transcript transcript;
  Verdict verdict;
  Bit bit_a;                 // A's committed parity
  std::optional<Bit> bit_b;  // B's committed parity; none for a mirror
  std::optional<EarlyGuessOutcome> early_guess;  // B's guess of bit_a
};

// With enforce_half_disclosure the classical exchange runs in four phases
// (A half, B other channels, A rest, B rest); otherwise A discloses all,
// then B.
CoinTossResult RunCoinToss(const ProtocolConfig& config,
                           const StrategyA& strategy_a, StrategyB strategy_b,
                           bool enforce_half_disclosure, RngStream& rng);
CoinTossResult RunCoinToss(const ProtocolConfig& config,
                           const StrategyA& strategy_a, StrategyB strategy_b,
                           bool enforce_half_disclosure);

// Verifies a complete classical disclosure against the observer's outcomes
// at light-cone horizon `horizon`. Checks, in order: structure (every
// channel once, N blocks of k), each channel's record, block uniformity.
Verdict VerifyDisclosure(std::span<const DisclosureEntry> entries,
                         std::span<const Outcome> outcomes, double horizon,
                         int blocks, int block_length, Actor verifier);

// Parity implied by a disclosure, or nullopt if it is structurally invalid
// or some block is not uniform.
std::optional<Bit> ParityFromDisclosure(std::span<const DisclosureEntry> entries,
                                        int blocks, int block_length);

}  // namespace rqp

#endif  // RQP_PROTOCOL_H_
