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

#include "rqp/protocol.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "rqp/errors.h"

namespace rqp {
namespace {

constexpr int kMaxChannels = 4096;

// What one sender put into the channels, and what the receiver will see.
struct SenderRun {
  Commitment commitment;
  Bit intended;  // parity before any late re-choice
  std::vector<Outcome> outcomes;  // per channel, receiver's light-cone frame
};

// Law of a late-prepared state: the rear hump alone, and its chance of
// landing in the honest channel. Depends only on the profile geometry, so
// it is memoized per thread.
struct LateLaw {
  DelayedState state;
  double pass;
};

const LateLaw& LateLawFor(const ProtocolConfig& config, double translation) {
  using Key = std::tuple<Localization, double, double, double, double>;
  thread_local std::map<Key, LateLaw> cache;
  const Key key{config.localization, config.half_width,
                config.localization == Localization::kTailed
                    ? config.tail_exponent
                    : 0.0,
                config.separation, translation};
  auto it = cache.find(key);
  if (it == cache.end()) {
    const StretchedState honest = config.HonestState(Bit::kZero, translation);
    DelayedState late = DelayedState::RearHumpOf(honest);
    const double pass = DelayedOverlap(late, honest);
    it = cache.emplace(key, LateLaw{std::move(late), pass}).first;
  }
  return it->second;
}

Outcome SampleLateOutcome(const ProtocolConfig& config, Bit bit,
                          double translation, RngStream& rng) {
  const LateLaw& law = LateLawFor(config, translation);
  return SampleCheatOutcome(law.state, law.pass, bit, rng);
}

Bit RandomBit(RngStream& rng) { return ToBit(static_cast<int>(rng() >> 63)); }

// Emits a sender's states. Delayed blocks (the first `delayed` block
// indices) get their values re-chosen when the rear humps are prepared and
// are measured with the late-state law.
SenderRun EmitStates(const ProtocolConfig& config, const StrategyA& strategy,
                     Actor sender, Transcript& transcript, RngStream& rng) {
  Commitment initial = SampleCommitment(config.blocks, config.block_length, rng);
  const Bit intended = initial.Parity();
  SenderRun run{std::move(initial), intended, {}};
  const int delayed =
      strategy.kind == StrategyA::Kind::kDelayBlocks ? strategy.delayed_blocks : 0;
  const double emit_time = -config.half_width;
  const double late_emit_time = config.separation - config.half_width;

  if (delayed > 0) {
    // The late choice: a fresh target bit, fixed through the first delayed
    // block; further delayed blocks are free.
    const Bit target = RandomBit(rng);
    for (int b = 1; b < delayed; ++b) run.commitment.block_values[b] = RandomBit(rng);
    run.commitment.block_values[0] = Bit::kZero;
    const Bit rest = run.commitment.Parity();
    run.commitment.block_values[0] = rest ^ target;
  }

  const std::vector<Bit> bits = run.commitment.ChannelBits();
  run.outcomes.reserve(bits.size());
  for (int c = 0; c < config.channel_count(); ++c) {
    const StretchedState state = config.HonestState(bits[c]);
    if (run.commitment.code.slot(c).block < delayed) {
      transcript.Append(late_emit_time, sender,
                        EmissionEvent{c, /*delayed=*/true, false});
      run.outcomes.push_back(SampleLateOutcome(config, bits[c], 0.0, rng));
    } else {
      transcript.Append(emit_time, sender, EmissionEvent{c, false, false});
      run.outcomes.push_back(SampleOutcome(state, rng));
    }
  }
  return run;
}

// Logs every outcome the observer sees up to light-cone horizon `horizon`.
void LogDetections(const ProtocolConfig& config,
                   std::span<const Outcome> outcomes, double horizon,
                   Actor observer, Transcript& transcript) {
  for (int c = 0; c < static_cast<int>(outcomes.size()); ++c) {
    const Outcome& o = outcomes[c];
    if (o.fire_time > horizon) continue;
    transcript.Append(o.fire_time + config.channel_length, observer,
                      DetectionEvent{c, o.channel, o.fire_time});
  }
}

EarlyGuessOutcome MakeEarlyGuess(const ProtocolConfig& config,
                                 std::span<const Outcome> outcomes,
                                 Bit truth, Actor guesser,
                                 Transcript& transcript) {
  const double horizon = config.DisclosureHorizon();
  Evidence evidence(outcomes.size());
  std::vector<int> used;
  for (int c = 0; c < static_cast<int>(outcomes.size()); ++c) {
    const DetectionRecord r = RecordAt(outcomes[c], horizon);
    if (r.channel() == Channel::kZero || r.channel() == Channel::kOne) {
      evidence[c] = r.channel() == Channel::kOne ? Bit::kOne : Bit::kZero;
      used.push_back(c);
    }
  }
  const ParityGuess g =
      config.enumerated_guesser
          ? EnumeratedParityGuess(config.blocks, config.block_length, evidence,
                                  kDefaultEnumerationBound)
          : ExactParityGuess(config.blocks, config.block_length, evidence);
  transcript.Append(horizon + config.channel_length, guesser,
                    GuessEvent{g.guess, g.confidence, used});
  return EarlyGuessOutcome{g.guess, g.confidence, g.guess == truth,
                           static_cast<int>(used.size())};
}

DisclosureEntry EntryFor(const Commitment& c, int channel) {
  return DisclosureEntry{channel, c.block_values[c.code.slot(channel).block],
                         c.code.slot(channel).block};
}

std::vector<DisclosureEntry> EntriesFor(const Commitment& c,
                                        std::span<const int> channels) {
  std::vector<DisclosureEntry> out;
  out.reserve(channels.size());
  for (int ch : channels) out.push_back(EntryFor(c, ch));
  return out;
}

std::vector<int> AllChannels(int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) out[c] = c;
  return out;
}

// A mirror's guessed announcement for channels it never measured: an
// independent uniform bit per channel, grouped by value into blocks of k
// numbered from `first_block`.
std::vector<DisclosureEntry> MirrorGuess(std::span<const int> channels,
                                         int block_length, int first_block,
                                         RngStream& rng) {
  std::vector<DisclosureEntry> zeros;
  std::vector<DisclosureEntry> ones;
  for (int c : channels) {
    const Bit b = RandomBit(rng);
    (b == Bit::kZero ? zeros : ones).push_back(DisclosureEntry{c, b, 0});
  }
  std::vector<DisclosureEntry> out = std::move(zeros);
  out.insert(out.end(), ones.begin(), ones.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].block = first_block + static_cast<int>(i) / block_length;
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.channel < b.channel; });
  return out;
}

}  // namespace

void ProtocolConfig::Validate() const {
  if (blocks < 1 || block_length < 1) {
    throw ConfigError("N and k must be >= 1");
  }
  if (static_cast<long long>(blocks) * block_length > kMaxChannels) {
    throw ConfigError("N*k exceeds " + std::to_string(kMaxChannels));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError("half width must be positive");
  }
  if (!(separation > 2.0 * half_width) || !std::isfinite(separation)) {
    throw ConfigError("separation tau0 must exceed twice the half width");
  }
  if (!(channel_length >= 0.0) ||
      !(channel_length < separation + 2.0 * half_width)) {
    throw ConfigError("channel length must lie in [0, tau0 + 2 dt)");
  }
  if (localization == Localization::kTailed &&
      !(tail_exponent > 0.0 && tail_exponent <= 700.0)) {
    throw ConfigError("tail exponent must lie in (0, 700]");
  }
  if (disclosure_horizon &&
      !(*disclosure_horizon > half_width &&
        *disclosure_horizon < separation + half_width)) {
    throw ConfigError("disclosure horizon must lie in (dt, tau0 + dt)");
  }
}

double ProtocolConfig::DisclosureHorizon() const {
  if (disclosure_horizon) return *disclosure_horizon;
  return 0.5 * (half_width + separation + half_width);
}

Waveform ProtocolConfig::Profile() const {
  // Waveforms carry a sampling table; share one per geometry and thread.
  using Key = std::tuple<Localization, double, double>;
  thread_local std::map<Key, Waveform> cache;
  const bool tailed = localization == Localization::kTailed;
  const Key key{localization, half_width, tailed ? tail_exponent : 0.0};
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, tailed ? Waveform::Tailed(half_width, tail_exponent)
                                  : Waveform::CompactBump(half_width))
             .first;
  }
  return it->second;
}

StretchedState ProtocolConfig::HonestState(Bit bit,
                                           double extra_translation) const {
  return StretchedState(Profile(), separation, bit, extra_translation);
}

double AccessibleHorizon(const ProtocolConfig& config, double wall_time) {
  if (!(wall_time >= 0.0)) {
    throw PreconditionError("wall time must be non-negative");
  }
  return wall_time - config.channel_length;
}

Verdict VerifyDisclosure(std::span<const DisclosureEntry> entries,
                         std::span<const Outcome> outcomes, double horizon,
                         int blocks, int block_length, Actor verifier) {
  const int n = blocks * block_length;
  std::vector<const DisclosureEntry*> by_channel(static_cast<std::size_t>(n),
                                                 nullptr);
  std::vector<int> block_sizes(static_cast<std::size_t>(blocks), 0);
  for (const DisclosureEntry& e : entries) {
    if (e.channel < 0 || e.channel >= n) {
      return Verdict::Aborted(e.channel, AbortReason::kInconsistentDisclosure,
                              verifier);
    }
    if (by_channel[e.channel] != nullptr || e.block < 0 || e.block >= blocks ||
        ++block_sizes[e.block] > block_length) {
      return Verdict::Aborted(e.channel, AbortReason::kInconsistentDisclosure,
                              verifier);
    }
    by_channel[e.channel] = &e;
  }
  for (int c = 0; c < n; ++c) {
    if (by_channel[c] == nullptr) {
      return Verdict::Aborted(c, AbortReason::kInconsistentDisclosure, verifier);
    }
  }

  for (int c = 0; c < n; ++c) {
    const DetectionRecord r = RecordAt(outcomes[c], horizon);
    if (r.channel() == Channel::kSilent) {
      return Verdict::Aborted(c, AbortReason::kSilentAtFullAccess, verifier);
    }
    if (r.channel() == Channel::kPerp) {
      return Verdict::Aborted(c, AbortReason::kPerpOutcome, verifier);
    }
    if (VerifyOutcome(by_channel[c]->bit, r) == Verification::kDiscrepant) {
      return Verdict::Aborted(c, AbortReason::kWrongChannel, verifier);
    }
  }

  std::vector<std::optional<Bit>> block_value(static_cast<std::size_t>(blocks));
  for (int c = 0; c < n; ++c) {
    const DisclosureEntry& e = *by_channel[c];
    if (!block_value[e.block]) {
      block_value[e.block] = e.bit;
    } else if (*block_value[e.block] != e.bit) {
      return Verdict::Aborted(c, AbortReason::kBlockMismatch, verifier);
    }
  }
  Bit parity = Bit::kZero;
  for (const auto& v : block_value) parity = parity ^ *v;
  return Verdict::Accepted(parity);
}

std::optional<Bit> ParityFromDisclosure(std::span<const DisclosureEntry> entries,
                                        int blocks, int block_length) {
  const int n = blocks * block_length;
  if (static_cast<int>(entries.size()) != n) return std::nullopt;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> sizes(static_cast<std::size_t>(blocks), 0);
  std::vector<std::optional<Bit>> value(static_cast<std::size_t>(blocks));
  for (const auto& e : entries) {
    if (e.channel < 0 || e.channel >= n || seen[e.channel] || e.block < 0 ||
        e.block >= blocks || ++sizes[e.block] > block_length) {
      return std::nullopt;
    }
    seen[e.channel] = true;
    if (value[e.block] && *value[e.block] != e.bit) return std::nullopt;
    value[e.block] = e.bit;
  }
  Bit parity = Bit::kZero;
  for (const auto& v : value) parity = parity ^ *v;
  return parity;
}

BitCommitmentResult RunBitCommitment(const ProtocolConfig& config,
                                     const StrategyA& strategy_a,
                                     StrategyB strategy_b, RngStream& rng) {
  config.Validate();
  if (strategy_b == StrategyB::kSendBack) {
    throw ConfigError("send-back applies to coin tossing only");
  }
  if (strategy_a.kind == StrategyA::Kind::kDelayBlocks &&
      (strategy_a.delayed_blocks < 1 ||
       strategy_a.delayed_blocks > config.blocks)) {
    throw ConfigError("delayed block count must lie in [1, N]");
  }

  Transcript transcript;
  SenderRun sender = EmitStates(config, strategy_a, Actor::kA, transcript, rng);
  const Bit committed = sender.intended;
  const double full = config.FullAccessHorizon();
  const double t_disclose = config.DisclosureHorizon() + config.channel_length;

  LogDetections(config, sender.outcomes, full, Actor::kB, transcript);

  std::optional<EarlyGuessOutcome> guess;
  if (strategy_b == StrategyB::kEarlyGuess) {
    guess = MakeEarlyGuess(config, sender.outcomes, committed, Actor::kB,
                           transcript);
  }
  transcript.Append(t_disclose, Actor::kB, DisclosureRequestEvent{});
  const std::vector<int> all = AllChannels(config.channel_count());
  std::vector<DisclosureEntry> entries = EntriesFor(sender.commitment, all);
  transcript.Append(t_disclose, Actor::kA, DisclosureEvent{1, entries});

  Verdict verdict = VerifyDisclosure(entries, sender.outcomes, full,
                                     config.blocks, config.block_length,
                                     Actor::kB);
  transcript.Append(full + config.channel_length, Actor::kB,
                    VerdictEvent{verdict});
  transcript.Finalize();
  return BitCommitmentResult{std::move(transcript), verdict, committed, guess};
}

BitCommitmentResult RunBitCommitment(const ProtocolConfig& config,
                                     const StrategyA& strategy_a,
                                     StrategyB strategy_b) {
  RngStream rng = MakeStream(config.seed, {});
  return RunBitCommitment(config, strategy_a, strategy_b, rng);
}

CoinTossResult RunCoinToss(const ProtocolConfig& config,
                           const StrategyA& strategy_a, StrategyB strategy_b,
                           bool enforce_half_disclosure, RngStream& rng) {
  config.Validate();
  if (strategy_a.kind == StrategyA::Kind::kDelayBlocks &&
      (strategy_a.delayed_blocks < 1 ||
       strategy_a.delayed_blocks > config.blocks)) {
    throw ConfigError("delayed block count must lie in [1, N]");
  }
  const int n = config.channel_count();
  const double full = config.FullAccessHorizon();
  const double t_disclose = config.DisclosureHorizon() + config.channel_length;
  const bool mirror = strategy_b == StrategyB::kSendBack;

  Transcript transcript;
  SenderRun a = EmitStates(config, strategy_a, Actor::kA, transcript, rng);

  // What A receives on B's channels.
  std::optional<SenderRun> b;
  std::vector<Outcome> to_a;
  if (mirror) {
    // Reflected at B's end, so each state travels the channel twice.
    const std::vector<Bit> bits = a.commitment.ChannelBits();
    to_a.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      const bool late = a.commitment.code.slot(c).block <
                        (strategy_a.kind == StrategyA::Kind::kDelayBlocks
                             ? strategy_a.delayed_blocks
                             : 0);
      const StretchedState state =
          config.HonestState(bits[c], config.channel_length);
      transcript.Append((late ? config.separation : 0.0) - config.half_width +
                            config.channel_length,
                        Actor::kB, EmissionEvent{c, late, true});
      to_a.push_back(late ? SampleLateOutcome(config, bits[c],
                                              config.channel_length, rng)
                          : SampleOutcome(state, rng));
    }
  } else {
    b = EmitStates(config, StrategyA::Honest(), Actor::kB, transcript, rng);
    to_a = b->outcomes;
  }

  if (!mirror) LogDetections(config, a.outcomes, full, Actor::kB, transcript);
  // A waits until the states on B's channels are fully accessible; a
  // reflection arrives one channel length late.
  const double full_a = full + (mirror ? config.channel_length : 0.0);
  LogDetections(config, to_a, full_a, Actor::kA, transcript);

  std::optional<EarlyGuessOutcome> guess;
  if (strategy_b == StrategyB::kEarlyGuess) {
    guess = MakeEarlyGuess(config, a.outcomes, a.commitment.Parity(), Actor::kB,
                           transcript);
  }

  // Classical exchange. b_entries accumulates everything B announced.
  std::vector<DisclosureEntry> a_entries;
  std::vector<DisclosureEntry> b_entries;
  if (enforce_half_disclosure) {
    const int half_blocks = (config.blocks + 1) / 2;
    std::vector<int> first;
    std::vector<int> rest;
    for (int c = 0; c < n; ++c) {
      (a.commitment.code.slot(c).block < half_blocks ? first : rest).push_back(c);
    }
    // Phase 1: A, channels of its first half of blocks.
    std::vector<DisclosureEntry> p1 = EntriesFor(a.commitment, first);
    transcript.Append(t_disclose, Actor::kA, DisclosureEvent{1, p1});
    // Phase 2: B, every channel A has not disclosed.
    std::vector<DisclosureEntry> p2 =
        mirror ? MirrorGuess(rest, config.block_length, half_blocks, rng)
               : EntriesFor(b->commitment, rest);
    transcript.Append(t_disclose, Actor::kB, DisclosureEvent{2, p2});
    // Phase 3: A, the rest.
    std::vector<DisclosureEntry> p3 = EntriesFor(a.commitment, rest);
    transcript.Append(t_disclose, Actor::kA, DisclosureEvent{3, p3});
    // Phase 4: B, the channels A opened in phase 1.
    std::vector<DisclosureEntry> p4 =
        mirror ? p1 : EntriesFor(b->commitment, first);
    transcript.Append(t_disclose, Actor::kB, DisclosureEvent{4, p4});

    a_entries = std::move(p1);
    a_entries.insert(a_entries.end(), p3.begin(), p3.end());
    b_entries = std::move(p2);
    b_entries.insert(b_entries.end(), p4.begin(), p4.end());
  } else {
    const std::vector<int> all = AllChannels(n);
    a_entries = EntriesFor(a.commitment, all);
    transcript.Append(t_disclose, Actor::kA, DisclosureEvent{1, a_entries});
    b_entries = mirror ? a_entries : EntriesFor(b->commitment, all);
    transcript.Append(t_disclose, Actor::kB, DisclosureEvent{2, b_entries});
  }

  // B checks A (a mirror holds no outcomes and accepts), then A checks B.
  std::optional<Verdict> failure;
  if (!mirror) {
    Verdict v = VerifyDisclosure(a_entries, a.outcomes, full, config.blocks,
                                 config.block_length, Actor::kB);
    if (!v.accepted()) failure = v;
  }
  std::optional<Bit> bit_b;
  if (!failure) {
    Verdict v = VerifyDisclosure(b_entries, to_a, full_a, config.blocks,
                                 config.block_length, Actor::kA);
    if (!v.accepted()) {
      failure = v;
    } else {
      bit_b = v.bit();
    }
  }

  const Verdict verdict = [&] {
    if (failure) return *failure;
    const Bit lot = a.commitment.Parity() ^ *bit_b;
    return Verdict::Accepted(lot,
                             lot == config.a_wins_on ? Actor::kA : Actor::kB);
  }();
  transcript.Append(full_a + config.channel_length, Actor::kSystem, VerdictEvent{verdict});
  transcript.Finalize();

  std::optional<Bit> committed_b;
  if (b) committed_b = b->commitment.Parity();
  return CoinTossResult{std::move(transcript), verdict, a.commitment.Parity(),
                        committed_b, guess};
}

CoinTossResult RunCoinToss(const ProtocolConfig& config,
                           const StrategyA& strategy_a, StrategyB strategy_b,
                           bool enforce_half_disclosure) {
  RngStream rng = MakeStream(config.seed, {});
  return RunCoinToss(config, strategy_a, strategy_b, enforce_half_disclosure,
                     rng);
}

}  // namespace rqp
