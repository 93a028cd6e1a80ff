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

// Microbenchmarks for the hot paths of a sweep.

#include <optional>
#include <vector>

#include "benchmark/benchmark.h"
#include "rqp/parity.h"
#include "rqp/protocol.h"
#include "rqp/rng.h"
#include "rqp/wavepacket.h"

namespace rqp {
namespace {

void BM_CompactQuantile(benchmark::State& state) {
  const Waveform w = Waveform::CompactBump(1.0);
  RngStream rng = MakeStream(1, {});
  for (auto _ : state) benchmark::DoNotOptimize(w.Quantile(Uniform01(rng)));
}
BENCHMARK(BM_CompactQuantile);

void BM_TailedQuantile(benchmark::State& state) {
  const Waveform w = Waveform::Tailed(1.0, 4.0);
  RngStream rng = MakeStream(2, {});
  for (auto _ : state) benchmark::DoNotOptimize(w.Quantile(Uniform01(rng)));
}
BENCHMARK(BM_TailedQuantile);

void BM_ClosedFormCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(CountBlockStringsClosed(n, 8));
}
BENCHMARK(BM_ClosedFormCount)->Arg(4)->Arg(64)->Arg(512);

void BM_EnumeratedCount(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(EnumerateBlockStrings(2, k, 20));
}
BENCHMARK(BM_EnumeratedCount)->Arg(4)->Arg(8)->Arg(10);

Evidence HalfEvidence(int blocks, int block_length) {
  RngStream rng = MakeStream(3, {});
  const Commitment c = SampleCommitment(blocks, block_length, rng);
  const std::vector<Bit> bits = c.ChannelBits();
  Evidence e(bits.size());
  for (std::size_t i = 0; i < bits.size(); i += 2) e[i] = bits[i];
  return e;
}

void BM_ExactParityGuess(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Evidence e = HalfEvidence(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(ExactParityGuess(n, 4, e));
}
BENCHMARK(BM_ExactParityGuess)->Arg(2)->Arg(8)->Arg(32);

void BM_EnumeratedParityGuess(benchmark::State& state) {
  const Evidence e = HalfEvidence(4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(EnumeratedParityGuess(4, 4, e));
}
BENCHMARK(BM_EnumeratedParityGuess);

void BM_BitCommitmentRun(benchmark::State& state) {
  ProtocolConfig config;
  config.blocks = static_cast<int>(state.range(0));
  config.block_length = 4;
  RngStream rng = MakeStream(4, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunBitCommitment(config, StrategyA::Honest(), StrategyB::kHonest, rng));
  }
}
BENCHMARK(BM_BitCommitmentRun)->Arg(2)->Arg(16);

void BM_CoinTossRun(benchmark::State& state) {
  ProtocolConfig config;
  config.blocks = 4;
  config.block_length = 4;
  RngStream rng = MakeStream(5, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunCoinToss(config, StrategyA::Honest(), StrategyB::kHonest, true, rng));
  }
}
BENCHMARK(BM_CoinTossRun);

}  // namespace
}  // namespace rqp

BENCHMARK_MAIN();
