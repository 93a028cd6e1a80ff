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

#ifndef RQP_PARITY_H_
#define RQP_PARITY_H_

// Parity-bit coding with scattered blocks.
//
// The committed bit is the parity of N block values; each block value is
// replicated k times and the N*k copies are scattered over N*k channels by
// a secret permutation. A string of N*k channel bits is a valid block
// string iff its popcount is a multiple of k; its parity is
// (popcount / k) mod 2.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rqp/rng.h"
#include "rqp/wavepacket.h"

namespace rqp {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kDefaultEnumerationBound = 20;

struct BlockCounts {
  BigInt even;
  BigInt odd;

  BigInt total() const { return even + odd; }
  bool operator==(const BlockCounts&) const = default;
};

// Direct binomial sums: even = sum over even l of C(Nk, lk), odd likewise.
BlockCounts CountBlockStrings(int blocks, int block_length);

// Roots-of-unity filter evaluated exactly: (1 + x)^(Nk) is reduced in the
// group ring Z[x] / (x^(2k) - 1); the coefficient at x^0 collects the
// strings with an even number of one-blocks and the one at x^k the odd.
BlockCounts CountBlockStringsClosed(int blocks, int block_length);

// Floating-point cosine form of the filter,
//   2^(Nk) / (2k) * sum_{l=1..k} cos^(Nk)(l pi / k) cos(N l pi),
// which equals half the total number of valid strings.
double CosineFilterHalfTotal(int blocks, int block_length);

// Brute force over all 2^(Nk) strings. Throws EnumerationBoundError when
// Nk > enumeration_bound.
BlockCounts EnumerateBlockStrings(int blocks, int block_length,
                                  int enumeration_bound = kDefaultEnumerationBound);

// log2(total valid strings) / (Nk).
double Alpha(int blocks, int block_length);

// Optimal guessing success with plain (k = 1) coding and half access:
// 1/2 + 2^-(N+1).
double PcParityPlain(int blocks);

// Scattered-block guessing bound 1/2 + 2^(-alpha N k). For k = 1 its
// excess term is twice that of PcParityPlain.
double PcParityBlockBound(int blocks, int block_length);

// Per-block identification probability when block positions are public:
// 1 - 2^-k.
double PFixedBlock(int block_length);
// All N blocks identified: (1 - 2^-k)^N.
double PAccFixed(int blocks, int block_length);

// Exact success probability of the Bayes-optimal early guesser when every
// channel fires independently with probability p_fire and the secret is
// drawn by SampleCommitment.
double BayesGuessSuccess(int blocks, int block_length, double p_fire);

// Location of one channel inside the code: which block, which copy.
struct ChannelSlot {
  int block;
  int slot;
  bool operator==(const ChannelSlot&) const = default;
};

class BlockCode {
 public:
  // Throws PreconditionError unless blocks, block_length >= 1 and
  // `assignment` is a bijection onto {0..N-1} x {0..k-1}.
  BlockCode(int blocks, int block_length, std::vector<ChannelSlot> assignment);

  // Channel c holds block c / k, slot c % k.
  static BlockCode Identity(int blocks, int block_length);
  // Uniformly random permutation of channels.
  static BlockCode Random(int blocks, int block_length, RngStream& rng);

  int blocks() const { return blocks_; }
  int block_length() const { return block_length_; }
  int channel_count() const { return blocks_ * block_length_; }
  const ChannelSlot& slot(int channel) const { return assignment_[channel]; }
  const std::vector<ChannelSlot>& assignment() const { return assignment_; }
  // Channels of `block`, ordered by slot.
  std::vector<int> ChannelsOfBlock(int block) const;

 private:
  int blocks_;
  int block_length_;
  std::vector<ChannelSlot> assignment_;
};

// A sender's secret: code layout plus one value per block.
struct Commitment {
  BlockCode code;
  std::vector<Bit> block_values;

  Bit Parity() const;
  // Per-channel bits induced by the layout.
  std::vector<Bit> ChannelBits() const;
};

// Sender's sampler: parity uniform, block values uniform among vectors of
// that parity, layout a uniform permutation. `forced_parity` fixes the bit.
Commitment SampleCommitment(int blocks, int block_length, RngStream& rng,
                            std::optional<Bit> forced_parity = std::nullopt);

// Returns the parity of a valid block string, std::nullopt when the
// popcount is not a multiple of block_length.
std::optional<Bit> BlockStringParity(std::span<const Bit> bits,
                                     int block_length);

// What the receiver has seen per channel: the fired value, or nothing.
using Evidence = std::vector<std::optional<Bit>>;

struct ParityGuess {
  Bit guess;
  double confidence;  // posterior probability of `guess`
};

// Bayes-optimal parity guess from partial evidence with unknown block
// positions. The posterior over valid strings weights each string by the
// sender's sampling law, C(N, l) / C(Nk, lk) for l one-blocks; consistent
// strings are counted per popcount class. Ties go to Bit::kZero. Throws
// InconsistentEvidenceError when no valid string matches the evidence and
// PreconditionError when evidence.size() != N * k.
ParityGuess ExactParityGuess(int blocks, int block_length,
                             const Evidence& evidence);

// Same posterior by walking all 2^(Nk) strings. Throws
// EnumerationBoundError when Nk > enumeration_bound.
ParityGuess EnumeratedParityGuess(int blocks, int block_length,
                                  const Evidence& evidence,
                                  int enumeration_bound = kDefaultEnumerationBound);

}  // namespace rqp

#endif  // RQP_PARITY_H_
