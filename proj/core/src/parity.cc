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

#include "rqp/parity.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "rqp/errors.h"

namespace rqp {
namespace {

using Rational = boost::multiprecision::cpp_rational;

void RequireCode(int blocks, int block_length) {
  if (blocks < 1 || block_length < 1) {
    throw PreconditionError("block count and block length must be >= 1");
  }
}

BigInt Binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt result = 1;
  for (int i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

double Log2(const BigInt& value) {
  if (value <= 0) return -kInfinity;
  const std::size_t msb = boost::multiprecision::msb(value);
  if (msb < 53) return std::log2(value.convert_to<double>());
  const std::size_t shift = msb - 52;
  const BigInt top = value >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

// Product of two polynomials modulo x^m - 1.
std::vector<BigInt> CyclicMultiply(const std::vector<BigInt>& a,
                                   const std::vector<BigInt>& b) {
  const std::size_t m = a.size();
  std::vector<BigInt> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (b[j] == 0) continue;
      out[(i + j) % m] += a[i] * b[j];
    }
  }
  return out;
}

double LogBinomial(int n, int r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

// Per popcount class l, the number of valid strings consistent with the
// evidence is C(n - f, l k - f1).
struct EvidenceSummary {
  int fired = 0;
  int fired_ones = 0;
};

EvidenceSummary Summarize(const Evidence& evidence) {
  EvidenceSummary s;
  for (const auto& e : evidence) {
    if (!e) continue;
    ++s.fired;
    if (*e == Bit::kOne) ++s.fired_ones;
  }
  return s;
}

// Turns per-class consistent-string counts into a posterior guess.
ParityGuess GuessFromClassCounts(int blocks, int block_length,
                                 const std::vector<BigInt>& consistent) {
  const int n = blocks * block_length;
  Rational even = 0;
  Rational odd = 0;
  for (int l = 0; l <= blocks; ++l) {
    if (consistent[l] == 0) continue;
    const Rational w = Rational(Binomial(blocks, l) * consistent[l]) /
                       Rational(Binomial(n, l * block_length));
    if (l % 2 == 0) {
      even += w;
    } else {
      odd += w;
    }
  }
  const Rational total = even + odd;
  if (total == 0) throw InconsistentEvidenceError();
  if (even >= odd) {
    return ParityGuess{Bit::kZero, Rational(even / total).convert_to<double>()};
  }
  return ParityGuess{Bit::kOne, Rational(odd / total).convert_to<double>()};
}

}  // namespace

BlockCounts CountBlockStrings(int blocks, int block_length) {
  RequireCode(blocks, block_length);
  const int n = blocks * block_length;
  BlockCounts counts;
  for (int l = 0; l <= blocks; ++l) {
    BigInt c = Binomial(n, l * block_length);
    if (l % 2 == 0) {
      counts.even += c;
    } else {
      counts.odd += c;
    }
  }
  return counts;
}

BlockCounts CountBlockStringsClosed(int blocks, int block_length) {
  RequireCode(blocks, block_length);
  const std::size_t modulus = 2 * static_cast<std::size_t>(block_length);
  unsigned exponent = static_cast<unsigned>(blocks) *
                      static_cast<unsigned>(block_length);
  std::vector<BigInt> base(modulus);
  base[0] += 1;
  base[1 % modulus] += 1;
  std::vector<BigInt> result(modulus);
  result[0] = 1;
  while (exponent > 0) {
    if (exponent & 1u) result = CyclicMultiply(result, base);
    exponent >>= 1;
    if (exponent > 0) base = CyclicMultiply(base, base);
  }
  return BlockCounts{result[0], result[static_cast<std::size_t>(block_length)]};
}

double CosineFilterHalfTotal(int blocks, int block_length) {
  RequireCode(blocks, block_length);
  const int n = blocks * block_length;
  long double sum = 0.0L;
  for (int l = 1; l <= block_length; ++l) {
    const long double angle =
        static_cast<long double>(l) * std::numbers::pi_v<long double> /
        block_length;
    // cos(N l pi) is exactly +-1.
    const long double sign = ((static_cast<long long>(blocks) * l) % 2 == 0)
                                 ? 1.0L
                                 : -1.0L;
    sum += std::pow(std::cos(angle), static_cast<long double>(n)) * sign;
  }
  return static_cast<double>(std::ldexp(sum, n) / (2.0L * block_length));
}

BlockCounts EnumerateBlockStrings(int blocks, int block_length,
                                  int enumeration_bound) {
  RequireCode(blocks, block_length);
  const int n = blocks * block_length;
  if (n > enumeration_bound || n > 40) {
    throw EnumerationBoundError(n, std::min(enumeration_bound, 40));
  }
  std::uint64_t even = 0;
  std::uint64_t odd = 0;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < end; ++s) {
    const int pc = std::popcount(s);
    if (pc % block_length != 0) continue;
    if ((pc / block_length) % 2 == 0) {
      ++even;
    } else {
      ++odd;
    }
  }
  return BlockCounts{BigInt(even), BigInt(odd)};
}

double Alpha(int blocks, int block_length) {
  const BlockCounts counts = CountBlockStringsClosed(blocks, block_length);
  return Log2(counts.total()) / (static_cast<double>(blocks) * block_length);
}

double PcParityPlain(int blocks) {
  RequireCode(blocks, 1);
  return 0.5 + std::ldexp(1.0, -(blocks + 1));
}

double PcParityBlockBound(int blocks, int block_length) {
  const double exponent =
      Alpha(blocks, block_length) * static_cast<double>(blocks) * block_length;
  return 0.5 + std::exp2(-exponent);
}

double PFixedBlock(int block_length) {
  RequireCode(1, block_length);
  return 1.0 - std::ldexp(1.0, -block_length);
}

double PAccFixed(int blocks, int block_length) {
  RequireCode(blocks, block_length);
  return std::pow(PFixedBlock(block_length), blocks);
}

double BayesGuessSuccess(int blocks, int block_length, double p_fire) {
  RequireCode(blocks, block_length);
  if (!(p_fire >= 0.0 && p_fire <= 1.0)) {
    throw PreconditionError("fire probability must lie in [0, 1]");
  }
  const int n = blocks * block_length;
  const double log_class_prior = -blocks * std::log(2.0);
  double success = 0.0;
  for (int f = 0; f <= n; ++f) {
    double log_pattern;
    if (p_fire == 0.0) {
      if (f > 0) continue;
      log_pattern = 0.0;
    } else if (p_fire == 1.0) {
      if (f < n) continue;
      log_pattern = 0.0;
    } else {
      log_pattern = f * std::log(p_fire) + (n - f) * std::log1p(-p_fire);
    }
    for (int f1 = 0; f1 <= f; ++f1) {
      double even = 0.0;
      double odd = 0.0;
      for (int l = 0; l <= blocks; ++l) {
        const int ones = l * block_length;
        if (f1 > ones || f - f1 > n - ones) continue;
        // P(class l) * P(fired set) * #ways to place f1 ones and f - f1
        // zeros among the fired channels, normalized by C(n, f) patterns.
        const double w = std::exp(LogBinomial(blocks, l) + log_class_prior +
                                  log_pattern + LogBinomial(ones, f1) +
                                  LogBinomial(n - ones, f - f1));
        if (l % 2 == 0) {
          even += w;
        } else {
          odd += w;
        }
      }
      success += std::max(even, odd);
    }
  }
  return success;
}

BlockCode::BlockCode(int blocks, int block_length,
                     std::vector<ChannelSlot> assignment)
    : blocks_(blocks),
      block_length_(block_length),
      assignment_(std::move(assignment)) {
  RequireCode(blocks, block_length);
  const std::size_t n = static_cast<std::size_t>(blocks) * block_length;
  if (assignment_.size() != n) {
    throw PreconditionError("assignment must cover exactly N*k channels");
  }
  std::vector<bool> seen(n, false);
  for (const ChannelSlot& s : assignment_) {
    if (s.block < 0 || s.block >= blocks || s.slot < 0 ||
        s.slot >= block_length) {
      throw PreconditionError("assignment slot out of range");
    }
    const std::size_t index =
        static_cast<std::size_t>(s.block) * block_length + s.slot;
    if (seen[index]) throw PreconditionError("assignment is not a bijection");
    seen[index] = true;
  }
}

BlockCode BlockCode::Identity(int blocks, int block_length) {
  RequireCode(blocks, block_length);
  std::vector<ChannelSlot> assignment;
  assignment.reserve(static_cast<std::size_t>(blocks) * block_length);
  for (int b = 0; b < blocks; ++b) {
    for (int s = 0; s < block_length; ++s) assignment.push_back({b, s});
  }
  return BlockCode(blocks, block_length, std::move(assignment));
}

BlockCode BlockCode::Random(int blocks, int block_length, RngStream& rng) {
  BlockCode code = Identity(blocks, block_length);
  auto& a = code.assignment_;
  for (std::size_t i = a.size(); i > 1; --i) {
    std::swap(a[i - 1], a[UniformIndex(rng, i)]);
  }
  return code;
}

std::vector<int> BlockCode::ChannelsOfBlock(int block) const {
  std::vector<int> channels(static_cast<std::size_t>(block_length_), -1);
  for (int c = 0; c < channel_count(); ++c) {
    if (assignment_[c].block == block) channels[assignment_[c].slot] = c;
  }
  return channels;
}

Bit Commitment::Parity() const {
  Bit parity = Bit::kZero;
  for (Bit b : block_values) parity = parity ^ b;
  return parity;
}

std::vector<Bit> Commitment::ChannelBits() const {
  std::vector<Bit> bits(static_cast<std::size_t>(code.channel_count()));
  for (int c = 0; c < code.channel_count(); ++c) {
    bits[c] = block_values[code.slot(c).block];
  }
  return bits;
}

Commitment SampleCommitment(int blocks, int block_length, RngStream& rng,
                            std::optional<Bit> forced_parity) {
  RequireCode(blocks, block_length);
  const Bit parity =
      forced_parity ? *forced_parity : ToBit(static_cast<int>(rng() >> 63));
  std::vector<Bit> values(static_cast<std::size_t>(blocks));
  Bit running = Bit::kZero;
  for (int b = 0; b + 1 < blocks; ++b) {
    values[b] = ToBit(static_cast<int>(rng() >> 63));
    running = running ^ values[b];
  }
  values.back() = running ^ parity;
  return Commitment{BlockCode::Random(blocks, block_length, rng),
                    std::move(values)};
}

std::optional<Bit> BlockStringParity(std::span<const Bit> bits,
                                     int block_length) {
  RequireCode(1, block_length);
  const auto ones = std::count(bits.begin(), bits.end(), Bit::kOne);
  if (ones % block_length != 0) return std::nullopt;
  return ToBit(static_cast<int>((ones / block_length) % 2));
}

ParityGuess ExactParityGuess(int blocks, int block_length,
                             const Evidence& evidence) {
  RequireCode(blocks, block_length);
  const int n = blocks * block_length;
  if (static_cast<int>(evidence.size()) != n) {
    throw PreconditionError("evidence must cover all N*k channels");
  }
  const EvidenceSummary s = Summarize(evidence);
  std::vector<BigInt> consistent(static_cast<std::size_t>(blocks) + 1);
  for (int l = 0; l <= blocks; ++l) {
    consistent[l] = Binomial(n - s.fired, l * block_length - s.fired_ones);
  }
  return GuessFromClassCounts(blocks, block_length, consistent);
}

ParityGuess EnumeratedParityGuess(int blocks, int block_length,
                                  const Evidence& evidence,
                                  int enumeration_bound) {
  RequireCode(blocks, block_length);
  const int n = blocks * block_length;
  if (static_cast<int>(evidence.size()) != n) {
    throw PreconditionError("evidence must cover all N*k channels");
  }
  if (n > enumeration_bound || n > 40) {
    throw EnumerationBoundError(n, std::min(enumeration_bound, 40));
  }
  std::uint64_t mask = 0;
  std::uint64_t values = 0;
  for (int c = 0; c < n; ++c) {
    if (!evidence[c]) continue;
    mask |= std::uint64_t{1} << c;
    if (*evidence[c] == Bit::kOne) values |= std::uint64_t{1} << c;
  }
  std::vector<std::uint64_t> per_class(static_cast<std::size_t>(blocks) + 1, 0);
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < end; ++s) {
    if ((s & mask) != values) continue;
    const int pc = std::popcount(s);
    if (pc % block_length != 0) continue;
    ++per_class[pc / block_length];
  }
  std::vector<BigInt> consistent(per_class.begin(), per_class.end());
  return GuessFromClassCounts(blocks, block_length, consistent);
}

}  // namespace rqp
