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

#ifndef RQP_RNG_H_
#define RQP_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rqp {

// Every random draw in the library goes through an RngStream owned by
// exactly one trial. Streams are never shared between threads.
using RngStream = std::mt19937_64;

// Default master seed used when the caller supplies none.
inline constexpr std::uint64_t kDefaultSeed = 20010417;

// One round of the splitmix64 finalizer.
std::uint64_t SplitMix64(std::uint64_t x);

// Derives a child seed from a master seed and a path of stream
// identifiers (cell key, trial index, ...). The derivation is a fold of
// splitmix64 over the path, so distinct paths give decorrelated streams
// and the result depends only on the arguments, never on scheduling.
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path);

RngStream MakeStream(std::uint64_t master,
                     std::initializer_list<std::uint64_t> path);

// Uniform double in [0, 1) built from the top 53 bits of one draw.
// Portable across standard libraries, unlike uniform_real_distribution.
inline double Uniform01(RngStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(RngStream& rng, double p) { return Uniform01(rng) < p; }

// Uniform integer in [0, n) without modulo bias.
std::uint64_t UniformIndex(RngStream& rng, std::uint64_t n);

}  // namespace rqp

#endif  // RQP_RNG_H_
