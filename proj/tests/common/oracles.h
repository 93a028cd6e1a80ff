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

#ifndef RQP_TESTS_COMMON_ORACLES_H_
#define RQP_TESTS_COMMON_ORACLES_H_

// Reference computations written independently of the library, for use as
// test oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace rqp::oracle {

// Adaptive Simpson quadrature.
inline double Simpson(const std::function<double(double)>& f, double a,
                      double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, left, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

// Splits [a, b] into `pieces` equal panels and integrates each adaptively.
inline double Integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-15, int pieces = 64) {
  double total = 0.0;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    total += Simpson(f, a + i * h, a + (i + 1) * h, tol / pieces);
  }
  return total;
}

// Binomial coefficient in double precision (small arguments).
inline double Choose(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

// Exact counts of valid block strings by walking every bit string.
struct StringCensus {
  std::uint64_t even = 0;
  std::uint64_t odd = 0;
};
inline StringCensus CensusByWalking(int blocks, int block_length) {
  const int n = blocks * block_length;
  StringCensus c;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    const int ones = __builtin_popcountll(s);
    if (ones % block_length != 0) continue;
    if ((ones / block_length) % 2 == 0) {
      ++c.even;
    } else {
      ++c.odd;
    }
  }
  return c;
}

// Sender's law over channel strings, obtained by walking every block-value
// vector and every channel permutation (Nk <= 8). Entry s is the
// probability of channel string s (bit i = channel i).
inline std::vector<double> StringLawByPermutations(int blocks,
                                                   int block_length) {
  const int n = blocks * block_length;
  std::vector<double> law(std::size_t{1} << n, 0.0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Parity uniform, then values uniform within parity: every vector of
  // block values has probability 2^-N.
  const double p_values = std::ldexp(1.0, -blocks);
  const double p_perm = 1.0 / static_cast<double>(perms.size());
  for (std::uint32_t v = 0; v < (1u << blocks); ++v) {
    for (const auto& p : perms) {
      // Channel c carries block p[c] / k.
      std::uint64_t s = 0;
      for (int c = 0; c < n; ++c) {
        if ((v >> (p[c] / block_length)) & 1u) s |= std::uint64_t{1} << c;
      }
      law[s] += p_values * p_perm;
    }
  }
  return law;
}

// Success of the best parity guess when each channel is revealed
// independently with probability p_fire, by walking every reveal pattern
// and every string.
inline double OptimalGuessSuccessByWalking(int blocks, int block_length,
                                           double p_fire) {
  const int n = blocks * block_length;
  const std::vector<double> law = StringLawByPermutations(blocks, block_length);
  double success = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int seen = __builtin_popcountll(mask);
    const double p_mask =
        std::pow(p_fire, seen) * std::pow(1.0 - p_fire, n - seen);
    // Joint law of (observed bits, parity), keyed by s & mask.
    std::vector<double> by_obs(std::size_t{2} << n, 0.0);
    for (std::uint64_t s = 0; s < law.size(); ++s) {
      if (law[s] == 0.0) continue;
      const int parity = (__builtin_popcountll(s) / block_length) % 2;
      by_obs[2 * (s & mask) + parity] += law[s];
    }
    double best = 0.0;
    for (std::uint64_t o = 0; o < (std::uint64_t{1} << n); ++o) {
      best += std::max(by_obs[2 * o], by_obs[2 * o + 1]);
    }
    success += p_mask * best;
  }
  return success;
}

// z-score of k successes in n trials against probability p.
inline double BinomialZ(std::int64_t k, std::int64_t n, double p) {
  const double est = static_cast<double>(k) / static_cast<double>(n);
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  if (sd == 0.0) return est == p ? 0.0 : INFINITY;
  return (est - p) / sd;
}

}  // namespace rqp::oracle

#endif  // RQP_TESTS_COMMON_ORACLES_H_
