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

#ifndef RQP_WAVEPACKET_H_
#define RQP_WAVEPACKET_H_

// Light-cone amplitude profiles f(tau), tau = t - x with c = 1.
//
// Only |f|^2 enters the outcome statistics, so every family here is a
// real, non-negative amplitude with a closed-form cumulative mass. Two
// families are provided:
//
//   CompactBump(dt)     f ~ cos^2(pi (tau - c) / (2 dt)) on (c - dt, c + dt),
//                       exactly zero outside.
//   Tailed(dt, xi)      Gaussian |f|^2 whose mass outside (c - dt, c + dt)
//                       is exactly e^-xi; a stand-in for the strongly but
//                       not compactly localized field states.

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "rqp/rng.h"

namespace rqp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Logical value carried by the internal (helicity) degree of freedom.
enum class Bit : std::uint8_t { kZero = 0, kOne = 1 };

inline constexpr Bit operator^(Bit a, Bit b) {
  return static_cast<Bit>(static_cast<std::uint8_t>(a) ^
                          static_cast<std::uint8_t>(b));
}
inline constexpr int ToInt(Bit b) { return static_cast<int>(b); }
inline constexpr Bit ToBit(int v) { return v ? Bit::kOne : Bit::kZero; }

// Interval (lo, hi] on the light cone. Either end may be infinite.
class Window {
 public:
  // Throws PreconditionError unless hi > lo.
  Window(double lo, double hi);

  static Window Everything() { return Window(-kInfinity, kInfinity); }
  static Window UpTo(double hi) { return Window(-kInfinity, hi); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool Contains(double tau) const { return tau > lo_ && tau <= hi_; }
  bool Overlaps(const Window& other) const {
    return lo_ < other.hi_ && other.lo_ < hi_;
  }
  Window Shifted(double delta) const { return Window(lo_ + delta, hi_ + delta); }

 private:
  double lo_;
  double hi_;
};

enum class Localization { kCompact, kTailed };

class Waveform {
 public:
  // Throws PreconditionError for half_width <= 0.
  static Waveform CompactBump(double half_width, double center = 0.0);
  // Throws PreconditionError for half_width <= 0 or tail_exponent outside
  // (0, 700].
  static Waveform Tailed(double half_width, double tail_exponent,
                         double center = 0.0);

  Localization localization() const { return localization_; }
  double half_width() const { return half_width_; }
  // xi for the tailed family, +infinity for compact bumps.
  double tail_exponent() const { return tail_exponent_; }
  double center() const { return center_; }
  // Gaussian standard deviation of |f|^2 (tailed family only, else 0).
  double sigma() const { return sigma_; }

  double Amplitude(double tau) const;
  double Density(double tau) const;
  double Cdf(double tau) const;
  double Survival(double tau) const;
  double Mass(const Window& window) const;

  // Inverse of Cdf for u in (0, 1).
  double Quantile(double u) const;

  // (center - dt, center + dt).
  Window NominalSupport() const;
  // Interval outside of which |f|^2 is identically zero (compact) or below
  // 1e-40 relative mass (tailed). Used to bound quadrature.
  Window EffectiveSupport() const;

  Waveform Translated(double delta) const;

 private:
  struct QuantileTable;

  Waveform(Localization localization, double half_width, double tail_exponent,
           double center, double sigma);

  // Centered (center = 0) variants used by the table and the public API.
  double CenteredCdf(double x) const;
  double CenteredSurvival(double x) const;
  double CenteredDensity(double x) const;

  Localization localization_;
  double half_width_;
  double tail_exponent_;
  double center_;
  double sigma_;
  // Immutable after construction and shared by translated copies.
  std::shared_ptr<const QuantileTable> table_;
};

// Integral of f_a(tau) f_b(tau) over the real line, by composite
// Gauss-Legendre quadrature on the intersection of effective supports.
double InnerProduct(const Waveform& a, const Waveform& b);

// Two-hump stretched state (f(tau) + f(tau - tau0)) / sqrt(2) (x) |e_bit>,
// translated as a whole by `translation`.
class StretchedState {
 public:
  // `profile` gives the family and width; its center is ignored. Throws
  // PreconditionError when separation <= 0, or for compact profiles when
  // the hump supports would intersect (separation <= 2 dt).
  StretchedState(const Waveform& profile, double separation, Bit internal_bit,
                 double translation = 0.0);

  const Waveform& front() const { return front_; }
  const Waveform& rear() const { return rear_; }
  double separation() const { return separation_; }
  Bit internal_bit() const { return internal_bit_; }
  double translation() const { return translation_; }
  Localization localization() const { return front_.localization(); }

  // (1/2)(|f(tau - s)|^2 + |f(tau - tau0 - s)|^2), s the translation.
  double Density(double tau) const;
  // Nominal localization intervals of the two humps.
  Window FrontInterval() const { return front_.NominalSupport(); }
  Window RearInterval() const { return rear_.NominalSupport(); }
  // True when tau lies in either nominal hump interval.
  bool InNominalRegion(double tau) const;

  // Draws a light-cone outcome time from Density.
  double SampleTime(RngStream& rng) const;

  StretchedState WithBit(Bit bit) const;

 private:
  Waveform front_;
  Waveform rear_;
  double separation_;
  Bit internal_bit_;
  double translation_;
};

// Probability of an outcome inside `window`.
double WindowMass(const StretchedState& state, const Window& window);

StretchedState Translate(const StretchedState& state, double delta);

// Pure spatial state sum_i c_i w_i(tau), normalized on construction.
// Models a state prepared late by a cheating sender.
class DelayedState {
 public:
  struct Component {
    Waveform waveform;
    double amplitude;
  };

  // Throws PreconditionError for an empty or zero-norm superposition.
  explicit DelayedState(std::vector<Component> components);

  // Single hump with unit amplitude.
  static DelayedState Single(const Waveform& waveform);
  // Exactly the rear hump f(tau - tau0) of `honest`: the sender's best case.
  static DelayedState RearHumpOf(const StretchedState& honest);

  const std::vector<Component>& components() const { return components_; }

  // Draws an outcome time. Components are treated as non-overlapping, so
  // the time law is the c_i^2-weighted mixture of the hump densities.
  double SampleTime(RngStream& rng) const;

 private:
  std::vector<Component> components_;
};

// |<g|phi>|^2 with g the normalized two-hump spatial profile of `honest`.
// Precondition: no component's nominal support intersects the honest front
// hump interval; violations throw PreconditionError("support covers front
// hump"). The result is at most 1/2 (plus the tail overlap for tailed
// profiles).
double DelayedOverlap(const DelayedState& delayed,
                      const StretchedState& honest);

}  // namespace rqp

#endif  // RQP_WAVEPACKET_H_
