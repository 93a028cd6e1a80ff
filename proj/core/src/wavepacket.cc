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

#include "rqp/wavepacket.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "rqp/errors.h"

namespace rqp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTablePoints = 4097;
// Tailed humps: |f|^2 mass beyond this many sigmas is below 1e-44.
constexpr double kTailSigmas = 14.0;

// 10-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659,
    0.6794095682990244062343274, 0.8650633666889845107320967,
    0.9739065285171717200779640};
constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269,
    0.2190863625159820439955349, 0.1494513491505805931457763,
    0.0666713443086881375935688};
constexpr int kGlPanels = 256;

// Solves erfc(z) = exp(-xi) for z >= 0 by bisection in log space.
double ErfcInverseOfExpNeg(double xi) {
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 300 && hi - lo > 1e-17 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double value = std::erfc(mid);
    if (value <= 0.0 || std::log(value) < -xi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Antiderivative of cos^4(x).
double Cos4Antiderivative(double x) {
  return 3.0 * x / 8.0 + std::sin(2.0 * x) / 4.0 + std::sin(4.0 * x) / 32.0;
}

}  // namespace

Window::Window(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(hi > lo)) {
    throw PreconditionError("degenerate window: hi must exceed lo");
  }
}

struct Waveform::QuantileTable {
  std::vector<double> x;
  std::vector<double> cdf;
};

Waveform::Waveform(Localization localization, double half_width,
                   double tail_exponent, double center, double sigma)
    : localization_(localization),
      half_width_(half_width),
      tail_exponent_(tail_exponent),
      center_(center),
      sigma_(sigma) {
  auto table = std::make_shared<QuantileTable>();
  const Window support = EffectiveSupport().Shifted(-center_);
  table->x.resize(kTablePoints);
  table->cdf.resize(kTablePoints);
  for (int i = 0; i < kTablePoints; ++i) {
    const double x = support.lo() + (support.hi() - support.lo()) * i /
                                         (kTablePoints - 1);
    table->x[i] = x;
    table->cdf[i] = CenteredCdf(x);
  }
  table_ = std::move(table);
}

Waveform Waveform::CompactBump(double half_width, double center) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw PreconditionError("half width must be positive and finite");
  }
  return Waveform(Localization::kCompact, half_width, kInfinity, center, 0.0);
}

Waveform Waveform::Tailed(double half_width, double tail_exponent,
                          double center) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw PreconditionError("half width must be positive and finite");
  }
  if (!(tail_exponent > 0.0) || tail_exponent > 700.0) {
    throw PreconditionError("tail exponent must lie in (0, 700]");
  }
  const double z = ErfcInverseOfExpNeg(tail_exponent);
  const double sigma = half_width / (z * std::numbers::sqrt2);
  return Waveform(Localization::kTailed, half_width, tail_exponent, center,
                  sigma);
}

double Waveform::CenteredDensity(double x) const {
  if (localization_ == Localization::kCompact) {
    if (std::abs(x) >= half_width_) return 0.0;
    const double c = std::cos(kPi * x / (2.0 * half_width_));
    return 4.0 / (3.0 * half_width_) * c * c * c * c;
  }
  const double u = x / sigma_;
  return std::exp(-0.5 * u * u) / (sigma_ * std::sqrt(2.0 * kPi));
}

double Waveform::CenteredCdf(double x) const {
  if (localization_ == Localization::kCompact) {
    if (x <= -half_width_) return 0.0;
    if (x >= half_width_) return 1.0;
    const double phase = kPi * x / (2.0 * half_width_);
    return std::clamp(0.5 + 8.0 / (3.0 * kPi) * Cos4Antiderivative(phase),
                      0.0, 1.0);
  }
  return 0.5 * std::erfc(-x / (sigma_ * std::numbers::sqrt2));
}

double Waveform::CenteredSurvival(double x) const {
  if (localization_ == Localization::kCompact) return CenteredCdf(-x);
  return 0.5 * std::erfc(x / (sigma_ * std::numbers::sqrt2));
}

double Waveform::Amplitude(double tau) const {
  const double x = tau - center_;
  if (localization_ == Localization::kCompact) {
    if (std::abs(x) >= half_width_) return 0.0;
    const double c = std::cos(kPi * x / (2.0 * half_width_));
    return std::sqrt(4.0 / (3.0 * half_width_)) * c * c;
  }
  return std::sqrt(CenteredDensity(x));
}

double Waveform::Density(double tau) const { return CenteredDensity(tau - center_); }
double Waveform::Cdf(double tau) const { return CenteredCdf(tau - center_); }
double Waveform::Survival(double tau) const {
  return CenteredSurvival(tau - center_);
}

double Waveform::Mass(const Window& window) const {
  const double lo = window.lo() - center_;
  const double hi = window.hi() - center_;
  // Difference of survivals on the right half keeps tail masses accurate.
  if (lo >= 0.0) return std::max(0.0, CenteredSurvival(lo) - CenteredSurvival(hi));
  if (hi <= 0.0) return std::max(0.0, CenteredCdf(hi) - CenteredCdf(lo));
  return (0.5 - CenteredCdf(lo)) + (0.5 - CenteredSurvival(hi));
}

double Waveform::Quantile(double u) const {
  const auto& xs = table_->x;
  const auto& cdf = table_->cdf;
  if (u <= 0.0) return center_ + xs.front();
  if (u >= 1.0) return center_ + xs.back();

  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t hi_index = static_cast<std::size_t>(it - cdf.begin());
  hi_index = std::clamp<std::size_t>(hi_index, 1, xs.size() - 1);
  double lo = xs[hi_index - 1];
  double hi = xs[hi_index];

  // Residual that stays accurate in both tails.
  const bool upper = u > 0.5;
  const double target = upper ? 1.0 - u : u;
  auto residual = [&](double x) {
    return upper ? target - CenteredSurvival(x) : CenteredCdf(x) - target;
  };

  const double span = cdf[hi_index] - cdf[hi_index - 1];
  double x = span > 0.0 ? lo + (hi - lo) * (u - cdf[hi_index - 1]) / span
                        : 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double r = residual(x);
    if (r == 0.0) break;
    if (r > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = CenteredDensity(x);
    double next = d > 0.0 ? x - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return center_ + x;
}

Window Waveform::NominalSupport() const {
  return Window(center_ - half_width_, center_ + half_width_);
}

Window Waveform::EffectiveSupport() const {
  if (localization_ == Localization::kCompact) return NominalSupport();
  const double reach = std::max(half_width_, kTailSigmas * sigma_);
  return Window(center_ - reach, center_ + reach);
}

Waveform Waveform::Translated(double delta) const {
  Waveform copy = *this;
  copy.center_ += delta;
  return copy;
}

double InnerProduct(const Waveform& a, const Waveform& b) {
  const Window sa = a.EffectiveSupport();
  const Window sb = b.EffectiveSupport();
  const double lo = std::max(sa.lo(), sb.lo());
  const double hi = std::min(sa.hi(), sb.hi());
  if (!(hi > lo)) return 0.0;
  const double width = (hi - lo) / kGlPanels;
  double sum = 0.0;
  for (int p = 0; p < kGlPanels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      const double dx = half * kGlNodes[i];
      panel += kGlWeights[i] * (a.Amplitude(mid - dx) * b.Amplitude(mid - dx) +
                                a.Amplitude(mid + dx) * b.Amplitude(mid + dx));
    }
    sum += panel * half;
  }
  return sum;
}

StretchedState::StretchedState(const Waveform& profile, double separation,
                               Bit internal_bit, double translation)
    : front_(profile.Translated(translation - profile.center())),
      rear_(profile.Translated(translation + separation - profile.center())),
      separation_(separation),
      internal_bit_(internal_bit),
      translation_(translation) {
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw PreconditionError("hump separation must be positive and finite");
  }
  if (profile.localization() == Localization::kCompact &&
      !(separation > 2.0 * profile.half_width())) {
    throw PreconditionError(
        "compact humps overlap: separation must exceed twice the half width");
  }
}

double StretchedState::Density(double tau) const {
  return 0.5 * (front_.Density(tau) + rear_.Density(tau));
}

bool StretchedState::InNominalRegion(double tau) const {
  const auto inside = [tau](const Window& w) {
    return tau >= w.lo() && tau <= w.hi();
  };
  return inside(FrontInterval()) || inside(RearInterval());
}

double StretchedState::SampleTime(RngStream& rng) const {
  const Waveform& hump = Uniform01(rng) < 0.5 ? front_ : rear_;
  return hump.Quantile(Uniform01(rng));
}

StretchedState StretchedState::WithBit(Bit bit) const {
  StretchedState copy = *this;
  copy.internal_bit_ = bit;
  return copy;
}

double WindowMass(const StretchedState& state, const Window& window) {
  return 0.5 * (state.front().Mass(window) + state.rear().Mass(window));
}

StretchedState Translate(const StretchedState& state, double delta) {
  return StretchedState(state.front(), state.separation(),
                        state.internal_bit(), state.translation() + delta);
}

DelayedState::DelayedState(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw PreconditionError("delayed state needs at least one component");
  }
  double norm2 = 0.0;
  for (const auto& ci : components_) {
    for (const auto& cj : components_) {
      norm2 += ci.amplitude * cj.amplitude *
               InnerProduct(ci.waveform, cj.waveform);
    }
  }
  if (!(norm2 > 0.0)) {
    throw PreconditionError("delayed state has zero norm");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& c : components_) c.amplitude *= scale;
}

DelayedState DelayedState::Single(const Waveform& waveform) {
  return DelayedState({Component{waveform, 1.0}});
}

DelayedState DelayedState::RearHumpOf(const StretchedState& honest) {
  return Single(honest.rear());
}

double DelayedState::SampleTime(RngStream& rng) const {
  double total = 0.0;
  for (const auto& c : components_) total += c.amplitude * c.amplitude;
  double u = Uniform01(rng) * total;
  const Component* chosen = &components_.back();
  for (const auto& c : components_) {
    u -= c.amplitude * c.amplitude;
    if (u < 0.0) {
      chosen = &c;
      break;
    }
  }
  return chosen->waveform.Quantile(Uniform01(rng));
}

double DelayedOverlap(const DelayedState& delayed,
                      const StretchedState& honest) {
  const Window front = honest.FrontInterval();
  for (const auto& c : delayed.components()) {
    if (c.waveform.NominalSupport().Overlaps(front)) {
      throw PreconditionError("support covers front hump");
    }
  }
  double amplitude = 0.0;
  for (const auto& c : delayed.components()) {
    amplitude += c.amplitude * (InnerProduct(honest.front(), c.waveform) +
                                InnerProduct(honest.rear(), c.waveform));
  }
  amplitude /= std::numbers::sqrt2;
  return amplitude * amplitude;
}

}  // namespace rqp
