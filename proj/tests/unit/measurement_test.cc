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

#include "rqp/measurement.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "oracles.h"
#include "rqp/errors.h"
#include "rqp/rng.h"

namespace rqp {
namespace {

StretchedState CompactState(Bit bit) {
  return StretchedState(Waveform::CompactBump(1.0), 8.0, bit);
}

TEST(DetectionRecordTest, SilentHasNoFireTime) {
  EXPECT_FALSE(DetectionRecord::Silent().fire_time().has_value());
  EXPECT_FALSE(DetectionRecord::Silent().fired());
  EXPECT_THROW(DetectionRecord::Fired(Channel::kSilent, 1.0), PreconditionError);
  EXPECT_EQ(DetectionRecord::Fired(Channel::kPerp, 2.0).fire_time(), 2.0);
}

TEST(DetectionRecordTest, RecordAtAppliesTheHorizon) {
  const Outcome o{3.0, Channel::kOne};
  EXPECT_EQ(RecordAt(o, 2.9), DetectionRecord::Silent());
  EXPECT_EQ(RecordAt(o, 3.0), DetectionRecord::Fired(Channel::kOne, 3.0));
}

TEST(SampleDetectionTest, FullAccessAlwaysFiresInTheHonestChannel) {
  RngStream rng = MakeStream(21, {});
  for (Bit bit : {Bit::kZero, Bit::kOne}) {
    const StretchedState s = CompactState(bit);
    for (int i = 0; i < 20000; ++i) {
      const DetectionRecord r = SampleDetection(s, 9.0, rng);
      ASSERT_EQ(r.channel(), ChannelFor(bit));
    }
  }
}

TEST(SampleDetectionTest, HalfAccessFiresHalfTheTime) {
  RngStream rng = MakeStream(22, {});
  const StretchedState s = CompactState(Bit::kOne);
  for (double horizon : {1.0, 4.0, 7.0}) {
    const int n = 40000;
    int fired = 0;
    for (int i = 0; i < n; ++i) {
      const DetectionRecord r = SampleDetection(s, horizon, rng);
      if (r.fired()) {
        ++fired;
        ASSERT_EQ(r.channel(), Channel::kOne);
        ASSERT_LE(*r.fire_time(), horizon);
      }
    }
    EXPECT_LE(std::abs(oracle::BinomialZ(fired, n, 0.5)), 3.0) << horizon;
  }
}

TEST(SampleDetectionTest, BelowBothSupportsIsAlwaysSilent) {
  RngStream rng = MakeStream(23, {});
  const StretchedState s = CompactState(Bit::kZero);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_FALSE(SampleDetection(s, -1.0, rng).fired());
  }
}

TEST(SampleDetectionTest, TailedFullAccessFiresInTheNominalRegion) {
  RngStream rng = MakeStream(24, {});
  for (double xi : {1.0, 2.0, 4.0}) {
    const StretchedState s(Waveform::Tailed(1.0, xi), 8.0, Bit::kZero);
    const int n = 60000;
    int honest = 0;
    for (int i = 0; i < n; ++i) {
      const Outcome o = SampleOutcome(s, rng);
      if (o.channel == Channel::kZero && o.fire_time <= 9.0) ++honest;
      if (o.channel == Channel::kZero) ASSERT_TRUE(s.InNominalRegion(o.fire_time));
      if (o.channel == Channel::kPerp) ASSERT_FALSE(s.InNominalRegion(o.fire_time));
    }
    EXPECT_LE(std::abs(oracle::BinomialZ(honest, n, 1.0 - std::exp(-xi))), 3.0)
        << xi;
  }
}

TEST(VerifyOutcomeTest, MatchesAnnouncedChannelOnly) {
  EXPECT_EQ(VerifyOutcome(Bit::kZero, DetectionRecord::Fired(Channel::kZero, 0)),
            Verification::kConsistent);
  EXPECT_EQ(VerifyOutcome(Bit::kZero, DetectionRecord::Fired(Channel::kOne, 0)),
            Verification::kDiscrepant);
  EXPECT_EQ(VerifyOutcome(Bit::kOne, DetectionRecord::Fired(Channel::kPerp, 0)),
            Verification::kDiscrepant);
  EXPECT_EQ(VerifyOutcome(Bit::kOne, DetectionRecord::Silent()),
            Verification::kDiscrepant);
}

TEST(CheatDetectionTest, RearHumpPassesHalfTheTime) {
  RngStream rng = MakeStream(25, {});
  const StretchedState honest = CompactState(Bit::kOne);
  const DelayedState late = DelayedState::RearHumpOf(honest);
  const int n = 40000;
  int pass = 0;
  for (int i = 0; i < n; ++i) {
    const DetectionRecord r = SampleCheatDetection(late, honest, rng);
    ASSERT_TRUE(r.channel() == Channel::kOne || r.channel() == Channel::kPerp);
    ASSERT_TRUE(honest.RearInterval().Contains(*r.fire_time()));
    if (r.channel() == Channel::kOne) ++pass;
  }
  EXPECT_LE(std::abs(oracle::BinomialZ(pass, n, 0.5)), 3.0);
}

TEST(CheatDetectionTest, IndependentDelayedStatesAllPassRarely) {
  RngStream rng = MakeStream(26, {});
  const StretchedState honest = CompactState(Bit::kZero);
  const DelayedState late = DelayedState::RearHumpOf(honest);
  const int k = 4;
  const int n = 40000;
  int all_pass = 0;
  for (int i = 0; i < n; ++i) {
    bool ok = true;
    for (int j = 0; j < k; ++j) {
      ok &= SampleCheatDetection(late, honest, rng).channel() == Channel::kZero;
    }
    all_pass += ok ? 1 : 0;
  }
  EXPECT_LE(std::abs(oracle::BinomialZ(all_pass, n, std::ldexp(1.0, -k))), 3.0);
}

TEST(CheatDetectionTest, ZeroOverlapAlwaysLandsInPerp) {
  RngStream rng = MakeStream(27, {});
  const StretchedState honest = CompactState(Bit::kZero);
  const DelayedState far = DelayedState::Single(Waveform::CompactBump(1.0, 30.0));
  for (int i = 0; i < 5000; ++i) {
    ASSERT_EQ(SampleCheatDetection(far, honest, rng).channel(), Channel::kPerp);
  }
}

TEST(CheatDetectionTest, FrontSupportPropagatesThePrecondition) {
  RngStream rng = MakeStream(28, {});
  const StretchedState honest = CompactState(Bit::kZero);
  const DelayedState bad = DelayedState::Single(Waveform::CompactBump(1.0));
  EXPECT_THROW(SampleCheatDetection(bad, honest, rng), PreconditionError);
}

// Projector onto the unit vector at angle theta.
Eigen::MatrixXd RayProjector(double theta) {
  Eigen::Vector2d v(std::cos(theta), std::sin(theta));
  return v * v.transpose();
}

// Error of deciding "0" on projector p: pi0 Tr(rho0 (1 - p)) + pi1 Tr(rho1 p).
double DecisionError(const PriorPair& prior, const Eigen::MatrixXd& rho0,
                     const Eigen::MatrixXd& rho1, const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  return prior.zero() * (rho0 * (id - p)).trace() +
         prior.one() * (rho1 * p).trace();
}

// Brute-force minimum over projective measurements of a real qubit: the
// trivial projectors plus rank-one rays on a fine angle grid, refined by
// golden-section search around the best grid point.
double BruteForceError(const PriorPair& prior, const Eigen::MatrixXd& rho0,
                       const Eigen::MatrixXd& rho1) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  double best = std::min(DecisionError(prior, rho0, rho1, Eigen::MatrixXd::Zero(2, 2)),
                         DecisionError(prior, rho0, rho1, id));
  const int grid = 4000;
  double best_theta = 0.0;
  double best_ray = INFINITY;
  for (int i = 0; i < grid; ++i) {
    const double theta = std::numbers::pi * i / grid;
    const double e = DecisionError(prior, rho0, rho1, RayProjector(theta));
    if (e < best_ray) {
      best_ray = e;
      best_theta = theta;
    }
  }
  double lo = best_theta - std::numbers::pi / grid;
  double hi = best_theta + std::numbers::pi / grid;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (DecisionError(prior, rho0, rho1, RayProjector(a)) <
        DecisionError(prior, rho0, rho1, RayProjector(b))) {
      hi = b;
    } else {
      lo = a;
    }
  }
  best_ray = std::min(best_ray,
                      DecisionError(prior, rho0, rho1, RayProjector(0.5 * (lo + hi))));
  return std::min(best, best_ray);
}

Eigen::MatrixXd RandomDensity(RngStream& rng) {
  // Convex mix of two random pure real states.
  const double a = std::numbers::pi * Uniform01(rng);
  const double b = std::numbers::pi * Uniform01(rng);
  const double w = Uniform01(rng);
  return w * RayProjector(a) + (1.0 - w) * RayProjector(b);
}

TEST(HelstromTest, MatchesBruteForceProjectorSearch) {
  RngStream rng = MakeStream(29, {});
  for (int trial = 0; trial < 100; ++trial) {
    const double p0 = Uniform01(rng);
    const PriorPair prior(p0, 1.0 - p0);
    const Eigen::MatrixXd rho0 = RandomDensity(rng);
    const Eigen::MatrixXd rho1 = RandomDensity(rng);
    const double mass = Uniform01(rng);
    const HelstromResult r = HelstromError(
        prior, GammaOperator::FromEnsemble(prior, rho0, rho1), mass);
    EXPECT_NEAR(r.error, mass * BruteForceError(prior, rho0, rho1), 1e-6);
    EXPECT_NEAR(r.error, mass * DecisionError(prior, rho0, rho1, r.decide_zero),
                1e-12);
  }
}

TEST(HelstromTest, OrthogonalStatesGiveExactlyZero) {
  Eigen::MatrixXd e0 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  for (double mass : {0.0, 0.3, 1.0}) {
    const PriorPair prior = PriorPair::Uniform();
    const HelstromResult r =
        HelstromError(prior, GammaOperator::FromEnsemble(prior, e0, e1), mass);
    EXPECT_EQ(r.error, 0.0);
  }
}

TEST(HelstromTest, IdenticalStatesForceAGuess) {
  const PriorPair prior = PriorPair::Uniform();
  const Eigen::MatrixXd rho = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  const HelstromResult r =
      HelstromError(prior, GammaOperator::FromEnsemble(prior, rho, rho), 0.6);
  EXPECT_NEAR(r.error, 0.3, 1e-15);
}

TEST(HelstromTest, DiagonalGammaDecidesZeroOnTheNegativeDirection) {
  const PriorPair prior = PriorPair::Uniform();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
  g(0, 0) = prior.one();
  g(1, 1) = -prior.zero();
  const HelstromResult r = HelstromError(prior, GammaOperator(g), 1.0);
  EXPECT_NEAR(r.eigenvalues.minCoeff(), -0.5, 1e-15);
  EXPECT_NEAR(r.decide_zero(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(r.decide_zero(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(r.error, 0.0, 1e-15);
}

TEST(HelstromTest, LargerSpacesMatchTheSpectralFormula) {
  // 3x3 diagonal ensemble: optimal error is the sum of elementwise minima.
  Eigen::MatrixXd r0 = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXd r1 = Eigen::MatrixXd::Zero(3, 3);
  r0.diagonal() << 0.5, 0.3, 0.2;
  r1.diagonal() << 0.1, 0.3, 0.6;
  const PriorPair prior(0.4, 0.6);
  const HelstromResult r =
      HelstromError(prior, GammaOperator::FromEnsemble(prior, r0, r1), 1.0);
  double oracle = 0.0;
  for (int i = 0; i < 3; ++i) {
    oracle += std::min(0.4 * r0(i, i), 0.6 * r1(i, i));
  }
  EXPECT_NEAR(r.error, oracle, 1e-12);
}

TEST(HelstromTest, RejectsNonSymmetricInput) {
  Eigen::MatrixXd g(2, 2);
  g << 0.1, 0.2, 0.3, -0.1;
  EXPECT_THROW(GammaOperator{g}, PreconditionError);
  EXPECT_THROW(GammaOperator(Eigen::MatrixXd::Zero(2, 3)), PreconditionError);
  EXPECT_THROW(PriorPair(0.7, 0.7), PreconditionError);
}

TEST(CompositeErrorTest, Examples) {
  EXPECT_DOUBLE_EQ(CompositeError(0.5, 0.0, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(1.0 - CompositeError(0.5, 0.0, 0.5), 0.75);
  EXPECT_DOUBLE_EQ(CompositeError(1.0, 0.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(CompositeError(0.0, 0.3, 0.5), 0.5);
  EXPECT_THROW(CompositeError(1.5, 0.0, 0.5), PreconditionError);
}

TEST(CompositeErrorTest, HalfAccessIdentificationMatchesHelstrom) {
  // Fired: orthogonal internal states, error 0. Silent: nothing to
  // measure, error 1/2. The fired mass is the accessible window mass.
  const StretchedState s = CompactState(Bit::kZero);
  const double p_fire = WindowMass(s, Window::UpTo(5.0));
  Eigen::MatrixXd e0 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  const PriorPair prior = PriorPair::Uniform();
  const double fired =
      HelstromError(prior, GammaOperator::FromEnsemble(prior, e0, e1), 1.0).error;
  EXPECT_NEAR(CompositeError(p_fire, fired, 0.5), 0.25, 1e-15);
}

}  // namespace
}  // namespace rqp
