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

#include "rqp/errors.h"

namespace rqp {
namespace {

constexpr double kSymmetryTolerance = 1e-12;

void RequireProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

std::string_view ChannelName(Channel channel) {
  switch (channel) {
    case Channel::kZero:
      return "0";
    case Channel::kOne:
      return "1";
    case Channel::kPerp:
      return "perp";
    case Channel::kSilent:
      return "silent";
  }
  return "?";
}

DetectionRecord DetectionRecord::Fired(Channel channel, double fire_time) {
  if (channel == Channel::kSilent) {
    throw PreconditionError("a fired record needs a non-silent channel");
  }
  return DetectionRecord(channel, fire_time);
}

DetectionRecord RecordAt(const Outcome& outcome, double horizon) {
  if (outcome.fire_time > horizon) return DetectionRecord::Silent();
  return DetectionRecord::Fired(outcome.channel, outcome.fire_time);
}

Outcome SampleOutcome(const StretchedState& state, RngStream& rng) {
  const double tau = state.SampleTime(rng);
  Channel channel = ChannelFor(state.internal_bit());
  if (state.localization() == Localization::kTailed &&
      !state.InNominalRegion(tau)) {
    channel = Channel::kPerp;
  }
  return Outcome{tau, channel};
}

DetectionRecord SampleDetection(const StretchedState& state, double horizon,
                                RngStream& rng) {
  return RecordAt(SampleOutcome(state, rng), horizon);
}

Verification VerifyOutcome(Bit announced_bit, const DetectionRecord& record) {
  return record.channel() == ChannelFor(announced_bit)
             ? Verification::kConsistent
             : Verification::kDiscrepant;
}

Outcome SampleCheatOutcome(const DelayedState& delayed,
                           const StretchedState& honest_profile,
                           RngStream& rng) {
  return SampleCheatOutcome(delayed, DelayedOverlap(delayed, honest_profile),
                            honest_profile.internal_bit(), rng);
}

Outcome SampleCheatOutcome(const DelayedState& delayed, double pass_probability,
                           Bit honest_bit, RngStream& rng) {
  if (!(pass_probability >= 0.0 && pass_probability <= 1.0)) {
    throw PreconditionError("pass probability must lie in [0, 1]");
  }
  const bool honest_channel = Bernoulli(rng, pass_probability);
  const double tau = delayed.SampleTime(rng);
  return Outcome{tau, honest_channel ? ChannelFor(honest_bit) : Channel::kPerp};
}

DetectionRecord SampleCheatDetection(const DelayedState& delayed,
                                     const StretchedState& honest_profile,
                                     RngStream& rng) {
  const Outcome o = SampleCheatOutcome(delayed, honest_profile, rng);
  return DetectionRecord::Fired(o.channel, o.fire_time);
}

PriorPair::PriorPair(double zero, double one) : zero_(zero), one_(one) {
  if (!(zero >= 0.0 && one >= 0.0) || std::abs(zero + one - 1.0) > 1e-12) {
    throw PreconditionError("priors must be non-negative and sum to 1");
  }
}

GammaOperator::GammaOperator(Eigen::MatrixXd internal, double spatial_mass)
    : internal_(std::move(internal)), spatial_mass_(spatial_mass) {
  if (internal_.rows() != internal_.cols() || internal_.rows() == 0) {
    throw PreconditionError("gamma operator must be a non-empty square matrix");
  }
  const double scale = std::max(1.0, internal_.cwiseAbs().maxCoeff());
  if ((internal_ - internal_.transpose()).cwiseAbs().maxCoeff() >
      kSymmetryTolerance * scale) {
    throw PreconditionError("gamma operator is not Hermitian");
  }
}

GammaOperator GammaOperator::FromEnsemble(const PriorPair& prior,
                                          const Eigen::MatrixXd& rho_zero,
                                          const Eigen::MatrixXd& rho_one,
                                          double spatial_mass) {
  if (rho_zero.rows() != rho_one.rows() || rho_zero.cols() != rho_one.cols()) {
    throw PreconditionError("density matrices differ in dimension");
  }
  return GammaOperator(prior.one() * rho_one - prior.zero() * rho_zero,
                       spatial_mass);
}

HelstromResult HelstromError(const PriorPair& prior, const GammaOperator& gamma,
                             double accessible_mass) {
  RequireProbability(accessible_mass, "accessible mass");
  const Eigen::MatrixXd& m = gamma.internal();
  const Eigen::Index d = m.rows();

  Eigen::VectorXd values(d);
  Eigen::MatrixXd vectors(d, d);
  if (d == 2) {
    // Closed form for a real symmetric 2x2 matrix.
    const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    values << mean - radius, mean + radius;
    // Rotation angle diagonalizing [[a, b], [b, c]].
    const double theta = 0.5 * std::atan2(2.0 * b, a - c);
    // Eigenvector for mean + radius is (cos, sin); the other is orthogonal.
    vectors << -std::sin(theta), std::cos(theta), std::cos(theta),
        std::sin(theta);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  const double tolerance = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  double negative_sum = 0.0;
  Eigen::MatrixXd projector = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (values(i) <= 0.0) negative_sum += values(i);
    if (values(i) < -tolerance) {
      projector += vectors.col(i) * vectors.col(i).transpose();
    }
  }
  double error = accessible_mass * (prior.zero() + negative_sum);
  if (std::abs(error) < tolerance) error = 0.0;
  return HelstromResult{error, projector, values};
}

double CompositeError(double p_fire, double pe_fired, double pe_silent) {
  RequireProbability(p_fire, "fire probability");
  RequireProbability(pe_fired, "fired-branch error");
  RequireProbability(pe_silent, "silent-branch error");
  return pe_silent * (1.0 - p_fire) + pe_fired * p_fire;
}

}  // namespace rqp
