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

#ifndef RQP_MEASUREMENT_H_
#define RQP_MEASUREMENT_H_

// Outcome model for the receiver's detectors and the minimum-error
// discrimination bookkeeping for partially accessible states.
//
// A detector in waiting mode fires at a random light-cone time tau* drawn
// from the state's density. The receiver's accessible window at any moment
// is (-inf, T]; outcomes with tau* > T have not happened yet. Each state is
// sampled once per run (an Outcome) and observed at different horizons via
// RecordAt, so records at successive horizons are mutually consistent.

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "rqp/rng.h"
#include "rqp/wavepacket.h"

namespace rqp {

enum class Channel { kZero, kOne, kPerp, kSilent };

inline constexpr Channel ChannelFor(Bit b) {
  return b == Bit::kZero ? Channel::kZero : Channel::kOne;
}
std::string_view ChannelName(Channel channel);

class DetectionRecord {
 public:
  static DetectionRecord Silent() { return DetectionRecord(Channel::kSilent, std::nullopt); }
  // Throws PreconditionError for Channel::kSilent.
  static DetectionRecord Fired(Channel channel, double fire_time);

  Channel channel() const { return channel_; }
  std::optional<double> fire_time() const { return fire_time_; }
  bool fired() const { return channel_ != Channel::kSilent; }

  bool operator==(const DetectionRecord&) const = default;

 private:
  DetectionRecord(Channel channel, std::optional<double> fire_time)
      : channel_(channel), fire_time_(fire_time) {}

  Channel channel_;
  std::optional<double> fire_time_;
};

// Where and when a detector will fire, before any horizon is applied.
struct Outcome {
  double fire_time;
  Channel channel;  // never kSilent
};

DetectionRecord RecordAt(const Outcome& outcome, double horizon);

// Honest outcome law: tau* from the two-hump density, channel equal to the
// internal bit. For tailed states an outcome outside both nominal hump
// intervals lands in the orthogonal complement (kPerp); compact states
// never do.
Outcome SampleOutcome(const StretchedState& state, RngStream& rng);

DetectionRecord SampleDetection(const StretchedState& state, double horizon,
                                RngStream& rng);

enum class Verification { kConsistent, kDiscrepant };

// Consistent iff the record fired in the announced channel. Silent records
// are Discrepant here; callers decide whether silence is expected.
Verification VerifyOutcome(Bit announced_bit, const DetectionRecord& record);

// Outcome of the verification measurement on a late-prepared state: the
// honest channel with probability DelayedOverlap (at most 1/2), otherwise
// the orthogonal complement. The honest channel is `honest_profile`'s bit.
Outcome SampleCheatOutcome(const DelayedState& delayed,
                           const StretchedState& honest_profile,
                           RngStream& rng);

// As above with the honest-channel probability already computed, for
// callers that reuse one delayed state across many channels.
Outcome SampleCheatOutcome(const DelayedState& delayed, double pass_probability,
                           Bit honest_bit, RngStream& rng);

// Same law observed at full access.
DetectionRecord SampleCheatDetection(const DelayedState& delayed,
                                     const StretchedState& honest_profile,
                                     RngStream& rng);

class PriorPair {
 public:
  // Throws PreconditionError unless both are >= 0 and sum to 1 (1e-12).
  PriorPair(double zero, double one);
  static PriorPair Uniform() { return PriorPair(0.5, 0.5); }

  double zero() const { return zero_; }
  double one() const { return one_; }

 private:
  double zero_;
  double one_;
};

// pi1 rho(1) - pi0 rho(0) on the internal space, carrying the spatial mass
// factor of the accessible window alongside.
class GammaOperator {
 public:
  // Throws PreconditionError for a non-square or non-symmetric matrix.
  explicit GammaOperator(Eigen::MatrixXd internal, double spatial_mass = 1.0);

  static GammaOperator FromEnsemble(const PriorPair& prior,
                                    const Eigen::MatrixXd& rho_zero,
                                    const Eigen::MatrixXd& rho_one,
                                    double spatial_mass = 1.0);

  const Eigen::MatrixXd& internal() const { return internal_; }
  double spatial_mass() const { return spatial_mass_; }
  double Trace() const { return internal_.trace() * spatial_mass_; }

 private:
  Eigen::MatrixXd internal_;
  double spatial_mass_;
};

struct HelstromResult {
  double error;
  // Projector onto the strictly negative eigenspace of Gamma: the "decide 0"
  // element of the optimal two-outcome measurement.
  Eigen::MatrixXd decide_zero;
  Eigen::VectorXd eigenvalues;
};

// accessible_mass * (pi0 + sum of non-positive eigenvalues of Gamma).
HelstromResult HelstromError(const PriorPair& prior, const GammaOperator& gamma,
                             double accessible_mass);

// pe_silent (1 - p_fire) + pe_fired p_fire.
double CompositeError(double p_fire, double pe_fired, double pe_silent);

}  // namespace rqp

#endif  // RQP_MEASUREMENT_H_
