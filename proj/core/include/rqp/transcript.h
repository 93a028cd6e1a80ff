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

#ifndef RQP_TRANSCRIPT_H_
#define RQP_TRANSCRIPT_H_

// Ordered event log of one protocol run and its final verdict.
//
// Serialized as JSON lines, one object per event:
//   {"t": <wall time>, "actor": "A"|"B"|"system", "kind": <kind>,
//    "payload": {...}}
// The field-by-field schema lives in docs/transcript.md.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rqp/measurement.h"
#include "rqp/wavepacket.h"

namespace rqp {

enum class Actor { kA, kB, kSystem };
std::string_view ActorName(Actor actor);

enum class AbortReason {
  kWrongChannel,
  kPerpOutcome,
  kSilentAtFullAccess,
  kBlockMismatch,
  kInconsistentDisclosure,
};
std::string_view AbortReasonName(AbortReason reason);

class Verdict {
 public:
  static Verdict Accepted(Bit bit, std::optional<Actor> winner = std::nullopt);
  static Verdict Aborted(int channel, AbortReason reason, Actor detected_by);

  bool accepted() const { return accepted_; }
  // Meaningful only when accepted.
  Bit bit() const { return bit_; }
  std::optional<Actor> winner() const { return winner_; }
  // Meaningful only when aborted.
  int channel() const { return channel_; }
  AbortReason reason() const { return reason_; }
  Actor detected_by() const { return detected_by_; }

  // "ACCEPTED:<bit>" or "ABORTED:<channel>:<REASON>".
  std::string Code() const;

 private:
  Verdict() = default;

  bool accepted_ = false;
  Bit bit_ = Bit::kZero;
  std::optional<Actor> winner_;
  int channel_ = -1;
  AbortReason reason_ = AbortReason::kWrongChannel;
  Actor detected_by_ = Actor::kSystem;
};

// A quantum state enters channel `channel`.
struct EmissionEvent {
  int channel;
  bool delayed = false;   // late-prepared (rear hump only)
  bool mirrored = false;  // reflected peer state
};

// The actor's detector on `channel` fired. The event time is the wall time
// at which the outcome became available, fire_time + channel length.
struct DetectionEvent {
  int channel;
  Channel outcome;
  double fire_time;
};

struct DisclosureRequestEvent {};

struct DisclosureEntry {
  int channel;
  Bit bit;
  int block;
  bool operator==(const DisclosureEntry&) const = default;
};

// Classical announcement of per-channel values and block memberships.
struct DisclosureEvent {
  int phase;
  std::vector<DisclosureEntry> entries;
};

// An early parity guess and the channels whose outcomes fed it.
struct GuessEvent {
  Bit guess;
  double confidence;
  std::vector<int> channels_used;
};

struct VerdictEvent {
  Verdict verdict;
};

using EventPayload =
    std::variant<EmissionEvent, DetectionEvent, DisclosureRequestEvent,
                 DisclosureEvent, GuessEvent, VerdictEvent>;

struct Event {
  double t;
  std::uint64_t seq;
  Actor actor;
  EventPayload payload;

  std::string_view kind() const;
};

class Transcript {
 public:
  void Append(double t, Actor actor, EventPayload payload);
  // Sorts events by (t, insertion order). Called once the run completes.
  void Finalize();

  const std::vector<Event>& events() const { return events_; }

  std::string ToJsonLines() const;

 private:
  std::vector<Event> events_;
};

// Checks the causal and ordering invariants of a finished transcript:
// timestamps non-decreasing, detections observed exactly one channel length
// after their fire time, every guess a function of the fired outcomes its
// actor held at that moment, disclosure phases in increasing order and
// alternating between A and B (starting with A), exactly one verdict, last.
// Returns human-readable violations; empty means clean.
std::vector<std::string> AuditTranscript(const Transcript& transcript,
                                         double channel_length);

}  // namespace rqp

#endif  // RQP_TRANSCRIPT_H_
