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

#include "rqp/transcript.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "json.hpp"

namespace rqp {
namespace {

using json = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json VerdictJson(const Verdict& v) {
  json j;
  j["code"] = v.Code();
  j["accepted"] = v.accepted();
  if (v.accepted()) {
    j["bit"] = ToInt(v.bit());
    if (v.winner()) j["winner"] = ActorName(*v.winner());
  } else {
    j["channel"] = v.channel();
    j["reason"] = AbortReasonName(v.reason());
    j["detected_by"] = ActorName(v.detected_by());
  }
  return j;
}

json PayloadJson(const EventPayload& payload) {
  return std::visit(
      Overloaded{
          [](const EmissionEvent& e) {
            return json{{"channel", e.channel},
                        {"delayed", e.delayed},
                        {"mirrored", e.mirrored}};
          },
          [](const DetectionEvent& e) {
            return json{{"channel", e.channel},
                        {"outcome", ChannelName(e.outcome)},
                        {"fire_time", e.fire_time}};
          },
          [](const DisclosureRequestEvent&) { return json::object(); },
          [](const DisclosureEvent& e) {
            json entries = json::array();
            for (const auto& entry : e.entries) {
              entries.push_back({{"channel", entry.channel},
                                 {"bit", ToInt(entry.bit)},
                                 {"block", entry.block}});
            }
            return json{{"phase", e.phase}, {"entries", std::move(entries)}};
          },
          [](const GuessEvent& e) {
            return json{{"guess", ToInt(e.guess)},
                        {"confidence", e.confidence},
                        {"channels_used", e.channels_used}};
          },
          [](const VerdictEvent& e) { return VerdictJson(e.verdict); },
      },
      payload);
}

}  // namespace

std::string_view ActorName(Actor actor) {
  switch (actor) {
    case Actor::kA:
      return "A";
    case Actor::kB:
      return "B";
    case Actor::kSystem:
      return "system";
  }
  return "?";
}

std::string_view AbortReasonName(AbortReason reason) {
  switch (reason) {
    case AbortReason::kWrongChannel:
      return "WRONG_CHANNEL";
    case AbortReason::kPerpOutcome:
      return "PERP_OUTCOME";
    case AbortReason::kSilentAtFullAccess:
      return "SILENT_AT_FULL_ACCESS";
    case AbortReason::kBlockMismatch:
      return "BLOCK_MISMATCH";
    case AbortReason::kInconsistentDisclosure:
      return "INCONSISTENT_DISCLOSURE";
  }
  return "?";
}

Verdict Verdict::Accepted(Bit bit, std::optional<Actor> winner) {
  Verdict v;
  v.accepted_ = true;
  v.bit_ = bit;
  v.winner_ = winner;
  return v;
}

Verdict Verdict::Aborted(int channel, AbortReason reason, Actor detected_by) {
  Verdict v;
  v.accepted_ = false;
  v.channel_ = channel;
  v.reason_ = reason;
  v.detected_by_ = detected_by;
  return v;
}

std::string Verdict::Code() const {
  if (accepted_) return "ACCEPTED:" + std::to_string(ToInt(bit_));
  return "ABORTED:" + std::to_string(channel_) + ":" +
         std::string(AbortReasonName(reason_));
}

std::string_view Event::kind() const {
  return std::visit(
      Overloaded{
          [](const EmissionEvent&) { return std::string_view("emit"); },
          [](const DetectionEvent&) { return std::string_view("detect"); },
          [](const DisclosureRequestEvent&) {
            return std::string_view("request");
          },
          [](const DisclosureEvent&) { return std::string_view("disclose"); },
          [](const GuessEvent&) { return std::string_view("guess"); },
          [](const VerdictEvent&) { return std::string_view("verdict"); },
      },
      payload);
}

void Transcript::Append(double t, Actor actor, EventPayload payload) {
  events_.push_back(Event{t, events_.size(), actor, std::move(payload)});
}

void Transcript::Finalize() {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) {
                     if (a.t != b.t) return a.t < b.t;
                     return a.seq < b.seq;
                   });
}

std::string Transcript::ToJsonLines() const {
  std::string out;
  for (const Event& e : events_) {
    json line;
    line["t"] = e.t;
    line["actor"] = ActorName(e.actor);
    line["kind"] = e.kind();
    line["payload"] = PayloadJson(e.payload);
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> AuditTranscript(const Transcript& transcript,
                                         double channel_length) {
  std::vector<std::string> violations;
  const auto& events = transcript.events();

  // (actor, channel) -> observation time of a fired 0/1 outcome
  std::vector<std::pair<std::pair<Actor, int>, double>> observed;
  int verdicts = 0;
  int last_phase = 0;
  std::optional<Actor> last_discloser;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (i > 0 && e.t < events[i - 1].t) {
      violations.push_back("event " + std::to_string(i) + " out of time order");
    }
    if (verdicts > 0) {
      violations.push_back("event after verdict at index " + std::to_string(i));
    }
    if (const auto* d = std::get_if<DetectionEvent>(&e.payload)) {
      const double expected = d->fire_time + channel_length;
      if (std::abs(e.t - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
        violations.push_back("detection on channel " +
                             std::to_string(d->channel) +
                             " observed off the light cone");
      }
      if (d->outcome == Channel::kZero || d->outcome == Channel::kOne) {
        observed.push_back({{e.actor, d->channel}, e.t});
      }
    } else if (const auto* g = std::get_if<GuessEvent>(&e.payload)) {
      std::set<int> available;
      for (const auto& [key, t] : observed) {
        if (key.first == e.actor && t <= e.t) available.insert(key.second);
      }
      const std::set<int> used(g->channels_used.begin(), g->channels_used.end());
      if (used != available) {
        violations.push_back(
            "guess at t=" + std::to_string(e.t) +
            " does not match the outcomes available before the light cone");
      }
    } else if (const auto* d = std::get_if<DisclosureEvent>(&e.payload)) {
      if (d->phase != last_phase + 1) {
        violations.push_back("disclosure phase " + std::to_string(d->phase) +
                             " out of order");
      }
      const Actor expected_actor =
          !last_discloser || *last_discloser == Actor::kB ? Actor::kA
                                                          : Actor::kB;
      if (e.actor != expected_actor) {
        violations.push_back("disclosure phase " + std::to_string(d->phase) +
                             " sent by the wrong party");
      }
      last_phase = d->phase;
      last_discloser = e.actor;
    } else if (std::holds_alternative<VerdictEvent>(e.payload)) {
      ++verdicts;
    }
  }
  if (verdicts != 1) {
    violations.push_back("expected exactly one verdict, found " +
                         std::to_string(verdicts));
  }
  return violations;
}

}  // namespace rqp
