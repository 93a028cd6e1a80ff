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

#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace rqp {
namespace {

using nlohmann::json;

std::vector<json> ParseLines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(json::parse(line));
  return out;
}

// A clean bit-commitment-shaped transcript with channel length 2.
Transcript CleanTranscript() {
  Transcript t;
  t.Append(-1.0, Actor::kA, EmissionEvent{0});
  t.Append(-1.0, Actor::kA, EmissionEvent{1});
  t.Append(2.5, Actor::kB, DetectionEvent{0, Channel::kOne, 0.5});
  t.Append(7.0, Actor::kB, GuessEvent{Bit::kOne, 0.75, {0}});
  t.Append(7.0, Actor::kB, DisclosureRequestEvent{});
  t.Append(7.0, Actor::kA,
           DisclosureEvent{1, {{0, Bit::kOne, 0}, {1, Bit::kZero, 1}}});
  t.Append(9.8, Actor::kB, DetectionEvent{1, Channel::kZero, 7.8});
  t.Append(11.0, Actor::kB, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  t.Finalize();
  return t;
}

TEST(VerdictTest, Codes) {
  EXPECT_EQ(Verdict::Accepted(Bit::kOne).Code(), "ACCEPTED:1");
  EXPECT_EQ(Verdict::Aborted(3, AbortReason::kPerpOutcome, Actor::kB).Code(),
            "ABORTED:3:PERP_OUTCOME");
  EXPECT_EQ(Verdict::Aborted(0, AbortReason::kSilentAtFullAccess, Actor::kA).Code(),
            "ABORTED:0:SILENT_AT_FULL_ACCESS");
  const Verdict w = Verdict::Accepted(Bit::kZero, Actor::kA);
  EXPECT_EQ(w.winner(), Actor::kA);
  EXPECT_TRUE(w.accepted());
}

TEST(TranscriptTest, FinalizeOrdersByTimeThenInsertion) {
  Transcript t;
  t.Append(2.0, Actor::kA, EmissionEvent{0});
  t.Append(1.0, Actor::kA, EmissionEvent{1});
  t.Append(1.0, Actor::kA, EmissionEvent{2});
  t.Finalize();
  ASSERT_EQ(t.events().size(), 3u);
  EXPECT_EQ(std::get<EmissionEvent>(t.events()[0].payload).channel, 1);
  EXPECT_EQ(std::get<EmissionEvent>(t.events()[1].payload).channel, 2);
  EXPECT_EQ(std::get<EmissionEvent>(t.events()[2].payload).channel, 0);
}

TEST(TranscriptTest, JsonLinesFollowTheSchema) {
  const std::vector<json> lines = ParseLines(CleanTranscript().ToJsonLines());
  ASSERT_EQ(lines.size(), 8u);
  for (const json& l : lines) {
    ASSERT_TRUE(l.contains("t"));
    ASSERT_TRUE(l.contains("actor"));
    ASSERT_TRUE(l.contains("kind"));
    ASSERT_TRUE(l.contains("payload"));
    EXPECT_EQ(l.size(), 4u);
  }
  EXPECT_EQ(lines[0]["kind"], "emit");
  EXPECT_EQ(lines[0]["payload"]["delayed"], false);
  EXPECT_EQ(lines[2]["kind"], "detect");
  EXPECT_EQ(lines[2]["payload"]["outcome"], "1");
  EXPECT_EQ(lines[2]["payload"]["fire_time"], 0.5);
  EXPECT_EQ(lines[3]["kind"], "guess");
  EXPECT_EQ(lines[3]["payload"]["channels_used"], json::array({0}));
  EXPECT_EQ(lines[4]["kind"], "request");
  EXPECT_EQ(lines[5]["kind"], "disclose");
  EXPECT_EQ(lines[5]["payload"]["entries"][1]["block"], 1);
  EXPECT_EQ(lines[7]["kind"], "verdict");
  EXPECT_EQ(lines[7]["actor"], "B");
  EXPECT_EQ(lines[7]["payload"]["code"], "ACCEPTED:1");
  // Key order is stable: t, actor, kind, payload.
  const std::string first = CleanTranscript().ToJsonLines().substr(0, 6);
  EXPECT_EQ(first, "{\"t\":-");
}

TEST(AuditTest, CleanTranscriptPasses) {
  EXPECT_TRUE(AuditTranscript(CleanTranscript(), 2.0).empty());
}

TEST(AuditTest, DetectsObservationOffTheLightCone) {
  const auto v = AuditTranscript(CleanTranscript(), 1.0);
  EXPECT_FALSE(v.empty());
}

TEST(AuditTest, DetectsGuessUsingFutureOutcomes) {
  Transcript t;
  t.Append(1.0, Actor::kB, DetectionEvent{0, Channel::kZero, 1.0});
  t.Append(2.0, Actor::kB, GuessEvent{Bit::kZero, 0.6, {0, 1}});
  t.Append(3.0, Actor::kB, DetectionEvent{1, Channel::kOne, 3.0});
  t.Append(4.0, Actor::kB, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  t.Finalize();
  EXPECT_EQ(AuditTranscript(t, 0.0).size(), 1u);
}

TEST(AuditTest, DetectsGuessIgnoringAvailableOutcomes) {
  Transcript t;
  t.Append(1.0, Actor::kB, DetectionEvent{0, Channel::kZero, 1.0});
  t.Append(2.0, Actor::kB, GuessEvent{Bit::kZero, 0.5, {}});
  t.Append(4.0, Actor::kB, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  t.Finalize();
  EXPECT_EQ(AuditTranscript(t, 0.0).size(), 1u);
}

TEST(AuditTest, OtherActorsOutcomesDoNotCount) {
  Transcript t;
  t.Append(1.0, Actor::kA, DetectionEvent{0, Channel::kZero, 1.0});
  t.Append(2.0, Actor::kB, GuessEvent{Bit::kZero, 0.5, {}});
  t.Append(4.0, Actor::kB, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  t.Finalize();
  EXPECT_TRUE(AuditTranscript(t, 0.0).empty());
}

TEST(AuditTest, DetectsBadDisclosureOrdering) {
  Transcript t;
  t.Append(1.0, Actor::kA, DisclosureEvent{1, {}});
  t.Append(1.0, Actor::kA, DisclosureEvent{2, {}});
  t.Append(1.0, Actor::kB, DisclosureEvent{4, {}});
  t.Append(2.0, Actor::kSystem, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  t.Finalize();
  EXPECT_EQ(AuditTranscript(t, 0.0).size(), 2u);
}

TEST(AuditTest, RequiresExactlyOneFinalVerdict) {
  Transcript none;
  none.Append(0.0, Actor::kA, EmissionEvent{0});
  none.Finalize();
  EXPECT_EQ(AuditTranscript(none, 0.0).size(), 1u);

  Transcript late;
  late.Append(0.0, Actor::kB, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  late.Append(1.0, Actor::kA, EmissionEvent{0});
  late.Finalize();
  EXPECT_EQ(AuditTranscript(late, 0.0).size(), 1u);
}

TEST(AuditTest, DetectsUnsortedTimestamps) {
  Transcript t;
  t.Append(2.0, Actor::kA, EmissionEvent{0});
  t.Append(1.0, Actor::kA, EmissionEvent{1});
  t.Append(3.0, Actor::kB, VerdictEvent{Verdict::Accepted(Bit::kOne)});
  // Not finalized on purpose.
  EXPECT_EQ(AuditTranscript(t, 0.0).size(), 1u);
}

}  // namespace
}  // namespace rqp
