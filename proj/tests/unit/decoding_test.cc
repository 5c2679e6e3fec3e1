// Copyright 2026 The absa-prompt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include "absa/decoding.h"
#include "doctest.h"

namespace absa {
namespace {

using Terms = std::vector<std::string>;

TEST_CASE("ParseAte splits, canonicalizes and deduplicates") {
  CHECK(ParseAte("food, menu, service, setting").terms ==
        Terms{"food", "menu", "service", "setting"});
  CHECK(ParseAte(" Battery  Life ,screen,battery life").terms ==
        Terms{"battery life", "screen"});
  CHECK(ParseAte("a,,b, ").terms == Terms{"a", "b"});
}

TEST_CASE("ParseAte sentinel handling") {
  CHECK(ParseAte("noaspectterm").terms.empty());
  CHECK(ParseAte("  NoAspectTerm ").terms.empty());
  CHECK(ParseAte("noaspectterm").anomalies.empty());
  AtePrediction mixed = ParseAte("food, noaspectterm");
  CHECK(mixed.terms == Terms{"food"});
  CHECK(mixed.anomalies.size() == 1);
  CHECK(ParseAte("").terms.empty());
  CHECK(ParseAte("", {}).anomalies.empty());
}

TEST_CASE("ParseAtsc maps labels and rejects everything else") {
  CHECK(ParseAtsc("positive").label == AtscLabel::kPositive);
  CHECK(ParseAtsc(" Negative.").label == AtscLabel::kNegative);
  CHECK(ParseAtsc("NEUTRAL\n").label == AtscLabel::kNeutral);
  CHECK(ParseAtsc("conflict").label == AtscLabel::kInvalid);
  CHECK(ParseAtsc("good").label == AtscLabel::kInvalid);
  CHECK(ParseAtsc("").label == AtscLabel::kInvalid);
  CHECK(ParseAtsc("pos itive").raw == "pos itive");
}

TEST_CASE("ParseJoint tolerates whitespace and splits at the last colon") {
  JointPrediction p = ParseJoint("cheeseburgers: positive, Glass of Wine :neutral");
  REQUIRE(p.pairs.size() == 2);
  CHECK(p.pairs[0] == TermPolarity{"cheeseburgers", Polarity::kPositive});
  CHECK(p.pairs[1] == TermPolarity{"glass of wine", Polarity::kNeutral});
  JointPrediction c = ParseJoint("ratio 16:9:positive");
  REQUIRE(c.pairs.size() == 1);
  CHECK(c.pairs[0].first == "ratio 16:9");
}

TEST_CASE("ParseJoint records malformed fragments") {
  JointPrediction p = ParseJoint("food:positive, service, menu:great, :negative");
  CHECK(p.pairs.size() == 1);
  CHECK(p.malformed_fragments == Terms{"service", "menu:great", ":negative"});
}

TEST_CASE("ParseJoint sentinel is whitespace tolerant") {
  CHECK(ParseJoint("noaspectterm:none").pairs.empty());
  CHECK(ParseJoint("noaspectterm : none").pairs.empty());
  CHECK(ParseJoint("noaspectterm : none").malformed_fragments.empty());
}

TEST_CASE("conflict is only a joint polarity when accepted") {
  CHECK(ParseJoint("food:conflict").pairs.empty());
  ParseOptions keep;
  keep.accept_conflict = true;
  CHECK(ParseJoint("food:conflict", keep).pairs.size() == 1);
}

TEST_CASE("gold sets are canonical and unique") {
  ReviewSentence s{"1", "t", Domain::kLaptops,
                   {{"Screen", Polarity::kPositive, {}},
                    {"screen", Polarity::kPositive, {}},
                    {"keys", Polarity::kConflict, {}}}};
  CHECK(GoldTermSet(s, ConflictPolicy::kDropEverywhere) == Terms{"screen"});
  CHECK(GoldTermSet(s, ConflictPolicy::kKeepForExtraction) == Terms{"screen", "keys"});
  CHECK(GoldPairSet(s, ConflictPolicy::kDropEverywhere).size() == 1);
}

TEST_CASE("prediction records round-trip") {
  std::vector<PredictionRecord> records = {
      {"a", SubtaskKind::kAte, std::nullopt, 0, "food, menu"},
      {"b", SubtaskKind::kAtsc, std::string("food"), 2, "positive"},
      {"c", SubtaskKind::kJoint, std::nullopt, 0, "x:\"quoted\"\nnewline"}};
  std::stringstream ss;
  WritePredictionsJsonl(records, ss);
  auto back = ReadPredictionsJsonl(ss, "memory");
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back[i].sentence_id == records[i].sentence_id);
    CHECK(back[i].subtask == records[i].subtask);
    CHECK(back[i].aspect == records[i].aspect);
    CHECK(back[i].sample_index == records[i].sample_index);
    CHECK(back[i].raw == records[i].raw);
  }
}

}  // namespace
}  // namespace absa
