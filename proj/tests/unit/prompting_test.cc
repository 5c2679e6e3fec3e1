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

#include "absa/corpus.h"
#include "absa/error.h"
#include "absa/prompting.h"
#include "doctest.h"
#include "testing/fixtures.h"

namespace absa {
namespace {

using testing::DataDir;
using testing::GoldenDir;
using testing::ReadFile;

const ReviewSentence& Cheeseburger() {
  static const Corpus corpus = LoadSemevalXml(
      DataDir() / "reference_examples.xml", Domain::kRestaurants, Split::kTest);
  return corpus.sentences.front();
}

ReviewSentence Sentence(std::vector<AspectAnnotation> aspects) {
  return ReviewSentence{"s", "some text", Domain::kLaptops, std::move(aspects)};
}

TEST_CASE("renderings match the hand-written goldens byte for byte") {
  const ReviewSentence& s = Cheeseburger();
  for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
    PromptConfig config = PromptConfig::Default(v);
    std::string suffix = "_" + std::string(VariantName(v)) + ".txt";
    CAPTURE(suffix);
    CHECK(RenderPrompt(config, SubtaskKind::kAte, s).input_text ==
          ReadFile(GoldenDir() / ("ate" + suffix)));
    CHECK(RenderPrompt(config, SubtaskKind::kJoint, s).input_text ==
          ReadFile(GoldenDir() / ("joint" + suffix)));
    AtscSample sample = ExpandAtsc(Corpus{Domain::kRestaurants, Split::kTest, {s}})
                            .samples.front();
    PromptedExample atsc = RenderPrompt(config, sample);
    CHECK(atsc.input_text == ReadFile(GoldenDir() / ("atsc" + suffix)));
    CHECK(atsc.target_text == "positive");
  }
}

TEST_CASE("cheeseburger targets") {
  PromptConfig config = PromptConfig::Default(PromptVariant::kV2);
  CHECK(RenderPrompt(config, SubtaskKind::kAte, Cheeseburger()).target_text ==
        "cheeseburgers");
  CHECK(RenderPrompt(config, SubtaskKind::kJoint, Cheeseburger()).target_text ==
        "cheeseburgers:positive");
}

TEST_CASE("V2 extends V1 with negative and neutral examples") {
  for (SubtaskKind k : kAllSubtasks) {
    std::string v1 = RenderInstructionBlock(PromptConfig::Default(PromptVariant::kV1), k);
    std::string v2 = RenderInstructionBlock(PromptConfig::Default(PromptVariant::kV2), k);
    CHECK(v2.size() > v1.size());
    CHECK(v1.find("seats") == std::string::npos);
    CHECK(v2.find("seats") != std::string::npos);
    CHECK(v1.ends_with("Now complete the following example-"));
  }
}

TEST_CASE("input never carries the output cue") {
  for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
    PromptConfig config = PromptConfig::Default(v);
    for (SubtaskKind k : {SubtaskKind::kAte, SubtaskKind::kJoint}) {
      std::string input = RenderPrompt(config, k, Cheeseburger()).input_text;
      CHECK_FALSE(input.ends_with("output:"));
      CHECK(input.ends_with("input: " + Cheeseburger().text));
    }
  }
}

TEST_CASE("sentence text is substituted verbatim, including braces") {
  ReviewSentence s{"b", "Weird {aspect} and {sentence} text", Domain::kLaptops, {}};
  PromptConfig config = PromptConfig::Default(PromptVariant::kV1);
  std::string input = RenderPrompt(config, SubtaskKind::kAte, s).input_text;
  CHECK(input.ends_with("input: Weird {aspect} and {sentence} text"));
}

TEST_CASE("template directory matches the embedded templates") {
  for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
    PromptConfig a = PromptConfig::Default(v);
    PromptConfig b = PromptConfig::FromDirectory(testing::TemplateDir(), v);
    for (SubtaskKind k : kAllSubtasks) {
      CHECK(RenderInstructionBlock(a, k) == RenderInstructionBlock(b, k));
    }
  }
}

TEST_CASE("ATE target renders terms, deduplicates, and uses the sentinel") {
  TargetOptions opts;
  CHECK(RenderAteTarget(Sentence({}), opts) == "noaspectterm");
  CHECK(RenderAteTarget(Sentence({{"Battery life", Polarity::kPositive, {}},
                                  {"screen", Polarity::kNegative, {}},
                                  {"battery  life", Polarity::kNegative, {}}}),
                        opts) == "Battery life, screen");
  // Conflict-only sentences render the sentinel under the default policy.
  CHECK(RenderAteTarget(Sentence({{"food", Polarity::kConflict, {}}}), opts) ==
        "noaspectterm");
  opts.conflict_policy = ConflictPolicy::kKeepForExtraction;
  CHECK(RenderAteTarget(Sentence({{"food", Polarity::kConflict, {}}}), opts) == "food");
}

TEST_CASE("joint target pairs terms with polarity words") {
  TargetOptions opts;
  CHECK(RenderJointTarget(Sentence({}), opts) == "noaspectterm:none");
  CHECK(RenderJointTarget(Sentence({{"food", Polarity::kPositive, {}},
                                    {"service", Polarity::kNeutral, {}}}),
                          opts) == "food:positive, service:neutral");
}

TEST_CASE("unrepresentable terms are rejected") {
  TargetOptions opts;
  auto code = [&](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  ReviewSentence comma = Sentence({{"salt, pepper", Polarity::kPositive, {}}});
  ReviewSentence colon = Sentence({{"ratio 16:9", Polarity::kPositive, {}}});
  CHECK(code([&] { RenderAteTarget(comma, opts); }) == ErrorCode::kUnrepresentableTerm);
  CHECK(code([&] { RenderJointTarget(comma, opts); }) == ErrorCode::kUnrepresentableTerm);
  CHECK(code([&] { RenderJointTarget(colon, opts); }) == ErrorCode::kUnrepresentableTerm);
  CHECK(RenderAteTarget(colon, opts) == "ratio 16:9");
}

TEST_CASE("BuildDataset skips unrepresentable sentences and counts conflict") {
  Corpus c = LoadSemevalXml(DataDir() / "edge_cases.xml", Domain::kRestaurants,
                            Split::kTrain);
  PromptConfig config = PromptConfig::Default(PromptVariant::kV2);
  Dataset ate = BuildDataset(config, SubtaskKind::kAte, c);
  CHECK(ate.examples.size() == 3);
  REQUIRE(ate.skipped.size() == 1);
  CHECK(ate.skipped[0].sentence_id == "e4");
  Dataset atsc = BuildDataset(config, SubtaskKind::kAtsc, c);
  CHECK(atsc.examples.size() == 5);
  CHECK(atsc.dropped_conflict == 1);
  CHECK(atsc.skipped.empty());
  CHECK(atsc.examples[3].meta.aspect == "café");
  CHECK(atsc.examples[3].meta.sample_index == 1);
}

TEST_CASE("rendering is deterministic") {
  PromptConfig config = PromptConfig::Default(PromptVariant::kV2);
  Corpus c = LoadSemevalXml(DataDir() / "laptops_sixteen.xml", Domain::kLaptops,
                            Split::kTrain);
  Dataset a = BuildDataset(config, SubtaskKind::kJoint, c);
  Dataset b = BuildDataset(config, SubtaskKind::kJoint, c);
  REQUIRE(a.examples.size() == b.examples.size());
  for (size_t i = 0; i < a.examples.size(); ++i) {
    CHECK(a.examples[i].input_text == b.examples[i].input_text);
    CHECK(a.examples[i].target_text == b.examples[i].target_text);
  }
}

TEST_CASE("prompted JSONL round-trips") {
  PromptConfig config = PromptConfig::Default(PromptVariant::kV1);
  Corpus c = LoadSemevalXml(DataDir() / "edge_cases.xml", Domain::kRestaurants,
                            Split::kTrain);
  Dataset d = BuildDataset(config, SubtaskKind::kAtsc, c);
  std::stringstream ss;
  WritePromptedJsonl(d.examples, ss);
  auto back = ReadPromptedJsonl(ss, "memory");
  REQUIRE(back.size() == d.examples.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].input_text == d.examples[i].input_text);
    CHECK(back[i].target_text == d.examples[i].target_text);
    CHECK(back[i].meta.aspect == d.examples[i].meta.aspect);
    CHECK(back[i].meta.sample_index == d.examples[i].meta.sample_index);
  }
}

TEST_CASE("template parser rejects malformed files") {
  std::string good = ReadFile(testing::TemplateDir() / "ate.tmpl");
  CHECK_NOTHROW(ParseInstructionTemplate(good, "ate.tmpl"));
  auto rejects = [](const std::string& text) {
    try {
      ParseInstructionTemplate(text, "t");
    } catch (const Error& e) {
      return e.code() == ErrorCode::kSchemaViolation;
    }
    return false;
  };
  CHECK(rejects("stray text\n@definition\nx"));
  CHECK(rejects(good + "\n@bogus\nx"));
  CHECK(rejects(good + "\n@cue\nagain"));
  CHECK(rejects(good + "\n@neutral.input\nthird"));
  std::string missing_cue = good.substr(0, good.find("@cue"));
  CHECK(rejects(missing_cue));
}

}  // namespace
}  // namespace absa
