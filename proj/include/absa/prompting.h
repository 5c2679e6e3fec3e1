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

#ifndef ABSA_PROMPTING_H_
#define ABSA_PROMPTING_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/corpus.h"

namespace absa {

enum class SubtaskKind { kAte, kAtsc, kJoint };

inline constexpr SubtaskKind kAllSubtasks[] = {
    SubtaskKind::kAte, SubtaskKind::kAtsc, SubtaskKind::kJoint};

std::string_view SubtaskName(SubtaskKind kind);  // "ate", "atsc", "joint"
std::optional<SubtaskKind> ParseSubtask(std::string_view s);

// V1: definition + 2 positive examples.
// V2: definition + 2 positive, 2 negative and 2 neutral examples.
enum class PromptVariant { kV1, kV2 };

std::string_view VariantName(PromptVariant v);  // "v1", "v2"
std::optional<PromptVariant> ParseVariant(std::string_view s);

struct ExamplePair {
  std::string input;
  std::string output;
};

// One subtask's instruction block as loaded from a template file.
struct InstructionPrompt {
  std::string version;
  std::string definition;
  std::vector<ExamplePair> positive_examples;
  std::vector<ExamplePair> negative_examples;
  std::vector<ExamplePair> neutral_examples;
  std::string cue;
  // Sample line with {sentence} and, for ATSC, {aspect} slots.
  std::string sample_template;
};

// Parses the '@'-directive template format shipped under templates/.
// Throws kSchemaViolation naming `source_name` on malformed input.
InstructionPrompt ParseInstructionTemplate(std::string_view text,
                                           std::string_view source_name);

struct TargetOptions {
  ConflictPolicy conflict_policy = ConflictPolicy::kDropEverywhere;
  std::string ate_empty = "noaspectterm";
  std::string joint_empty = "noaspectterm:none";
};

struct PromptConfig {
  PromptVariant variant = PromptVariant::kV2;
  std::map<SubtaskKind, InstructionPrompt> prompts;
  TargetOptions targets;

  // Templates compiled into the library from templates/*.tmpl.
  static PromptConfig Default(PromptVariant variant);
  // Reads ate.tmpl, atsc.tmpl and joint.tmpl from `dir`.
  static PromptConfig FromDirectory(const std::filesystem::path& dir,
                                    PromptVariant variant);

  const InstructionPrompt& prompt(SubtaskKind kind) const;
};

struct ExampleMeta {
  std::string sentence_id;
  SubtaskKind subtask = SubtaskKind::kAte;
  std::optional<std::string> aspect;  // ATSC only
  size_t sample_index = 0;            // ATSC: index within the sentence
};

struct PromptedExample {
  std::string input_text;
  std::string target_text;
  ExampleMeta meta;
};

// Targets. The ATE and joint renderers throw kUnrepresentableTerm when a gold
// term cannot survive the output grammar (a ',' anywhere; ':' for joint).
std::string RenderAteTarget(const ReviewSentence& sentence,
                            const TargetOptions& options = {});
std::string RenderAtscTarget(const AtscSample& sample);
std::string RenderJointTarget(const ReviewSentence& sentence,
                              const TargetOptions& options = {});

// Definition, example blocks for the configured variant, and the completion
// cue, newline-separated. Everything in a prompt except the sample line.
std::string RenderInstructionBlock(const PromptConfig& config,
                                   SubtaskKind subtask);

// ATE or joint prompt for one sentence.
PromptedExample RenderPrompt(const PromptConfig& config, SubtaskKind subtask,
                             const ReviewSentence& sentence);
// ATSC prompt for one (sentence, aspect) sample.
PromptedExample RenderPrompt(const PromptConfig& config,
                             const AtscSample& sample);

struct SkippedSentence {
  std::string sentence_id;
  std::string reason;
};

struct Dataset {
  SubtaskKind subtask = SubtaskKind::kAte;
  std::vector<PromptedExample> examples;
  std::vector<SkippedSentence> skipped;
  size_t dropped_conflict = 0;
};

// Order-preserving. ATE/joint: one example per sentence, minus sentences whose
// gold cannot be rendered (listed in `skipped`). ATSC: one per ExpandAtsc
// sample.
Dataset BuildDataset(const PromptConfig& config, SubtaskKind subtask,
                     const Corpus& corpus);

// Line-delimited JSON records:
//   {"input_text": "...", "target_text": "...",
//    "meta": {"sentence_id": "...", "subtask": "ate", "aspect": "...",
//             "sample_index": 0}}
void WritePromptedJsonl(const std::vector<PromptedExample>& examples,
                        std::ostream& out);
void WritePromptedJsonl(const std::vector<PromptedExample>& examples,
                        const std::filesystem::path& path);
std::vector<PromptedExample> ReadPromptedJsonl(std::istream& in,
                                               std::string_view source_name);
std::vector<PromptedExample> ReadPromptedJsonl(
    const std::filesystem::path& path);

}  // namespace absa

#endif  // ABSA_PROMPTING_H_
