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

#include "absa/prompting.h"

#include <fstream>
#include <set>
#include <utility>

#include "absa/error.h"
#include "absa/text.h"
#include "embedded_templates.h"
#include "json.hpp"

namespace absa {
namespace {

using json = nlohmann::json;

// Expands {name} slots in one left-to-right pass so slot-like text inside a
// substituted value is never expanded again.
std::string ExpandSlots(std::string_view pattern,
                        const std::map<std::string, std::string>& values) {
  std::string out;
  size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      size_t close = pattern.find('}', i);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(pattern.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(pattern[i++]);
  }
  return out;
}

void CheckRepresentable(const ReviewSentence& sentence, std::string_view term,
                        bool forbid_colon) {
  if (Contains(term, ",")) {
    throw Error(ErrorCode::kUnrepresentableTerm,
                "sentence " + sentence.id + ": term '" + std::string(term) +
                    "' contains ','");
  }
  if (forbid_colon && Contains(term, ":")) {
    throw Error(ErrorCode::kUnrepresentableTerm,
                "sentence " + sentence.id + ": term '" + std::string(term) +
                    "' contains ':'");
  }
}

void AppendExamples(const std::vector<ExamplePair>& examples,
                    std::vector<std::string>& lines) {
  for (const ExamplePair& example : examples) {
    lines.push_back(example.input);
    lines.push_back(example.output);
  }
}

std::string WithSample(const PromptConfig& config, SubtaskKind subtask,
                       std::map<std::string, std::string> slots) {
  const InstructionPrompt& prompt = config.prompt(subtask);
  return RenderInstructionBlock(config, subtask) + "\n" +
         ExpandSlots(prompt.sample_template, slots);
}

}  // namespace

std::string_view SubtaskName(SubtaskKind kind) {
  switch (kind) {
    case SubtaskKind::kAte: return "ate";
    case SubtaskKind::kAtsc: return "atsc";
    case SubtaskKind::kJoint: return "joint";
  }
  return "";
}

std::optional<SubtaskKind> ParseSubtask(std::string_view s) {
  std::string lower = AsciiLower(Trim(s));
  if (lower == "ate") return SubtaskKind::kAte;
  if (lower == "atsc") return SubtaskKind::kAtsc;
  if (lower == "joint") return SubtaskKind::kJoint;
  return std::nullopt;
}

std::string_view VariantName(PromptVariant v) {
  return v == PromptVariant::kV1 ? "v1" : "v2";
}

std::optional<PromptVariant> ParseVariant(std::string_view s) {
  std::string lower = AsciiLower(Trim(s));
  if (lower == "v1" || lower == "1") return PromptVariant::kV1;
  if (lower == "v2" || lower == "2") return PromptVariant::kV2;
  return std::nullopt;
}

InstructionPrompt ParseInstructionTemplate(std::string_view text,
                                           std::string_view source_name) {
  auto fail = [&](size_t line_no, const std::string& what) -> Error {
    return Error(ErrorCode::kSchemaViolation,
                 std::string(source_name) + ":" + std::to_string(line_no) +
                     ": " + what);
  };

  // slot name -> content lines, collected in file order.
  std::vector<std::pair<std::string, std::vector<std::string>>> slots;
  InstructionPrompt prompt;
  size_t line_no = 0;
  for (std::string_view raw : SplitString(text, "\n")) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.starts_with("@")) {
      std::string_view directive = line.substr(1);
      if (directive.starts_with("version")) {
        prompt.version = std::string(Trim(directive.substr(7)));
        continue;
      }
      static const std::set<std::string_view> kKnown = {
          "definition",      "cue",             "sample",
          "positive.input",  "positive.output", "negative.input",
          "negative.output", "neutral.input",   "neutral.output"};
      if (!kKnown.contains(Trim(directive))) {
        throw fail(line_no, "unknown directive '" + std::string(line) + "'");
      }
      slots.emplace_back(std::string(Trim(directive)),
                         std::vector<std::string>{});
      continue;
    }
    if (slots.empty()) {
      if (Trim(line).empty() || line.starts_with("#")) continue;
      throw fail(line_no, "text before the first directive");
    }
    slots.back().second.emplace_back(line);
  }

  std::optional<std::string> pending_input;
  std::string pending_kind;
  std::set<std::string> singles;
  for (auto& [name, lines] : slots) {
    while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
    std::string content = Join(lines, "\n");
    if (content.empty()) {
      throw Error(ErrorCode::kSchemaViolation,
                  std::string(source_name) + ": empty @" + name);
    }
    size_t dot = name.find('.');
    if (dot == std::string::npos) {
      if (!singles.insert(name).second) {
        throw Error(ErrorCode::kSchemaViolation,
                    std::string(source_name) + ": repeated @" + name);
      }
      if (name == "definition") prompt.definition = content;
      if (name == "cue") prompt.cue = content;
      if (name == "sample") prompt.sample_template = content;
      continue;
    }
    std::string kind = name.substr(0, dot);
    bool is_input = name.substr(dot + 1) == "input";
    if (is_input) {
      if (pending_input) {
        throw Error(ErrorCode::kSchemaViolation,
                    std::string(source_name) + ": @" + pending_kind +
                        ".input without a matching output");
      }
      pending_input = content;
      pending_kind = kind;
      continue;
    }
    if (!pending_input || pending_kind != kind) {
      throw Error(ErrorCode::kSchemaViolation,
                  std::string(source_name) + ": @" + name +
                      " without a preceding @" + kind + ".input");
    }
    ExamplePair pair{*pending_input, content};
    pending_input.reset();
    if (kind == "positive") prompt.positive_examples.push_back(std::move(pair));
    if (kind == "negative") prompt.negative_examples.push_back(std::move(pair));
    if (kind == "neutral") prompt.neutral_examples.push_back(std::move(pair));
  }
  if (pending_input) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string(source_name) + ": trailing @" + pending_kind +
                    ".input without output");
  }
  for (const char* required : {"definition", "cue", "sample"}) {
    if (!singles.contains(required)) {
      throw Error(ErrorCode::kSchemaViolation, std::string(source_name) +
                                                   ": missing @" + required);
    }
  }
  if (prompt.positive_examples.size() != 2 ||
      prompt.negative_examples.size() != 2 ||
      prompt.neutral_examples.size() != 2) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string(source_name) +
                    ": expected exactly 2 positive, 2 negative and 2 neutral "
                    "examples");
  }
  return prompt;
}

PromptConfig PromptConfig::Default(PromptVariant variant) {
  PromptConfig config;
  config.variant = variant;
  config.prompts[SubtaskKind::kAte] =
      ParseInstructionTemplate(embedded::kAteTemplate, "templates/ate.tmpl");
  config.prompts[SubtaskKind::kAtsc] =
      ParseInstructionTemplate(embedded::kAtscTemplate, "templates/atsc.tmpl");
  config.prompts[SubtaskKind::kJoint] = ParseInstructionTemplate(
      embedded::kJointTemplate, "templates/joint.tmpl");
  return config;
}

PromptConfig PromptConfig::FromDirectory(const std::filesystem::path& dir,
                                         PromptVariant variant) {
  PromptConfig config;
  config.variant = variant;
  for (SubtaskKind kind : kAllSubtasks) {
    std::filesystem::path path = dir / (std::string(SubtaskName(kind)) + ".tmpl");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    config.prompts[kind] = ParseInstructionTemplate(text, path.string());
  }
  return config;
}

const InstructionPrompt& PromptConfig::prompt(SubtaskKind kind) const {
  auto it = prompts.find(kind);
  if (it == prompts.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no template loaded for " + std::string(SubtaskName(kind)));
  }
  return it->second;
}

std::string RenderAteTarget(const ReviewSentence& sentence,
                            const TargetOptions& options) {
  std::vector<std::string> terms;
  std::set<std::string> seen;
  for (const AspectAnnotation& aspect :
       ExtractionAspects(sentence, options.conflict_policy)) {
    std::string_view term = Trim(aspect.term);
    CheckRepresentable(sentence, term, /*forbid_colon=*/false);
    if (seen.insert(CanonicalizeTerm(term)).second) terms.emplace_back(term);
  }
  if (terms.empty()) return options.ate_empty;
  return Join(terms, ", ");
}

std::string RenderAtscTarget(const AtscSample& sample) {
  return std::string(PolarityName(sample.gold_polarity));
}

std::string RenderJointTarget(const ReviewSentence& sentence,
                              const TargetOptions& options) {
  std::vector<std::string> pairs;
  std::set<std::string> seen;
  for (const AspectAnnotation& aspect :
       ExtractionAspects(sentence, options.conflict_policy)) {
    std::string_view term = Trim(aspect.term);
    CheckRepresentable(sentence, term, /*forbid_colon=*/true);
    std::string pair =
        std::string(term) + ":" + std::string(PolarityName(aspect.polarity));
    if (seen.insert(CanonicalizeTerm(pair)).second) pairs.push_back(pair);
  }
  if (pairs.empty()) return options.joint_empty;
  return Join(pairs, ", ");
}

std::string RenderInstructionBlock(const PromptConfig& config,
                                   SubtaskKind subtask) {
  const InstructionPrompt& prompt = config.prompt(subtask);
  std::vector<std::string> lines;
  lines.push_back(prompt.definition);
  AppendExamples(prompt.positive_examples, lines);
  if (config.variant == PromptVariant::kV2) {
    AppendExamples(prompt.negative_examples, lines);
    AppendExamples(prompt.neutral_examples, lines);
  }
  lines.push_back(prompt.cue);
  return Join(lines, "\n");
}

PromptedExample RenderPrompt(const PromptConfig& config, SubtaskKind subtask,
                             const ReviewSentence& sentence) {
  if (subtask == SubtaskKind::kAtsc) {
    throw Error(ErrorCode::kInvalidArgument,
                "ATSC prompts are rendered per aspect sample, not per sentence");
  }
  PromptedExample example;
  example.target_text = subtask == SubtaskKind::kAte
                            ? RenderAteTarget(sentence, config.targets)
                            : RenderJointTarget(sentence, config.targets);
  example.input_text = WithSample(config, subtask, {{"sentence", sentence.text}});
  example.meta.sentence_id = sentence.id;
  example.meta.subtask = subtask;
  return example;
}

PromptedExample RenderPrompt(const PromptConfig& config,
                             const AtscSample& sample) {
  PromptedExample example;
  example.target_text = RenderAtscTarget(sample);
  example.input_text =
      WithSample(config, SubtaskKind::kAtsc,
                 {{"sentence", sample.text}, {"aspect", sample.aspect_term}});
  example.meta.sentence_id = sample.sentence_id;
  example.meta.subtask = SubtaskKind::kAtsc;
  example.meta.aspect = sample.aspect_term;
  example.meta.sample_index = sample.aspect_index;
  return example;
}

Dataset BuildDataset(const PromptConfig& config, SubtaskKind subtask,
                     const Corpus& corpus) {
  Dataset dataset;
  dataset.subtask = subtask;
  if (subtask == SubtaskKind::kAtsc) {
    AtscExpansion expansion = ExpandAtsc(corpus);
    dataset.dropped_conflict = expansion.dropped_conflict;
    dataset.examples.reserve(expansion.samples.size());
    for (const AtscSample& sample : expansion.samples) {
      dataset.examples.push_back(RenderPrompt(config, sample));
    }
    return dataset;
  }
  dataset.examples.reserve(corpus.sentences.size());
  for (const ReviewSentence& sentence : corpus.sentences) {
    for (const AspectAnnotation& aspect : sentence.aspects) {
      if (aspect.polarity == Polarity::kConflict &&
          config.targets.conflict_policy == ConflictPolicy::kDropEverywhere) {
        ++dataset.dropped_conflict;
      }
    }
    try {
      dataset.examples.push_back(RenderPrompt(config, subtask, sentence));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnrepresentableTerm) throw;
      dataset.skipped.push_back(SkippedSentence{sentence.id, e.what()});
    }
  }
  return dataset;
}

void WritePromptedJsonl(const std::vector<PromptedExample>& examples,
                        std::ostream& out) {
  for (const PromptedExample& example : examples) {
    json meta = {{"sentence_id", example.meta.sentence_id},
                 {"subtask", std::string(SubtaskName(example.meta.subtask))},
                 {"sample_index", example.meta.sample_index}};
    if (example.meta.aspect) meta["aspect"] = *example.meta.aspect;
    json record = {{"input_text", example.input_text},
                   {"target_text", example.target_text},
                   {"meta", std::move(meta)}};
    out << record.dump() << '\n';
  }
}

void WritePromptedJsonl(const std::vector<PromptedExample>& examples,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WritePromptedJsonl(examples, out);
}

std::vector<PromptedExample> ReadPromptedJsonl(std::istream& in,
                                               std::string_view source_name) {
  std::vector<PromptedExample> examples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    try {
      json record = json::parse(line);
      PromptedExample example;
      example.input_text = record.at("input_text").get<std::string>();
      example.target_text = record.value("target_text", std::string());
      const json& meta = record.at("meta");
      example.meta.sentence_id = meta.at("sentence_id").get<std::string>();
      auto subtask = ParseSubtask(meta.at("subtask").get<std::string>());
      if (!subtask) throw Error(ErrorCode::kSchemaViolation, where + ": bad subtask");
      example.meta.subtask = *subtask;
      if (meta.contains("aspect")) {
        example.meta.aspect = meta["aspect"].get<std::string>();
      }
      example.meta.sample_index = meta.value("sample_index", size_t{0});
      examples.push_back(std::move(example));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaViolation, where + ": " + e.what());
    }
  }
  return examples;
}

std::vector<PromptedExample> ReadPromptedJsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadPromptedJsonl(in, path.string());
}

}  // namespace absa
