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

#include "absa/decoding.h"

#include <algorithm>
#include <fstream>

#include "absa/error.h"
#include "absa/text.h"
#include "json.hpp"

namespace absa {
namespace {

using json = nlohmann::json;

// Trim, lowercase, drop trailing periods.
std::string CanonicalLabel(std::string_view raw) {
  std::string s = CanonicalizeTerm(raw);
  while (!s.empty() && s.back() == '.') s.pop_back();
  return std::string(Trim(s));
}

std::optional<Polarity> PolarityWord(std::string_view raw,
                                     bool accept_conflict) {
  std::string label = CanonicalLabel(raw);
  if (label == "positive") return Polarity::kPositive;
  if (label == "negative") return Polarity::kNegative;
  if (label == "neutral") return Polarity::kNeutral;
  if (accept_conflict && label == "conflict") return Polarity::kConflict;
  return std::nullopt;
}

// Removes every whitespace character; used for sentinel comparison.
std::string Squeeze(std::string_view s) {
  std::string out;
  for (char c : CanonicalizeTerm(s)) {
    if (c != ' ') out.push_back(c);
  }
  return out;
}

json ParsedToJson(const PredictionRecord& record, const ParseOptions& options,
                  json& anomalies) {
  switch (record.subtask) {
    case SubtaskKind::kAte: {
      AtePrediction p = ParseAte(record.raw, options);
      for (const auto& a : p.anomalies) anomalies.push_back(a);
      return json{{"terms", p.terms}};
    }
    case SubtaskKind::kAtsc: {
      AtscPrediction p = ParseAtsc(record.raw);
      if (p.label == AtscLabel::kInvalid) anomalies.push_back("invalid label");
      return json{{"label", std::string(AtscLabelName(p.label))}};
    }
    case SubtaskKind::kJoint: {
      JointPrediction p = ParseJoint(record.raw, options);
      json pairs = json::array();
      for (const auto& [term, polarity] : p.pairs) {
        pairs.push_back({{"term", term},
                         {"polarity", std::string(PolarityName(polarity))}});
      }
      for (const auto& a : p.anomalies) anomalies.push_back(a);
      for (const auto& f : p.malformed_fragments) {
        anomalies.push_back("malformed fragment: " + f);
      }
      return json{{"pairs", pairs}, {"malformed", p.malformed_fragments}};
    }
  }
  return json::object();
}

}  // namespace

std::string_view AtscLabelName(AtscLabel label) {
  switch (label) {
    case AtscLabel::kPositive: return "positive";
    case AtscLabel::kNegative: return "negative";
    case AtscLabel::kNeutral: return "neutral";
    case AtscLabel::kInvalid: return "invalid";
  }
  return "";
}

AtscLabel LabelFromPolarity(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return AtscLabel::kPositive;
    case Polarity::kNegative: return AtscLabel::kNegative;
    case Polarity::kNeutral: return AtscLabel::kNeutral;
    case Polarity::kConflict: return AtscLabel::kInvalid;
  }
  return AtscLabel::kInvalid;
}

AtePrediction ParseAte(std::string_view raw, const ParseOptions& options) {
  AtePrediction prediction;
  const std::string sentinel = CanonicalizeTerm(options.ate_empty);
  if (CanonicalizeTerm(raw) == sentinel) return prediction;
  for (std::string_view fragment : SplitString(raw, ",")) {
    std::string term = CanonicalizeTerm(fragment);
    if (term.empty()) continue;
    if (term == sentinel) {
      prediction.anomalies.push_back("sentinel mixed with terms");
      continue;
    }
    if (std::find(prediction.terms.begin(), prediction.terms.end(), term) ==
        prediction.terms.end()) {
      prediction.terms.push_back(std::move(term));
    }
  }
  if (prediction.terms.empty() && !Trim(raw).empty() &&
      prediction.anomalies.empty()) {
    prediction.anomalies.push_back("no terms in non-empty output");
  }
  return prediction;
}

AtscPrediction ParseAtsc(std::string_view raw) {
  AtscPrediction prediction;
  prediction.raw = std::string(raw);
  if (auto p = PolarityWord(raw, /*accept_conflict=*/false)) {
    prediction.label = LabelFromPolarity(*p);
  }
  return prediction;
}

JointPrediction ParseJoint(std::string_view raw, const ParseOptions& options) {
  JointPrediction prediction;
  if (Squeeze(raw) == Squeeze(options.joint_empty)) return prediction;
  for (std::string_view fragment : SplitString(raw, ",")) {
    std::string_view trimmed = Trim(fragment);
    if (trimmed.empty()) continue;
    size_t colon = trimmed.rfind(':');
    if (colon == std::string_view::npos) {
      prediction.malformed_fragments.emplace_back(trimmed);
      continue;
    }
    std::string term = CanonicalizeTerm(trimmed.substr(0, colon));
    std::optional<Polarity> polarity =
        PolarityWord(trimmed.substr(colon + 1), options.accept_conflict);
    if (term.empty() || !polarity) {
      prediction.malformed_fragments.emplace_back(trimmed);
      continue;
    }
    TermPolarity pair{std::move(term), *polarity};
    if (std::find(prediction.pairs.begin(), prediction.pairs.end(), pair) ==
        prediction.pairs.end()) {
      prediction.pairs.push_back(std::move(pair));
    }
  }
  return prediction;
}

std::vector<std::string> GoldTermSet(const ReviewSentence& sentence,
                                     ConflictPolicy policy) {
  std::vector<std::string> terms;
  for (const AspectAnnotation& aspect : ExtractionAspects(sentence, policy)) {
    std::string term = CanonicalizeTerm(aspect.term);
    if (std::find(terms.begin(), terms.end(), term) == terms.end()) {
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

std::vector<TermPolarity> GoldPairSet(const ReviewSentence& sentence,
                                      ConflictPolicy policy) {
  std::vector<TermPolarity> pairs;
  for (const AspectAnnotation& aspect : ExtractionAspects(sentence, policy)) {
    TermPolarity pair{CanonicalizeTerm(aspect.term), aspect.polarity};
    if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) {
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

void WritePredictionsJsonl(const std::vector<PredictionRecord>& records,
                           std::ostream& out, const ParseOptions& options) {
  for (const PredictionRecord& record : records) {
    json anomalies = json::array();
    json parsed = ParsedToJson(record, options, anomalies);
    json line = {{"sentence_id", record.sentence_id},
                 {"subtask", std::string(SubtaskName(record.subtask))},
                 {"raw", record.raw},
                 {"sample_index", record.sample_index},
                 {"parsed", std::move(parsed)},
                 {"anomalies", std::move(anomalies)}};
    if (record.aspect) line["aspect"] = *record.aspect;
    out << line.dump() << '\n';
  }
}

void WritePredictionsJsonl(const std::vector<PredictionRecord>& records,
                           const std::filesystem::path& path,
                           const ParseOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WritePredictionsJsonl(records, out, options);
}

std::vector<PredictionRecord> ReadPredictionsJsonl(
    std::istream& in, std::string_view source_name) {
  std::vector<PredictionRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    try {
      json j = json::parse(line);
      PredictionRecord record;
      record.sentence_id = j.at("sentence_id").get<std::string>();
      auto subtask = ParseSubtask(j.at("subtask").get<std::string>());
      if (!subtask) {
        throw Error(ErrorCode::kSchemaViolation, where + ": bad subtask");
      }
      record.subtask = *subtask;
      record.raw = j.at("raw").get<std::string>();
      if (j.contains("aspect")) record.aspect = j["aspect"].get<std::string>();
      record.sample_index = j.value("sample_index", size_t{0});
      records.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaViolation, where + ": " + e.what());
    }
  }
  return records;
}

std::vector<PredictionRecord> ReadPredictionsJsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadPredictionsJsonl(in, path.string());
}

}  // namespace absa
