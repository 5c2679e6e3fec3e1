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

#ifndef ABSA_DECODING_H_
#define ABSA_DECODING_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absa/corpus.h"
#include "absa/prompting.h"

namespace absa {

// Parsers are total: every input string, including "", yields a value.
// Anything unexpected is recorded in `anomalies` rather than thrown.

struct AtePrediction {
  std::vector<std::string> terms;  // canonical, unique, first-seen order
  std::vector<std::string> anomalies;
};

enum class AtscLabel { kPositive, kNegative, kNeutral, kInvalid };

std::string_view AtscLabelName(AtscLabel label);
AtscLabel LabelFromPolarity(Polarity p);

struct AtscPrediction {
  AtscLabel label = AtscLabel::kInvalid;
  std::string raw;
};

using TermPolarity = std::pair<std::string, Polarity>;

struct JointPrediction {
  std::vector<TermPolarity> pairs;  // canonical, unique, first-seen order
  std::vector<std::string> malformed_fragments;
  std::vector<std::string> anomalies;
};

struct ParseOptions {
  std::string ate_empty = "noaspectterm";
  std::string joint_empty = "noaspectterm:none";
  // Accept "conflict" as a joint polarity (only meaningful when conflict
  // aspects are kept in the extraction gold).
  bool accept_conflict = false;
};

AtePrediction ParseAte(std::string_view raw, const ParseOptions& options = {});
AtscPrediction ParseAtsc(std::string_view raw);
JointPrediction ParseJoint(std::string_view raw,
                           const ParseOptions& options = {});

// Canonical gold structures matching the parsers' output space.
std::vector<std::string> GoldTermSet(const ReviewSentence& sentence,
                                     ConflictPolicy policy);
std::vector<TermPolarity> GoldPairSet(const ReviewSentence& sentence,
                                      ConflictPolicy policy);

// One serialized model output. `aspect` and `sample_index` identify ATSC
// samples; `parsed` holds the structure from the matching parser.
struct PredictionRecord {
  std::string sentence_id;
  SubtaskKind subtask = SubtaskKind::kAte;
  std::optional<std::string> aspect;
  size_t sample_index = 0;
  std::string raw;
};

// Line-delimited JSON:
//   {"sentence_id": "...", "subtask": "joint", "raw": "...",
//    "aspect": "...", "sample_index": 0,
//    "parsed": {...}, "anomalies": [...]}
// "parsed" and "anomalies" are written for readers; on input only the
// identifying fields and "raw" are required.
void WritePredictionsJsonl(const std::vector<PredictionRecord>& records,
                           std::ostream& out,
                           const ParseOptions& options = {});
void WritePredictionsJsonl(const std::vector<PredictionRecord>& records,
                           const std::filesystem::path& path,
                           const ParseOptions& options = {});
std::vector<PredictionRecord> ReadPredictionsJsonl(std::istream& in,
                                                   std::string_view source_name);
std::vector<PredictionRecord> ReadPredictionsJsonl(
    const std::filesystem::path& path);

}  // namespace absa

#endif  // ABSA_DECODING_H_
