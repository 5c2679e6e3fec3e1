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

#ifndef ABSA_METRICS_H_
#define ABSA_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "absa/corpus.h"
#include "absa/decoding.h"
#include "absa/prompting.h"

namespace absa {

struct Support {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t n_samples = 0;
  bool operator==(const Support&) const = default;
};

// All ratios are in [0, 1]. Undefined ratios (zero denominators) are 0.
struct ScoreReport {
  SubtaskKind subtask = SubtaskKind::kAte;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> accuracy;  // ATSC only
  Support support;
  bool operator==(const ScoreReport&) const = default;
};

struct RunAggregate {
  std::vector<ScoreReport> per_run;
  ScoreReport mean;
  size_t n_runs = 0;
};

// Pooled counts (corpus level) or the mean of per-sentence scores. In the
// per-sentence mode a sentence with no gold and no predicted items scores 1.
enum class Averaging { kMicro, kMacroPerSentence };

struct SentenceTerms {
  std::string sentence_id;
  std::vector<std::string> terms;
};

struct SentencePairs {
  std::string sentence_id;
  std::vector<TermPolarity> pairs;
};

// 2pr/(p+r), or 0 when p + r == 0.
double F1(double precision, double recall);

// Gold and predictions must cover the same sentence ids (kIdMismatch).
// Items are compared after canonicalization; duplicates count once.
ScoreReport ScoreAte(const std::vector<SentenceTerms>& gold,
                     const std::vector<SentenceTerms>& pred,
                     Averaging averaging = Averaging::kMicro);

// Accuracy over positional pairs (kLengthMismatch on size mismatch); invalid
// predictions are mismatches. precision/recall/f1 are macro averages over the
// three polarity classes.
ScoreReport ScoreAtsc(const std::vector<Polarity>& gold,
                      const std::vector<AtscLabel>& pred);

ScoreReport ScoreJoint(const std::vector<SentencePairs>& gold,
                       const std::vector<SentencePairs>& pred,
                       Averaging averaging = Averaging::kMicro);

// Arithmetic means of every metric; support counts are summed. Throws
// kEmptyInput and kMixedSubtasks.
RunAggregate AggregateRuns(const std::vector<ScoreReport>& reports);

// Percentage rounded half-up to two decimals, e.g. 0.92305 -> 92.31.
double RoundPercent(double ratio);
std::string FormatPercent(double ratio);

}  // namespace absa

#endif  // ABSA_METRICS_H_
