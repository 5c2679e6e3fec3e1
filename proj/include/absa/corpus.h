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

#ifndef ABSA_CORPUS_H_
#define ABSA_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace absa {

enum class Polarity { kPositive, kNegative, kNeutral, kConflict };

std::string_view PolarityName(Polarity p);
// Strict: only the four lowercase gold spellings are accepted.
std::optional<Polarity> ParsePolarity(std::string_view s);

enum class Domain { kLaptops, kRestaurants, kMixed };

std::string_view DomainName(Domain d);
std::optional<Domain> ParseDomain(std::string_view s);

enum class Split { kTrain, kTest };

std::string_view SplitName(Split s);
std::optional<Split> ParseSplit(std::string_view s);

// Controls whether conflict-labelled aspects survive into the ATE and joint
// gold sets. ATSC always drops them.
enum class ConflictPolicy { kDropEverywhere, kKeepForExtraction };

struct CharSpan {
  size_t from = 0;
  size_t to = 0;
  bool operator==(const CharSpan&) const = default;
};

struct AspectAnnotation {
  std::string term;  // surface form as it appears in the sentence
  Polarity polarity = Polarity::kNeutral;
  std::optional<CharSpan> span;
  bool operator==(const AspectAnnotation&) const = default;
};

struct ReviewSentence {
  std::string id;
  std::string text;
  Domain domain = Domain::kLaptops;
  std::vector<AspectAnnotation> aspects;
  bool operator==(const ReviewSentence&) const = default;
};

struct Corpus {
  Domain domain = Domain::kLaptops;
  Split split = Split::kTrain;
  std::vector<ReviewSentence> sentences;
  bool operator==(const Corpus&) const = default;
};

// Non-fatal findings collected while loading.
struct LoadDiagnostics {
  size_t merged_duplicate_aspects = 0;
  std::vector<std::string> warnings;
};

// One ATSC training/evaluation item: a single non-conflict aspect occurrence.
struct AtscSample {
  std::string sentence_id;
  std::string text;
  std::string aspect_term;
  Polarity gold_polarity = Polarity::kNeutral;
  size_t aspect_index = 0;  // position among the sentence's ATSC samples
  bool operator==(const AtscSample&) const = default;
};

struct AtscExpansion {
  std::vector<AtscSample> samples;
  size_t dropped_conflict = 0;
};

struct StatsRecord {
  size_t sentences = 0;
  size_t aspects = 0;
  // aspects-per-sentence -> number of sentences; key 0 is the "#NO" bucket.
  std::map<size_t, size_t> aspect_histogram;
  size_t positive = 0;
  size_t negative = 0;
  size_t neutral = 0;
  size_t conflict = 0;
  bool operator==(const StatsRecord&) const = default;
};

// Parses a SemEval-2014 Task 4 XML file. Throws Error with kMalformedXml,
// kSchemaViolation or kDuplicateId; kIo when the file cannot be read.
Corpus LoadSemevalXml(const std::filesystem::path& path, Domain domain,
                      Split split, LoadDiagnostics* diagnostics = nullptr);

// Same as LoadSemevalXml but from an in-memory document. `source_name` is used
// in diagnostics.
Corpus ParseSemevalXml(std::string_view xml, Domain domain, Split split,
                       std::string_view source_name = "<memory>",
                       LoadDiagnostics* diagnostics = nullptr);

AtscExpansion ExpandAtsc(const Corpus& corpus);

// Concatenates `a` then `b`. Ids become "<domain>:<id>". Throws
// kSplitMismatch when the splits differ.
Corpus MergeCorpora(const Corpus& a, const Corpus& b);

StatsRecord ComputeStats(const Corpus& corpus);

// Aspects that count as gold for ATE/joint under `policy`, in gold order.
std::vector<AspectAnnotation> ExtractionAspects(const ReviewSentence& sentence,
                                                ConflictPolicy policy);

// Line-delimited JSON, one sentence per line:
//   {"id": "...", "domain": "laptops", "split": "train", "text": "...",
//    "aspects": [{"term": "...", "polarity": "positive", "from": 4, "to": 9}]}
// "from"/"to" are omitted when the source had no offsets.
void WriteCorpusJsonl(const Corpus& corpus, std::ostream& out);
void WriteCorpusJsonl(const Corpus& corpus, const std::filesystem::path& path);
Corpus ReadCorpusJsonl(std::istream& in, std::string_view source_name);
Corpus ReadCorpusJsonl(const std::filesystem::path& path);

// Loads either format: *.xml through the SemEval loader (domain and split
// required), anything else as corpus JSONL.
Corpus LoadCorpusFile(const std::filesystem::path& path,
                      std::optional<Domain> domain, std::optional<Split> split,
                      LoadDiagnostics* diagnostics = nullptr);

}  // namespace absa

#endif  // ABSA_CORPUS_H_
