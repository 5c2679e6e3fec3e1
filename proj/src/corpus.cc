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

#include "absa/corpus.h"

#include <set>
#include <utility>

#include "absa/error.h"
#include "absa/text.h"

namespace absa {

std::string_view PolarityName(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kNeutral: return "neutral";
    case Polarity::kConflict: return "conflict";
  }
  return "";
}

std::optional<Polarity> ParsePolarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  if (s == "neutral") return Polarity::kNeutral;
  if (s == "conflict") return Polarity::kConflict;
  return std::nullopt;
}

std::string_view DomainName(Domain d) {
  switch (d) {
    case Domain::kLaptops: return "laptops";
    case Domain::kRestaurants: return "restaurants";
    case Domain::kMixed: return "mixed";
  }
  return "";
}

std::optional<Domain> ParseDomain(std::string_view s) {
  std::string lower = AsciiLower(Trim(s));
  if (lower == "laptops" || lower == "laptop" || lower == "lapt14") {
    return Domain::kLaptops;
  }
  if (lower == "restaurants" || lower == "restaurant" || lower == "rest14") {
    return Domain::kRestaurants;
  }
  if (lower == "mixed") return Domain::kMixed;
  return std::nullopt;
}

std::string_view SplitName(Split s) {
  return s == Split::kTrain ? "train" : "test";
}

std::optional<Split> ParseSplit(std::string_view s) {
  std::string lower = AsciiLower(Trim(s));
  if (lower == "train") return Split::kTrain;
  if (lower == "test") return Split::kTest;
  return std::nullopt;
}

AtscExpansion ExpandAtsc(const Corpus& corpus) {
  AtscExpansion out;
  for (const ReviewSentence& sentence : corpus.sentences) {
    size_t index = 0;
    for (const AspectAnnotation& aspect : sentence.aspects) {
      if (aspect.polarity == Polarity::kConflict) {
        ++out.dropped_conflict;
        continue;
      }
      out.samples.push_back(AtscSample{sentence.id, sentence.text, aspect.term,
                                       aspect.polarity, index++});
    }
  }
  return out;
}

Corpus MergeCorpora(const Corpus& a, const Corpus& b) {
  if (a.split != b.split) {
    throw Error(ErrorCode::kSplitMismatch,
                "cannot merge a " + std::string(SplitName(a.split)) +
                    " corpus with a " + std::string(SplitName(b.split)) +
                    " corpus");
  }
  Corpus merged;
  merged.split = a.split;
  merged.sentences.reserve(a.sentences.size() + b.sentences.size());
  std::set<Domain> domains;
  for (const Corpus* part : {&a, &b}) {
    for (const ReviewSentence& sentence : part->sentences) {
      ReviewSentence copy = sentence;
      copy.id = std::string(DomainName(sentence.domain)) + ":" + sentence.id;
      domains.insert(sentence.domain);
      merged.sentences.push_back(std::move(copy));
    }
  }
  if (domains.empty()) {
    merged.domain = a.domain;
  } else if (domains.size() == 1) {
    merged.domain = *domains.begin();
  } else {
    merged.domain = Domain::kMixed;
  }
  return merged;
}

StatsRecord ComputeStats(const Corpus& corpus) {
  StatsRecord stats;
  stats.sentences = corpus.sentences.size();
  for (const ReviewSentence& sentence : corpus.sentences) {
    ++stats.aspect_histogram[sentence.aspects.size()];
    stats.aspects += sentence.aspects.size();
    for (const AspectAnnotation& aspect : sentence.aspects) {
      switch (aspect.polarity) {
        case Polarity::kPositive: ++stats.positive; break;
        case Polarity::kNegative: ++stats.negative; break;
        case Polarity::kNeutral: ++stats.neutral; break;
        case Polarity::kConflict: ++stats.conflict; break;
      }
    }
  }
  return stats;
}

std::vector<AspectAnnotation> ExtractionAspects(const ReviewSentence& sentence,
                                                ConflictPolicy policy) {
  std::vector<AspectAnnotation> out;
  for (const AspectAnnotation& aspect : sentence.aspects) {
    if (aspect.polarity == Polarity::kConflict &&
        policy == ConflictPolicy::kDropEverywhere) {
      continue;
    }
    out.push_back(aspect);
  }
  return out;
}

}  // namespace absa
