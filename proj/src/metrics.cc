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

#include "absa/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "absa/error.h"
#include "absa/text.h"

namespace absa {
namespace {

double Ratio(size_t num, size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

template <typename Item>
using ItemsById = std::map<std::string, std::set<Item>>;

template <typename Item, typename Row, typename Canon>
ItemsById<Item> Index(const std::vector<Row>& rows, Canon canon,
                      const char* what) {
  ItemsById<Item> index;
  for (const Row& row : rows) {
    auto [it, inserted] = index.try_emplace(row.sentence_id);
    if (!inserted) {
      throw Error(ErrorCode::kIdMismatch, std::string("duplicate ") + what +
                                              " sentence id " + row.sentence_id);
    }
    canon(row, it->second);
  }
  return index;
}

template <typename Item>
ScoreReport ScoreSets(SubtaskKind subtask, const ItemsById<Item>& gold,
                      const ItemsById<Item>& pred, Averaging averaging) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kIdMismatch,
                "gold covers " + std::to_string(gold.size()) +
                    " sentences, predictions " + std::to_string(pred.size()));
  }
  ScoreReport report;
  report.subtask = subtask;
  double p_sum = 0, r_sum = 0, f_sum = 0;
  for (const auto& [id, gold_items] : gold) {
    auto it = pred.find(id);
    if (it == pred.end()) {
      throw Error(ErrorCode::kIdMismatch, "no prediction for sentence " + id);
    }
    const std::set<Item>& pred_items = it->second;
    size_t tp = 0;
    for (const Item& item : pred_items) tp += gold_items.count(item);
    size_t fp = pred_items.size() - tp;
    size_t fn = gold_items.size() - tp;
    report.support.tp += tp;
    report.support.fp += fp;
    report.support.fn += fn;
    ++report.support.n_samples;
    if (averaging == Averaging::kMacroPerSentence) {
      if (gold_items.empty() && pred_items.empty()) {
        p_sum += 1;
        r_sum += 1;
        f_sum += 1;
      } else {
        double p = Ratio(tp, tp + fp);
        double r = Ratio(tp, tp + fn);
        p_sum += p;
        r_sum += r;
        f_sum += F1(p, r);
      }
    }
  }
  if (averaging == Averaging::kMicro) {
    const Support& s = report.support;
    report.precision = Ratio(s.tp, s.tp + s.fp);
    report.recall = Ratio(s.tp, s.tp + s.fn);
    report.f1 = F1(report.precision, report.recall);
  } else if (report.support.n_samples > 0) {
    double n = static_cast<double>(report.support.n_samples);
    report.precision = p_sum / n;
    report.recall = r_sum / n;
    report.f1 = f_sum / n;
  }
  return report;
}

// Summation order fixed by value so the mean does not depend on run order.
double SortedMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

double F1(double precision, double recall) {
  double sum = precision + recall;
  return sum > 0 ? 2.0 * precision * recall / sum : 0.0;
}

ScoreReport ScoreAte(const std::vector<SentenceTerms>& gold,
                     const std::vector<SentenceTerms>& pred,
                     Averaging averaging) {
  auto canon = [](const SentenceTerms& row, std::set<std::string>& out) {
    for (const std::string& t : row.terms) {
      std::string c = CanonicalizeTerm(t);
      if (!c.empty()) out.insert(std::move(c));
    }
  };
  return ScoreSets(SubtaskKind::kAte,
                   Index<std::string>(gold, canon, "gold"),
                   Index<std::string>(pred, canon, "predicted"), averaging);
}

ScoreReport ScoreJoint(const std::vector<SentencePairs>& gold,
                       const std::vector<SentencePairs>& pred,
                       Averaging averaging) {
  auto canon = [](const SentencePairs& row, std::set<TermPolarity>& out) {
    for (const auto& [term, polarity] : row.pairs) {
      std::string c = CanonicalizeTerm(term);
      if (!c.empty()) out.emplace(std::move(c), polarity);
    }
  };
  return ScoreSets(SubtaskKind::kJoint,
                   Index<TermPolarity>(gold, canon, "gold"),
                   Index<TermPolarity>(pred, canon, "predicted"), averaging);
}

ScoreReport ScoreAtsc(const std::vector<Polarity>& gold,
                      const std::vector<AtscLabel>& pred) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(gold.size()) + " gold samples vs " +
                    std::to_string(pred.size()) + " predictions");
  }
  constexpr AtscLabel kClasses[] = {AtscLabel::kPositive, AtscLabel::kNegative,
                                    AtscLabel::kNeutral};
  ScoreReport report;
  report.subtask = SubtaskKind::kAtsc;
  size_t correct = 0;
  std::map<AtscLabel, Support> per_class;
  for (size_t i = 0; i < gold.size(); ++i) {
    AtscLabel g = LabelFromPolarity(gold[i]);
    AtscLabel p = pred[i];
    if (g == p && g != AtscLabel::kInvalid) {
      ++correct;
      ++per_class[g].tp;
    } else {
      ++per_class[g].fn;
      ++per_class[p].fp;
    }
  }
  double p_sum = 0, r_sum = 0, f_sum = 0;
  for (AtscLabel c : kClasses) {
    const Support& s = per_class[c];
    double p = Ratio(s.tp, s.tp + s.fp);
    double r = Ratio(s.tp, s.tp + s.fn);
    p_sum += p;
    r_sum += r;
    f_sum += F1(p, r);
  }
  report.precision = p_sum / 3.0;
  report.recall = r_sum / 3.0;
  report.f1 = f_sum / 3.0;
  report.accuracy = Ratio(correct, gold.size());
  report.support.tp = correct;
  report.support.fp = gold.size() - correct;
  report.support.fn = gold.size() - correct;
  report.support.n_samples = gold.size();
  return report;
}

RunAggregate AggregateRuns(const std::vector<ScoreReport>& reports) {
  if (reports.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no reports to aggregate");
  }
  RunAggregate aggregate;
  aggregate.per_run = reports;
  aggregate.n_runs = reports.size();
  ScoreReport& mean = aggregate.mean;
  mean.subtask = reports.front().subtask;
  std::vector<double> precision, recall, f1, accuracy;
  for (const ScoreReport& r : reports) {
    if (r.subtask != mean.subtask) {
      throw Error(ErrorCode::kMixedSubtasks,
                  "cannot aggregate " + std::string(SubtaskName(r.subtask)) +
                      " with " + std::string(SubtaskName(mean.subtask)));
    }
    precision.push_back(r.precision);
    recall.push_back(r.recall);
    f1.push_back(r.f1);
    accuracy.push_back(r.accuracy.value_or(0.0));
    mean.support.tp += r.support.tp;
    mean.support.fp += r.support.fp;
    mean.support.fn += r.support.fn;
    mean.support.n_samples += r.support.n_samples;
  }
  mean.precision = SortedMean(precision);
  mean.recall = SortedMean(recall);
  mean.f1 = SortedMean(f1);
  if (mean.subtask == SubtaskKind::kAtsc) mean.accuracy = SortedMean(accuracy);
  return aggregate;
}

double RoundPercent(double ratio) {
  // The epsilon absorbs binary representation error so that exact halves
  // such as 0.92305 round up.
  return std::floor(ratio * 10000.0 + 0.5 + 1e-7) / 100.0;
}

std::string FormatPercent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", RoundPercent(ratio));
  return buf;
}

}  // namespace absa
