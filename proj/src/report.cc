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

#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "absa/experiments.h"

namespace absa {
namespace {

constexpr Domain kL = Domain::kLaptops;
constexpr Domain kR = Domain::kRestaurants;
constexpr Domain kBoth = Domain::kMixed;  // joint-domain training key

struct RefKey {
  Regime regime;
  SubtaskKind subtask;
  PromptVariant variant;
  Domain train;
  Domain test;
  std::string metric;
  auto operator<=>(const RefKey&) const = default;
};

const std::map<RefKey, double>& ReferenceTable() {
  static const std::map<RefKey, double> table = [] {
    using enum SubtaskKind;
    using enum PromptVariant;
    std::map<RefKey, double> t;
    auto in = [&](SubtaskKind s, PromptVariant v, Domain d, const char* m,
                  double x) { t[{Regime::kInDomain, s, v, d, d, m}] = x; };
    // Headline in-domain numbers.
    in(kAte, kV1, kL, "f1", 91.40);
    in(kAte, kV1, kR, "f1", 92.76);
    in(kAte, kV2, kL, "f1", 92.30);
    in(kAte, kV2, kR, "f1", 92.10);
    in(kAtsc, kV1, kL, "accuracy", 88.37);
    in(kAtsc, kV1, kR, "accuracy", 87.42);
    in(kAtsc, kV2, kL, "accuracy", 85.85);
    in(kAtsc, kV2, kR, "accuracy", 89.76);
    in(kJoint, kV1, kL, "f1", 78.89);
    in(kJoint, kV1, kR, "f1", 76.16);
    in(kJoint, kV2, kL, "f1", 79.34);
    in(kJoint, kV2, kR, "f1", 79.47);
    // Detail breakdowns.
    in(kAte, kV1, kL, "precision", 93.92);
    in(kAte, kV1, kL, "recall", 92.82);
    in(kAte, kV1, kR, "precision", 94.60);
    in(kAte, kV1, kR, "recall", 90.98);
    in(kAte, kV2, kL, "precision", 92.84);
    in(kAte, kV2, kL, "recall", 91.76);
    in(kAte, kV2, kR, "precision", 93.49);
    in(kAte, kV2, kR, "recall", 90.75);
    in(kAtsc, kV1, kL, "f1", 87.71);
    in(kAtsc, kV1, kR, "f1", 86.05);
    in(kAtsc, kV2, kL, "f1", 84.84);
    in(kAtsc, kV2, kR, "f1", 88.34);
    in(kJoint, kV1, kL, "precision", 80.11);
    in(kJoint, kV1, kL, "recall", 77.71);
    in(kJoint, kV1, kR, "precision", 77.86);
    in(kJoint, kV1, kR, "recall", 74.53);
    in(kJoint, kV2, kL, "precision", 80.42);
    in(kJoint, kV2, kL, "recall", 78.29);
    in(kJoint, kV2, kR, "precision", 82.45);
    in(kJoint, kV2, kR, "recall", 76.70);

    auto three = [&](Regime r, PromptVariant v, Domain train, Domain test,
                     double ate, double atsc, double joint) {
      t[{r, kAte, v, train, test, "f1"}] = ate;
      t[{r, kAtsc, v, train, test, "accuracy"}] = atsc;
      t[{r, kJoint, v, train, test, "f1"}] = joint;
    };
    three(Regime::kCrossDomain, kV1, kR, kL, 71.98, 87.20, 64.30);
    three(Regime::kCrossDomain, kV2, kR, kL, 71.83, 82.75, 65.30);
    three(Regime::kCrossDomain, kV1, kL, kR, 62.85, 85.91, 55.06);
    three(Regime::kCrossDomain, kV2, kL, kR, 76.85, 83.05, 62.95);
    three(Regime::kJointDomain, kV1, kBoth, kL, 90.35, 88.47, 80.07);
    three(Regime::kJointDomain, kV2, kBoth, kL, 93.28, 87.30, 80.47);
    three(Regime::kJointDomain, kV1, kBoth, kR, 88.88, 88.30, 80.81);
    three(Regime::kJointDomain, kV2, kBoth, kR, 93.55, 88.62, 79.70);
    return t;
  }();
  return table;
}

Domain TrainDomainKey(const ExperimentSpec& spec) {
  return spec.train_domains.size() == 1 ? spec.train_domains.front() : kBoth;
}

std::optional<double> MetricValue(const ScoreReport& r, std::string_view metric) {
  if (metric == "f1") return r.f1;
  if (metric == "precision") return r.precision;
  if (metric == "recall") return r.recall;
  if (metric == "accuracy") return r.accuracy;
  return std::nullopt;
}

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string SignedFixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f", v);
  return buf;
}

class ResultIndex {
 public:
  explicit ResultIndex(const std::vector<ExperimentResult>& results) {
    for (const ExperimentResult& r : results) {
      const ExperimentSpec& s = r.spec;
      index_[{s.regime(), s.subtask, s.variant, TrainDomainKey(s), s.test_domain}] = &r;
    }
  }

  std::optional<double> Percent(Regime regime, SubtaskKind subtask,
                                PromptVariant variant, Domain train, Domain test,
                                std::string_view metric) const {
    auto it = index_.find({regime, subtask, variant, train, test});
    if (it == index_.end()) return std::nullopt;
    auto v = MetricValue(it->second->aggregate.mean, metric);
    if (!v) return std::nullopt;
    return RoundPercent(*v);
  }

  // "ours (ref, delta)", with "-" for a missing side.
  std::string Cell(Regime regime, SubtaskKind subtask, PromptVariant variant,
                   Domain train, Domain test, std::string_view metric) const {
    auto ours = Percent(regime, subtask, variant, train, test, metric);
    auto ref = ReferenceValue(regime, subtask, variant, train, test, metric);
    std::string out = ours ? Fixed2(*ours) : "-";
    out += " (" + (ref ? Fixed2(*ref) : std::string("-"));
    if (ours && ref) out += ", " + SignedFixed2(*ours - *ref);
    return out + ")";
  }

 private:
  std::map<std::tuple<Regime, SubtaskKind, PromptVariant, Domain, Domain>,
           const ExperimentResult*>
      index_;
};

void AppendRow(std::ostringstream& out, const std::vector<std::string>& cells) {
  constexpr int kFirst = 22;
  constexpr int kOther = 24;
  for (size_t i = 0; i < cells.size(); ++i) {
    int width = i == 0 ? kFirst : kOther;
    std::string c = cells[i];
    if (static_cast<int>(c.size()) < width) c.append(width - c.size(), ' ');
    out << c;
  }
  out << '\n';
}

std::string MetricLabel(SubtaskKind s) {
  return s == SubtaskKind::kAtsc ? "accuracy" : "f1";
}

}  // namespace

std::optional<double> ReferenceValue(Regime regime, SubtaskKind subtask,
                                     PromptVariant variant, Domain train,
                                     Domain test, std::string_view metric) {
  const auto& table = ReferenceTable();
  auto it = table.find(
      RefKey{regime, subtask, variant, train, test, std::string(metric)});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string ReproduceTables(const std::vector<ExperimentResult>& results) {
  ResultIndex idx(results);
  std::ostringstream out;
  out << "Cells read: ours (reference, ours minus reference), percent.\n\n";

  for (SubtaskKind s : kAllSubtasks) {
    const std::string metric = MetricLabel(s);
    out << "In-domain " << SubtaskName(s) << " (" << metric << ")\n";
    AppendRow(out, {"variant", "laptops", "restaurants"});
    for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
      AppendRow(out, {std::string(VariantName(v)),
                      idx.Cell(Regime::kInDomain, s, v, kL, kL, metric),
                      idx.Cell(Regime::kInDomain, s, v, kR, kR, metric)});
    }
    out << '\n';
  }

  const std::vector<std::string> header = {"", "ate f1", "atsc accuracy",
                                           "joint f1"};
  auto three_row = [&](Regime regime, PromptVariant v, Domain train,
                       Domain test, std::string label) {
    std::vector<std::string> row = {std::move(label)};
    for (SubtaskKind s : kAllSubtasks) {
      row.push_back(idx.Cell(regime, s, v, train, test, MetricLabel(s)));
    }
    AppendRow(out, row);
  };

  out << "Cross-domain\n";
  AppendRow(out, header);
  for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
    std::string name(VariantName(v));
    three_row(Regime::kCrossDomain, v, kR, kL, name + " rest->lapt");
    three_row(Regime::kCrossDomain, v, kL, kR, name + " lapt->rest");
  }
  out << '\n';

  out << "Joint-domain (trained on both)\n";
  AppendRow(out, header);
  for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
    std::string name(VariantName(v));
    three_row(Regime::kJointDomain, v, kBoth, kL, name + " test lapt");
    three_row(Regime::kJointDomain, v, kBoth, kR, name + " test rest");
  }
  out << '\n';

  out << "In-domain detail\n";
  for (SubtaskKind s : kAllSubtasks) {
    std::vector<std::string> metrics =
        s == SubtaskKind::kAtsc
            ? std::vector<std::string>{"accuracy", "f1"}
            : std::vector<std::string>{"precision", "recall", "f1"};
    for (Domain d : {kL, kR}) {
      std::vector<std::string> head = {std::string(SubtaskName(s)) + " " +
                                       std::string(DomainName(d))};
      head.insert(head.end(), metrics.begin(), metrics.end());
      AppendRow(out, head);
      for (PromptVariant v : {PromptVariant::kV1, PromptVariant::kV2}) {
        std::vector<std::string> row = {std::string(VariantName(v))};
        for (const std::string& m : metrics) {
          row.push_back(idx.Cell(Regime::kInDomain, s, v, d, d, m));
        }
        AppendRow(out, row);
      }
    }
  }
  return out.str();
}

std::string ResultsCsv(const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "regime,subtask,variant,train,test,metric,value,reference,delta,n_runs\n";
  for (const ExperimentResult& r : results) {
    const ExperimentSpec& s = r.spec;
    const Domain train = TrainDomainKey(s);
    std::vector<std::string> metrics = {"precision", "recall", "f1"};
    if (s.subtask == SubtaskKind::kAtsc) metrics.insert(metrics.begin(), "accuracy");
    for (const std::string& m : metrics) {
      auto v = MetricValue(r.aggregate.mean, m);
      if (!v) continue;
      double ours = RoundPercent(*v);
      auto ref = ReferenceValue(s.regime(), s.subtask, s.variant, train,
                                s.test_domain, m);
      out << RegimeName(s.regime()) << ',' << SubtaskName(s.subtask) << ','
          << VariantName(s.variant) << ',' << s.TrainKey() << ','
          << DomainName(s.test_domain) << ',' << m << ',' << Fixed2(ours) << ','
          << (ref ? Fixed2(*ref) : "") << ','
          << (ref ? SignedFixed2(ours - *ref) : "") << ',' << r.aggregate.n_runs
          << '\n';
    }
  }
  return out.str();
}

}  // namespace absa
