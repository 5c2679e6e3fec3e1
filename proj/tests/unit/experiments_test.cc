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

#include <fstream>
#include <set>

#include "absa/error.h"
#include "absa/experiments.h"
#include "doctest.h"
#include "testing/fixtures.h"

namespace absa {
namespace {

using testing::DataDir;
using testing::ScratchDir;
namespace fs = std::filesystem;

// Small fixtures stand in for all four splits.
ExperimentEnvironment SmallEnvironment(const fs::path& results) {
  ExperimentEnvironment env;
  env.corpora[{Domain::kLaptops, Split::kTrain}] = DataDir() / "laptops_sixteen.xml";
  env.corpora[{Domain::kLaptops, Split::kTest}] = DataDir() / "laptops_sixteen.xml";
  env.corpora[{Domain::kRestaurants, Split::kTrain}] = DataDir() / "reference_examples.xml";
  env.corpora[{Domain::kRestaurants, Split::kTest}] = DataDir() / "restaurants_small.xml";
  env.results_root = results;
  return env;
}

ExperimentSpec Spec(SubtaskKind k, std::vector<Domain> train, Domain test,
                    const std::string& backend = "oracle") {
  ExperimentSpec spec;
  spec.subtask = k;
  spec.variant = PromptVariant::kV2;
  spec.train_domains = std::move(train);
  spec.test_domain = test;
  spec.seeds = {0, 1};
  spec.hyperparameters = Hyperparameters::DefaultsFor(k);
  spec.backend.kind = backend;
  return spec;
}

TEST_CASE("regime and cell naming") {
  ExperimentSpec in = Spec(SubtaskKind::kAte, {Domain::kLaptops}, Domain::kLaptops);
  ExperimentSpec cross = Spec(SubtaskKind::kAte, {Domain::kRestaurants}, Domain::kLaptops);
  ExperimentSpec joint = Spec(SubtaskKind::kJoint, {Domain::kLaptops, Domain::kRestaurants},
                              Domain::kRestaurants);
  CHECK(in.regime() == Regime::kInDomain);
  CHECK(cross.regime() == Regime::kCrossDomain);
  CHECK(joint.regime() == Regime::kJointDomain);
  CHECK(joint.CellName() == "joint-v2-laptops+restaurants-to-restaurants");
  ExperimentSpec bad = in;
  bad.seeds = {1, 1};
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = in;
  bad.train_domains = {};
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("ExpandGrid covers every regime, subtask and variant") {
  auto specs = ExpandGrid({Regime::kInDomain, Regime::kCrossDomain, Regime::kJointDomain},
                          {std::begin(kAllSubtasks), std::end(kAllSubtasks)},
                          {PromptVariant::kV1, PromptVariant::kV2}, ExperimentSpec{});
  CHECK(specs.size() == 3 * 3 * 2 * 2);
  std::set<std::string> names;
  for (const auto& s : specs) names.insert(s.CellName());
  CHECK(names.size() == specs.size());
}

TEST_CASE("oracle closes every regime at 1.0") {
  ScratchDir dir("closure");
  ExperimentEnvironment env = SmallEnvironment(dir.path());
  auto specs = ExpandGrid({Regime::kInDomain, Regime::kCrossDomain, Regime::kJointDomain},
                          {std::begin(kAllSubtasks), std::end(kAllSubtasks)},
                          {PromptVariant::kV1, PromptVariant::kV2},
                          Spec(SubtaskKind::kAte, {Domain::kLaptops}, Domain::kLaptops));
  for (const ExperimentSpec& spec : specs) {
    CAPTURE(spec.CellName());
    ExperimentResult r = RunExperiment(spec, env);
    CHECK(r.aggregate.n_runs == 2);
    CHECK(r.aggregate.mean.f1 == 1.0);
    CHECK(r.aggregate.mean.precision == 1.0);
    CHECK(r.aggregate.mean.recall == 1.0);
    if (spec.subtask == SubtaskKind::kAtsc) CHECK(*r.aggregate.mean.accuracy == 1.0);
  }
  CHECK(LoadResults(dir.path()).size() == specs.size());
}

TEST_CASE("constant sentinel backend scores zero recall on ATE") {
  ScratchDir dir("constant");
  ExperimentSpec spec = Spec(SubtaskKind::kAte, {Domain::kLaptops}, Domain::kLaptops,
                             "constant");
  spec.backend.argument = "noaspectterm";
  ExperimentResult r = RunExperiment(spec, SmallEnvironment(dir.path()));
  CHECK(r.aggregate.mean.f1 == 0.0);
  CHECK(r.aggregate.mean.recall == 0.0);
}

TEST_CASE("completed seeds are resumed and artifacts are in place") {
  ScratchDir dir("resume");
  ExperimentEnvironment env = SmallEnvironment(dir.path());
  ExperimentSpec spec = Spec(SubtaskKind::kJoint, {Domain::kLaptops}, Domain::kLaptops);
  ExperimentResult first = RunExperiment(spec, env);
  CHECK(first.resumed_seeds.empty());
  fs::path seed0 = dir / "cells" / spec.CellName() / "seed-0";
  for (const char* f : {"manifest.json", "predictions.jsonl", "score.json", "COMPLETE"}) {
    CHECK(fs::exists(seed0 / f));
  }
  CHECK(fs::exists(dir / "cells" / spec.CellName() / "result.json"));

  ExperimentResult second = RunExperiment(spec, env);
  CHECK(second.resumed_seeds == std::vector<int64_t>{0, 1});
  CHECK(second.aggregate.mean.f1 == first.aggregate.mean.f1);

  // A partially written seed is redone rather than trusted.
  fs::remove(seed0 / "COMPLETE");
  ExperimentResult third = RunExperiment(spec, env);
  CHECK(third.resumed_seeds == std::vector<int64_t>{1});
}

TEST_CASE("a different backend in the same cell is rerun, not resumed") {
  ScratchDir dir("resume-backend");
  ExperimentEnvironment env = SmallEnvironment(dir.path());
  ExperimentSpec oracle = Spec(SubtaskKind::kAte, {Domain::kLaptops}, Domain::kLaptops);
  CHECK(RunExperiment(oracle, env).aggregate.mean.f1 == 1.0);
  ExperimentSpec constant = oracle;
  constant.backend.kind = "constant";
  constant.backend.argument = "noaspectterm";
  ExperimentResult r = RunExperiment(constant, env);
  CHECK(r.resumed_seeds.empty());
  CHECK(r.aggregate.mean.f1 == 0.0);
}

TEST_CASE("trained checkpoints are reused across test domains") {
  ScratchDir dir("reuse");
  ExperimentEnvironment env = SmallEnvironment(dir.path());
  ExperimentSpec a = Spec(SubtaskKind::kAte, {Domain::kLaptops}, Domain::kLaptops, "toy");
  a.seeds = {0};
  a.hyperparameters.learning_rate = 0.5;
  a.hyperparameters.train_batch_size = 1;
  a.hyperparameters.gradient_accumulation_steps = 1;
  a.hyperparameters.epochs = 20;
  ExperimentResult in_domain = RunExperiment(a, env);
  CHECK(in_domain.aggregate.mean.f1 == 1.0);
  ExperimentSpec b = a;
  b.test_domain = Domain::kRestaurants;
  ExperimentResult cross = RunExperiment(b, env);
  REQUIRE(cross.manifests.size() == 1);
  bool reused = false;
  for (const std::string& n : cross.manifests[0].notes) {
    reused = reused || n.find("checkpoint reused") != std::string::npos;
  }
  CHECK(reused);
  CHECK(cross.manifests[0].dataset_fingerprint == in_domain.manifests[0].dataset_fingerprint);
}

TEST_CASE("joint-domain manifests record the shuffle") {
  ScratchDir dir("jd");
  ExperimentSpec spec = Spec(SubtaskKind::kAte, {Domain::kLaptops, Domain::kRestaurants},
                             Domain::kLaptops);
  ExperimentResult r = RunExperiment(spec, SmallEnvironment(dir.path()));
  REQUIRE(r.manifests.size() == 2);
  CHECK(r.manifests[0].dataset_size == 16 + 6);
  CHECK(r.manifests[0].dataset_fingerprint != r.manifests[1].dataset_fingerprint);
  CHECK_FALSE(r.manifests[0].notes.empty());
}

TEST_CASE("a failing seed leaves a FAILED marker") {
  ScratchDir dir("fail");
  ExperimentEnvironment env = SmallEnvironment(dir.path());
  env.corpora.erase({Domain::kLaptops, Split::kTest});
  ExperimentSpec spec = Spec(SubtaskKind::kAte, {Domain::kLaptops}, Domain::kLaptops);
  CHECK_THROWS_AS(RunExperiment(spec, env), Error);
  CHECK(fs::exists(dir / "cells" / spec.CellName() / "seed-0" / "FAILED"));
}

TEST_CASE("ScorePredictions validates coverage") {
  Corpus gold = LoadSemevalXml(DataDir() / "edge_cases.xml", Domain::kRestaurants,
                               Split::kTest);
  std::vector<PredictionRecord> preds = {
      {"e1", SubtaskKind::kAte, std::nullopt, 0, "food"},
      {"e2", SubtaskKind::kAte, std::nullopt, 0, "pasta"},
      {"e3", SubtaskKind::kAte, std::nullopt, 0, "staff, café"}};
  ScoreReport r = ScorePredictions(gold, SubtaskKind::kAte, preds);
  CHECK(r.f1 == 1.0);
  // e4 is unrepresentable, so a prediction for it is ignored.
  preds.push_back({"e4", SubtaskKind::kAte, std::nullopt, 0, "junk"});
  CHECK(ScorePredictions(gold, SubtaskKind::kAte, preds).f1 == 1.0);
  preds.push_back({"zz", SubtaskKind::kAte, std::nullopt, 0, ""});
  CHECK_THROWS_AS(ScorePredictions(gold, SubtaskKind::kAte, preds), Error);
  preds.erase(preds.begin(), preds.begin() + 1);
  preds.pop_back();
  CHECK_THROWS_AS(ScorePredictions(gold, SubtaskKind::kAte, preds), Error);
  CHECK_THROWS_AS(ScorePredictions(gold, SubtaskKind::kJoint, preds), Error);
  CHECK_THROWS_AS(
      ScorePredictions(gold, SubtaskKind::kAtsc,
                       {{"e1", SubtaskKind::kAtsc, std::string("food"), 0, "positive"}}),
      Error);
}

TEST_CASE("plans parse grids with shared defaults") {
  nlohmann::json j = {
      {"corpora", {{"laptops", {{"train", "l.xml"}, {"test", "lt.xml"}}}}},
      {"results_dir", "out"},
      {"seeds", {3}},
      {"backend", "oracle"},
      {"grid", {{"regimes", {"in-domain", "cross-domain"}}, {"subtasks", {"joint"}},
                {"variants", {"v1"}}}},
      {"experiments", {{{"subtask", "ate"}, {"variant", "v2"}, {"train", "laptops"},
                        {"test", "laptops"}, {"seeds", {0, 1}}}}}};
  ExperimentPlan plan = ExperimentPlanFromJson(j, "/base");
  CHECK(plan.environment.corpora.at({Domain::kLaptops, Split::kTest}) == "/base/lt.xml");
  CHECK(plan.environment.results_root == "/base/out");
  REQUIRE(plan.specs.size() == 5);
  CHECK(plan.specs[0].seeds == std::vector<int64_t>{3});
  CHECK(plan.specs[0].hyperparameters.train_batch_size == 8);
  CHECK(plan.specs[4].seeds == std::vector<int64_t>{0, 1});
  CHECK(plan.specs[4].hyperparameters.train_batch_size == 16);
  CHECK_THROWS_AS(ExperimentPlanFromJson({{"experiments", {{{"subtask", "ner"}}}}}, "/"),
                  Error);
}

TEST_CASE("reference values") {
  CHECK(*ReferenceValue(Regime::kInDomain, SubtaskKind::kAte, PromptVariant::kV2,
                        Domain::kLaptops, Domain::kLaptops, "f1") == 92.30);
  CHECK(*ReferenceValue(Regime::kInDomain, SubtaskKind::kAtsc, PromptVariant::kV1,
                        Domain::kLaptops, Domain::kLaptops, "accuracy") == 88.37);
  CHECK(*ReferenceValue(Regime::kCrossDomain, SubtaskKind::kJoint, PromptVariant::kV2,
                        Domain::kLaptops, Domain::kRestaurants, "f1") == 62.95);
  CHECK(*ReferenceValue(Regime::kJointDomain, SubtaskKind::kAte, PromptVariant::kV2,
                        Domain::kMixed, Domain::kRestaurants, "f1") == 93.55);
  CHECK_FALSE(ReferenceValue(Regime::kCrossDomain, SubtaskKind::kAte, PromptVariant::kV1,
                             Domain::kLaptops, Domain::kRestaurants, "precision"));
}

TEST_CASE("tables and CSV are rendered from results") {
  ScratchDir dir("tables");
  ExperimentEnvironment env = SmallEnvironment(dir.path());
  for (SubtaskKind k : kAllSubtasks) {
    RunExperiment(Spec(k, {Domain::kLaptops}, Domain::kLaptops), env);
  }
  auto results = LoadResults(dir.path());
  std::string tables = ReproduceTables(results);
  CHECK(tables.find("In-domain ate (f1)") != std::string::npos);
  CHECK(tables.find("100.00 (92.30, +7.70)") != std::string::npos);
  CHECK(tables.find("100.00 (85.85, +14.15)") != std::string::npos);
  CHECK(tables.find("Cross-domain") != std::string::npos);
  std::string csv = ResultsCsv(results);
  CHECK(csv.rfind("regime,subtask,variant,train,test,metric,value,reference,delta,n_runs\n", 0) == 0);
  CHECK(csv.find("in-domain,atsc,v2,laptops,laptops,accuracy,100.00,85.85,+14.15,2") !=
        std::string::npos);
}

}  // namespace
}  // namespace absa
