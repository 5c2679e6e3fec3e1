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

#ifndef ABSA_EXPERIMENTS_H_
#define ABSA_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absa/backend.h"
#include "absa/corpus.h"
#include "absa/decoding.h"
#include "absa/metrics.h"
#include "absa/prompting.h"
#include "json.hpp"

namespace absa {

enum class Regime { kInDomain, kCrossDomain, kJointDomain };

std::string_view RegimeName(Regime r);  // in-domain, cross-domain, joint-domain
std::optional<Regime> ParseRegime(std::string_view s);

struct ExperimentSpec {
  SubtaskKind subtask = SubtaskKind::kAte;
  PromptVariant variant = PromptVariant::kV2;
  std::vector<Domain> train_domains;  // laptops before restaurants
  Domain test_domain = Domain::kLaptops;
  std::vector<int64_t> seeds = {0, 1, 2, 3, 4};
  Hyperparameters hyperparameters;
  BackendSpec backend;

  Regime regime() const;
  // "laptops" or "laptops+restaurants".
  std::string TrainKey() const;
  // Directory-safe cell name, e.g. "ate-v2-laptops-to-restaurants".
  std::string CellName() const;
  // Throws kInvalidArgument: empty or repeated train domains, mixed domains,
  // empty or repeated seeds.
  void Validate() const;
};

nlohmann::json ToJson(const ExperimentSpec& spec);
ExperimentSpec ExperimentSpecFromJson(const nlohmann::json& j);

// Where corpora, templates and results live.
struct ExperimentEnvironment {
  std::map<std::pair<Domain, Split>, std::filesystem::path> corpora;
  std::filesystem::path results_root = "results";
  std::optional<std::filesystem::path> template_dir;
  ConflictPolicy conflict_policy = ConflictPolicy::kDropEverywhere;
  size_t predict_batch_size = 64;
};

struct ExperimentResult {
  ExperimentSpec spec;
  RunAggregate aggregate;
  std::vector<RunManifest> manifests;
  std::filesystem::path predictions_path;  // the cell directory
  std::vector<int64_t> resumed_seeds;      // seeds loaded from a prior run
};

// Builds, trains, predicts, parses and scores every seed of `spec`, then
// aggregates. Completed seeds already in the results store (same seed and
// dataset fingerprint) are loaded instead of rerun. Failures leave a FAILED
// marker in the seed directory and are rethrown with the cell attached.
//
// Layout under environment.results_root:
//   cells/<cell>/result.json
//   cells/<cell>/seed-<n>/{manifest.json,predictions.jsonl,score.json,COMPLETE}
//   checkpoints/<subtask>/<variant>/<train>/seed-<n>/
ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const ExperimentEnvironment& environment);

// The standard cells of each regime, in a fixed order: regimes as given,
// then subtasks, variants, and (train, test) pairs. Cross-domain lists
// restaurants->laptops first, matching the published table.
std::vector<ExperimentSpec> ExpandGrid(const std::vector<Regime>& regimes,
                                       const std::vector<SubtaskKind>& subtasks,
                                       const std::vector<PromptVariant>& variants,
                                       const ExperimentSpec& base);

struct ExperimentPlan {
  ExperimentEnvironment environment;
  std::vector<ExperimentSpec> specs;
};

// Reads a JSON spec file; relative paths resolve against the file's
// directory. ABSA_STORAGE_ROOT, when set, overrides the results directory.
ExperimentPlan ReadExperimentPlan(const std::filesystem::path& path);
ExperimentPlan ExperimentPlanFromJson(const nlohmann::json& j,
                                      const std::filesystem::path& base_dir);

// Scores serialized predictions against a corpus. ATE/joint gold covers the
// representable sentences (those BuildDataset keeps); predictions for the
// unrepresentable ones are ignored. Throws kIdMismatch / kLengthMismatch.
ScoreReport ScorePredictions(const Corpus& gold, SubtaskKind subtask,
                             const std::vector<PredictionRecord>& predictions,
                             const TargetOptions& targets = {},
                             Averaging averaging = Averaging::kMicro);

nlohmann::json ToJson(const ScoreReport& report);
ScoreReport ScoreReportFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const ExperimentResult& result);
ExperimentResult ExperimentResultFromJson(const nlohmann::json& j);

// Every cells/*/result.json under `results_root`, sorted by cell name.
std::vector<ExperimentResult> LoadResults(
    const std::filesystem::path& results_root);

// Published reference value (percent) for a cell, if one exists. `metric` is
// "f1", "accuracy", "precision" or "recall".
std::optional<double> ReferenceValue(Regime regime, SubtaskKind subtask,
                                     PromptVariant variant, Domain train,
                                     Domain test, std::string_view metric);

// Plain-text tables laid out like the published ones (in-domain per subtask,
// cross-domain, joint-domain, precision/recall detail), each cell showing
// this run's mean next to the reference value and the delta.
std::string ReproduceTables(const std::vector<ExperimentResult>& results);

// One row per (cell, metric): regime,subtask,variant,train,test,metric,
// value,reference,delta,n_runs.
std::string ResultsCsv(const std::vector<ExperimentResult>& results);

}  // namespace absa

#endif  // ABSA_EXPERIMENTS_H_
