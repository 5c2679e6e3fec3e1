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

#include "absa/experiments.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "absa/error.h"
#include "absa/text.h"

namespace absa {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr char kComplete[] = "COMPLETE";
constexpr char kFailed[] = "FAILED";

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

Domain DomainOrThrow(const std::string& s) {
  auto d = ParseDomain(s);
  if (!d || *d == Domain::kMixed) {
    throw Error(ErrorCode::kInvalidArgument, "bad domain '" + s + "'");
  }
  return *d;
}

ParseOptions ParseOptionsFor(const TargetOptions& targets) {
  ParseOptions options;
  options.ate_empty = targets.ate_empty;
  options.joint_empty = targets.joint_empty;
  options.accept_conflict =
      targets.conflict_policy == ConflictPolicy::kKeepForExtraction;
  return options;
}

// Seed-keyed Fisher-Yates; independent of the standard library's shuffle.
void ShuffleWithSeed(std::vector<PromptedExample>& examples, int64_t seed) {
  std::mt19937_64 rng(static_cast<uint64_t>(seed) ^ 0x5eedf00dULL);
  for (size_t i = examples.size(); i > 1; --i) {
    std::swap(examples[i - 1], examples[rng() % i]);
  }
}

class CorpusCache {
 public:
  explicit CorpusCache(const ExperimentEnvironment& env) : env_(env) {}

  const Corpus& Get(Domain domain, Split split) {
    auto key = std::make_pair(domain, split);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto path = env_.corpora.find(key);
    if (path == env_.corpora.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no corpus configured for " + std::string(DomainName(domain)) +
                      "/" + std::string(SplitName(split)));
    }
    return cache_.emplace(key, LoadCorpusFile(path->second, domain, split))
        .first->second;
  }

 private:
  const ExperimentEnvironment& env_;
  std::map<std::pair<Domain, Split>, Corpus> cache_;
};

struct SeedOutcome {
  ScoreReport score;
  RunManifest manifest;
  bool resumed = false;
};

std::vector<PredictionRecord> ToRecords(
    const std::vector<PromptedExample>& examples,
    const std::vector<std::string>& outputs) {
  std::vector<PredictionRecord> records;
  records.reserve(examples.size());
  for (size_t i = 0; i < examples.size(); ++i) {
    const ExampleMeta& meta = examples[i].meta;
    records.push_back(PredictionRecord{meta.sentence_id, meta.subtask,
                                       meta.aspect, meta.sample_index,
                                       outputs[i]});
  }
  return records;
}

SeedOutcome RunSeed(const ExperimentSpec& spec, int64_t seed,
                    const ExperimentEnvironment& env, const PromptConfig& config,
                    const Corpus& train_corpus, const Corpus& test_corpus,
                    const fs::path& seed_dir) {
  std::vector<PromptedExample> train_set =
      BuildDataset(config, spec.subtask, train_corpus).examples;
  std::vector<std::string> notes;
  if (spec.regime() == Regime::kJointDomain) {
    ShuffleWithSeed(train_set, seed);
    notes.push_back("joint-domain training set: laptops then restaurants, "
                    "shuffled with seed " + std::to_string(seed));
  }
  const std::string fingerprint = DatasetFingerprint(train_set);

  Hyperparameters hp = spec.hyperparameters;
  hp.seed = seed;
  const fs::path checkpoint = CheckpointDir(env.results_root, spec.subtask,
                                            spec.variant, spec.TrainKey(), seed);
  std::unique_ptr<ModelBackend> backend = MakeBackend(spec.backend, checkpoint);

  if (fs::exists(seed_dir / kComplete)) {
    std::optional<RunManifest> previous = ReadRunManifest(seed_dir / "manifest.json");
    if (previous && previous->dataset_fingerprint == fingerprint &&
        previous->hyperparameters.seed == seed &&
        previous->backend == backend->identity() &&
        fs::exists(seed_dir / "score.json")) {
      return SeedOutcome{ScoreReportFromJson(ReadJsonFile(seed_dir / "score.json")),
                         *previous, true};
    }
  }

  RunManifest manifest;
  std::optional<RunManifest> stored = ReadRunManifest(checkpoint / "manifest.json");
  if (stored && stored->dataset_fingerprint == fingerprint &&
      stored->hyperparameters.seed == seed &&
      stored->backend == backend->identity() &&
      backend->LoadCheckpoint(checkpoint)) {
    manifest = *stored;
    manifest.notes.push_back("checkpoint reused from " + checkpoint.string());
  } else {
    TrainReport report = Train(*backend, train_set, hp);
    backend->SaveCheckpoint(checkpoint);
    manifest.checkpoint_id = spec.backend.kind == "command"
                                 ? spec.backend.model
                                 : backend->identity();
    manifest.backend = backend->identity();
    manifest.subtask = std::string(SubtaskName(spec.subtask));
    manifest.variant = std::string(VariantName(spec.variant));
    manifest.train_domains = spec.TrainKey();
    manifest.hyperparameters = hp;
    manifest.dataset_fingerprint = fingerprint;
    manifest.dataset_size = train_set.size();
    manifest.report = report;
    manifest.engine_settings = backend->EngineSettings();
    manifest.notes = notes;
    WriteRunManifest(manifest, checkpoint / "manifest.json");
  }

  Dataset test_set = BuildDataset(config, spec.subtask, test_corpus);
  std::vector<std::string> outputs;
  outputs.reserve(test_set.examples.size());
  const size_t batch = std::max<size_t>(1, env.predict_batch_size);
  const DecodeOptions decode{hp.max_output_length, hp.beam_width};
  for (size_t begin = 0; begin < test_set.examples.size(); begin += batch) {
    size_t end = std::min(test_set.examples.size(), begin + batch);
    std::vector<PromptedExample> chunk(test_set.examples.begin() + begin,
                                       test_set.examples.begin() + end);
    std::vector<std::string> part = Predict(*backend, chunk, decode);
    outputs.insert(outputs.end(), part.begin(), part.end());
  }
  std::vector<PredictionRecord> records = ToRecords(test_set.examples, outputs);
  ScoreReport score = ScorePredictions(test_corpus, spec.subtask, records,
                                       config.targets);

  // Commit atomically: everything is written to a sibling directory that is
  // renamed into place last.
  fs::path staging = seed_dir;
  staging += ".tmp";
  fs::remove_all(staging);
  fs::create_directories(staging);
  WriteRunManifest(manifest, staging / "manifest.json");
  WritePredictionsJsonl(records, staging / "predictions.jsonl",
                        ParseOptionsFor(config.targets));
  WriteJsonFile(staging / "score.json", ToJson(score));
  WriteTextFile(staging / kComplete, fingerprint + "\n");
  fs::remove_all(seed_dir);
  fs::rename(staging, seed_dir);
  return SeedOutcome{score, manifest, false};
}

}  // namespace

std::string_view RegimeName(Regime r) {
  switch (r) {
    case Regime::kInDomain: return "in-domain";
    case Regime::kCrossDomain: return "cross-domain";
    case Regime::kJointDomain: return "joint-domain";
  }
  return "";
}

std::optional<Regime> ParseRegime(std::string_view s) {
  std::string lower = AsciiLower(Trim(s));
  if (lower == "in-domain" || lower == "in") return Regime::kInDomain;
  if (lower == "cross-domain" || lower == "cross") return Regime::kCrossDomain;
  if (lower == "joint-domain" || lower == "joint") return Regime::kJointDomain;
  return std::nullopt;
}

Regime ExperimentSpec::regime() const {
  if (train_domains.size() > 1) return Regime::kJointDomain;
  if (!train_domains.empty() && train_domains.front() != test_domain) {
    return Regime::kCrossDomain;
  }
  return Regime::kInDomain;
}

std::string ExperimentSpec::TrainKey() const {
  std::vector<std::string> names;
  for (Domain d : train_domains) names.emplace_back(DomainName(d));
  return Join(names, "+");
}

std::string ExperimentSpec::CellName() const {
  return std::string(SubtaskName(subtask)) + "-" +
         std::string(VariantName(variant)) + "-" + TrainKey() + "-to-" +
         std::string(DomainName(test_domain));
}

void ExperimentSpec::Validate() const {
  if (train_domains.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no training domain");
  }
  std::set<Domain> domains(train_domains.begin(), train_domains.end());
  if (domains.size() != train_domains.size() || domains.contains(Domain::kMixed)) {
    throw Error(ErrorCode::kInvalidArgument, "bad training domains");
  }
  if (test_domain == Domain::kMixed) {
    throw Error(ErrorCode::kInvalidArgument, "test domain must be a single domain");
  }
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "no seeds");
  std::set<int64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) {
    throw Error(ErrorCode::kInvalidArgument, "repeated seed");
  }
  hyperparameters.Validate();
}

json ToJson(const ExperimentSpec& spec) {
  std::vector<std::string> train;
  for (Domain d : spec.train_domains) train.emplace_back(DomainName(d));
  return json{{"subtask", std::string(SubtaskName(spec.subtask))},
              {"variant", std::string(VariantName(spec.variant))},
              {"train", train},
              {"test", std::string(DomainName(spec.test_domain))},
              {"seeds", spec.seeds},
              {"hyperparameters", ToJson(spec.hyperparameters)},
              {"backend", ToJson(spec.backend)}};
}

ExperimentSpec ExperimentSpecFromJson(const json& j) {
  try {
    ExperimentSpec spec;
    auto subtask = ParseSubtask(j.at("subtask").get<std::string>());
    auto variant = ParseVariant(j.at("variant").get<std::string>());
    if (!subtask || !variant) {
      throw Error(ErrorCode::kInvalidArgument, "bad subtask or variant");
    }
    spec.subtask = *subtask;
    spec.variant = *variant;
    const json& train = j.at("train");
    if (train.is_string()) {
      spec.train_domains.push_back(DomainOrThrow(train.get<std::string>()));
    } else {
      for (const json& d : train) {
        spec.train_domains.push_back(DomainOrThrow(d.get<std::string>()));
      }
    }
    std::sort(spec.train_domains.begin(), spec.train_domains.end());
    spec.test_domain = DomainOrThrow(j.at("test").get<std::string>());
    if (j.contains("seeds")) spec.seeds = j["seeds"].get<std::vector<int64_t>>();
    spec.hyperparameters = Hyperparameters::DefaultsFor(spec.subtask);
    if (j.contains("hyperparameters")) {
      spec.hyperparameters =
          HyperparametersFromJson(j["hyperparameters"], spec.hyperparameters);
    }
    if (j.contains("backend")) spec.backend = BackendSpecFromJson(j["backend"]);
    spec.Validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("experiment spec: ") + e.what());
  }
}

ScoreReport ScorePredictions(const Corpus& gold, SubtaskKind subtask,
                             const std::vector<PredictionRecord>& predictions,
                             const TargetOptions& targets,
                             Averaging averaging) {
  for (const PredictionRecord& r : predictions) {
    if (r.subtask != subtask) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prediction for sentence " + r.sentence_id + " is for " +
                      std::string(SubtaskName(r.subtask)) + ", expected " +
                      std::string(SubtaskName(subtask)));
    }
  }
  const ParseOptions parse = ParseOptionsFor(targets);

  if (subtask == SubtaskKind::kAtsc) {
    std::vector<AtscSample> samples = ExpandAtsc(gold).samples;
    auto key = [](const std::string& id, size_t index) {
      return id + '\x1f' + std::to_string(index);
    };
    std::map<std::string, const PredictionRecord*> by_key;
    for (const PredictionRecord& r : predictions) {
      if (!by_key.emplace(key(r.sentence_id, r.sample_index), &r).second) {
        throw Error(ErrorCode::kIdMismatch,
                    "duplicate prediction for sentence " + r.sentence_id +
                        " sample " + std::to_string(r.sample_index));
      }
    }
    if (by_key.size() != samples.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  std::to_string(samples.size()) + " gold samples vs " +
                      std::to_string(by_key.size()) + " predictions");
    }
    std::vector<Polarity> gold_labels;
    std::vector<AtscLabel> pred_labels;
    for (const AtscSample& s : samples) {
      auto it = by_key.find(key(s.sentence_id, s.aspect_index));
      if (it == by_key.end()) {
        throw Error(ErrorCode::kIdMismatch,
                    "no prediction for sentence " + s.sentence_id + " sample " +
                        std::to_string(s.aspect_index));
      }
      gold_labels.push_back(s.gold_polarity);
      pred_labels.push_back(ParseAtsc(it->second->raw).label);
    }
    return ScoreAtsc(gold_labels, pred_labels);
  }

  std::map<std::string, const ReviewSentence*> representable;
  std::set<std::string> excluded;
  for (const ReviewSentence& s : gold.sentences) {
    try {
      if (subtask == SubtaskKind::kAte) {
        RenderAteTarget(s, targets);
      } else {
        RenderJointTarget(s, targets);
      }
      representable.emplace(s.id, &s);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnrepresentableTerm) throw;
      excluded.insert(s.id);
    }
  }
  std::map<std::string, const PredictionRecord*> by_id;
  for (const PredictionRecord& r : predictions) {
    if (excluded.contains(r.sentence_id)) continue;
    if (!representable.contains(r.sentence_id)) {
      throw Error(ErrorCode::kIdMismatch,
                  "prediction for unknown sentence " + r.sentence_id);
    }
    if (!by_id.emplace(r.sentence_id, &r).second) {
      throw Error(ErrorCode::kIdMismatch,
                  "duplicate prediction for sentence " + r.sentence_id);
    }
  }
  for (const ReviewSentence& s : gold.sentences) {
    if (representable.contains(s.id) && !by_id.contains(s.id)) {
      throw Error(ErrorCode::kIdMismatch, "no prediction for sentence " + s.id);
    }
  }

  if (subtask == SubtaskKind::kAte) {
    std::vector<SentenceTerms> gold_rows, pred_rows;
    for (const auto& [id, sentence] : representable) {
      gold_rows.push_back({id, GoldTermSet(*sentence, targets.conflict_policy)});
      pred_rows.push_back({id, ParseAte(by_id.at(id)->raw, parse).terms});
    }
    return ScoreAte(gold_rows, pred_rows, averaging);
  }
  std::vector<SentencePairs> gold_rows, pred_rows;
  for (const auto& [id, sentence] : representable) {
    gold_rows.push_back({id, GoldPairSet(*sentence, targets.conflict_policy)});
    pred_rows.push_back({id, ParseJoint(by_id.at(id)->raw, parse).pairs});
  }
  return ScoreJoint(gold_rows, pred_rows, averaging);
}

json ToJson(const ScoreReport& r) {
  json j = {{"subtask", std::string(SubtaskName(r.subtask))},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"tp", r.support.tp},
            {"fp", r.support.fp},
            {"fn", r.support.fn},
            {"n_samples", r.support.n_samples}};
  if (r.accuracy) j["accuracy"] = *r.accuracy;
  return j;
}

ScoreReport ScoreReportFromJson(const json& j) {
  try {
    ScoreReport r;
    auto subtask = ParseSubtask(j.at("subtask").get<std::string>());
    if (!subtask) throw Error(ErrorCode::kSchemaViolation, "bad subtask");
    r.subtask = *subtask;
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    if (j.contains("accuracy")) r.accuracy = j["accuracy"].get<double>();
    r.support.tp = j.value("tp", size_t{0});
    r.support.fp = j.value("fp", size_t{0});
    r.support.fn = j.value("fn", size_t{0});
    r.support.n_samples = j.value("n_samples", size_t{0});
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string("score record: ") + e.what());
  }
}

json ToJson(const ExperimentResult& result) {
  json per_run = json::array();
  for (const ScoreReport& r : result.aggregate.per_run) per_run.push_back(ToJson(r));
  json manifests = json::array();
  for (const RunManifest& m : result.manifests) manifests.push_back(ToJson(m));
  return json{{"cell", result.spec.CellName()},
              {"regime", std::string(RegimeName(result.spec.regime()))},
              {"spec", ToJson(result.spec)},
              {"mean", ToJson(result.aggregate.mean)},
              {"per_run", std::move(per_run)},
              {"n_runs", result.aggregate.n_runs},
              {"manifests", std::move(manifests)},
              {"predictions_path", result.predictions_path.string()},
              {"resumed_seeds", result.resumed_seeds}};
}

ExperimentResult ExperimentResultFromJson(const json& j) {
  try {
    ExperimentResult result;
    result.spec = ExperimentSpecFromJson(j.at("spec"));
    for (const json& r : j.at("per_run")) {
      result.aggregate.per_run.push_back(ScoreReportFromJson(r));
    }
    result.aggregate.mean = ScoreReportFromJson(j.at("mean"));
    result.aggregate.n_runs = j.at("n_runs").get<size_t>();
    for (const json& m : j.value("manifests", json::array())) {
      result.manifests.push_back(RunManifestFromJson(m));
    }
    result.predictions_path = j.value("predictions_path", std::string());
    result.resumed_seeds = j.value("resumed_seeds", std::vector<int64_t>{});
    return result;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string("result record: ") + e.what());
  }
}

ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const ExperimentEnvironment& environment) {
  spec.Validate();
  PromptConfig config =
      environment.template_dir
          ? PromptConfig::FromDirectory(*environment.template_dir, spec.variant)
          : PromptConfig::Default(spec.variant);
  config.targets.conflict_policy = environment.conflict_policy;

  CorpusCache corpora(environment);
  const fs::path cell_dir = environment.results_root / "cells" / spec.CellName();
  fs::create_directories(cell_dir);

  ExperimentResult result;
  result.spec = spec;
  result.predictions_path = cell_dir;
  std::vector<ScoreReport> reports;
  for (int64_t seed : spec.seeds) {
    const fs::path seed_dir = cell_dir / ("seed-" + std::to_string(seed));
    try {
      Corpus train = corpora.Get(spec.train_domains.front(), Split::kTrain);
      for (size_t i = 1; i < spec.train_domains.size(); ++i) {
        train = MergeCorpora(train, corpora.Get(spec.train_domains[i], Split::kTrain));
      }
      const Corpus& test = corpora.Get(spec.test_domain, Split::kTest);
      SeedOutcome outcome =
          RunSeed(spec, seed, environment, config, train, test, seed_dir);
      reports.push_back(outcome.score);
      result.manifests.push_back(outcome.manifest);
      if (outcome.resumed) result.resumed_seeds.push_back(seed);
    } catch (const Error& e) {
      fs::create_directories(seed_dir);
      WriteTextFile(seed_dir / kFailed, std::string(e.what()) + "\n");
      throw Error(e.code(), "experiment " + spec.CellName() + " seed " +
                                std::to_string(seed) + ": " + e.what());
    } catch (const std::exception& e) {
      fs::create_directories(seed_dir);
      WriteTextFile(seed_dir / kFailed, std::string(e.what()) + "\n");
      throw Error(ErrorCode::kIo, "experiment " + spec.CellName() + " seed " +
                                      std::to_string(seed) + ": " + e.what());
    }
  }
  result.aggregate = AggregateRuns(reports);
  fs::path tmp = cell_dir / "result.json.tmp";
  WriteJsonFile(tmp, ToJson(result));
  fs::rename(tmp, cell_dir / "result.json");
  return result;
}

std::vector<ExperimentSpec> ExpandGrid(const std::vector<Regime>& regimes,
                                       const std::vector<SubtaskKind>& subtasks,
                                       const std::vector<PromptVariant>& variants,
                                       const ExperimentSpec& base) {
  using Cell = std::pair<std::vector<Domain>, Domain>;
  const Domain L = Domain::kLaptops, R = Domain::kRestaurants;
  std::vector<ExperimentSpec> specs;
  for (Regime regime : regimes) {
    std::vector<Cell> cells;
    switch (regime) {
      case Regime::kInDomain: cells = {{{L}, L}, {{R}, R}}; break;
      case Regime::kCrossDomain: cells = {{{R}, L}, {{L}, R}}; break;
      case Regime::kJointDomain: cells = {{{L, R}, L}, {{L, R}, R}}; break;
    }
    for (SubtaskKind subtask : subtasks) {
      for (PromptVariant variant : variants) {
        for (const auto& [train, test] : cells) {
          ExperimentSpec spec = base;
          spec.subtask = subtask;
          spec.variant = variant;
          spec.train_domains = train;
          spec.test_domain = test;
          specs.push_back(std::move(spec));
        }
      }
    }
  }
  return specs;
}

ExperimentPlan ExperimentPlanFromJson(const json& j, const fs::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  ExperimentPlan plan;
  try {
    if (j.contains("corpora")) {
      for (const auto& [domain_name, splits] : j["corpora"].items()) {
        Domain domain = DomainOrThrow(domain_name);
        for (const auto& [split_name, path] : splits.items()) {
          auto split = ParseSplit(split_name);
          if (!split) {
            throw Error(ErrorCode::kInvalidArgument, "bad split '" + split_name + "'");
          }
          plan.environment.corpora[{domain, *split}] =
              resolve(path.get<std::string>());
        }
      }
    }
    plan.environment.results_root =
        resolve(j.value("results_dir", std::string("results")));
    if (const char* root = std::getenv("ABSA_STORAGE_ROOT");
        root != nullptr && *root != '\0') {
      plan.environment.results_root = root;
    }
    if (j.contains("templates")) {
      plan.environment.template_dir = resolve(j["templates"].get<std::string>());
    }
    std::string conflict = j.value("conflict_policy", std::string("drop"));
    if (conflict == "drop") {
      plan.environment.conflict_policy = ConflictPolicy::kDropEverywhere;
    } else if (conflict == "keep-for-extraction") {
      plan.environment.conflict_policy = ConflictPolicy::kKeepForExtraction;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "conflict_policy must be drop or keep-for-extraction");
    }
    plan.environment.predict_batch_size =
        j.value("predict_batch_size", plan.environment.predict_batch_size);

    // Defaults shared by grid cells and explicit experiments.
    json defaults = json::object();
    for (const char* key : {"seeds", "backend", "hyperparameters"}) {
      if (j.contains(key)) defaults[key] = j[key];
    }
    auto with_defaults = [&](json cell) {
      for (const auto& [key, value] : defaults.items()) {
        if (!cell.contains(key)) cell[key] = value;
      }
      return cell;
    };

    if (j.contains("grid")) {
      const json& grid = j["grid"];
      std::vector<Regime> regimes;
      for (const json& r : grid.value("regimes", json::array({"in-domain"}))) {
        auto regime = ParseRegime(r.get<std::string>());
        if (!regime) throw Error(ErrorCode::kInvalidArgument, "bad regime");
        regimes.push_back(*regime);
      }
      std::vector<SubtaskKind> subtasks;
      for (const json& s : grid.value("subtasks", json::array({"ate", "atsc", "joint"}))) {
        auto subtask = ParseSubtask(s.get<std::string>());
        if (!subtask) throw Error(ErrorCode::kInvalidArgument, "bad subtask");
        subtasks.push_back(*subtask);
      }
      std::vector<PromptVariant> variants;
      for (const json& v : grid.value("variants", json::array({"v1", "v2"}))) {
        auto variant = ParseVariant(v.get<std::string>());
        if (!variant) throw Error(ErrorCode::kInvalidArgument, "bad variant");
        variants.push_back(*variant);
      }
      for (const ExperimentSpec& cell :
           ExpandGrid(regimes, subtasks, variants, ExperimentSpec{})) {
        // Round-trip through JSON so per-subtask hyperparameter defaults and
        // the shared overrides apply exactly as for explicit experiments.
        json cell_json = ToJson(cell);
        cell_json.erase("seeds");
        cell_json.erase("backend");
        cell_json.erase("hyperparameters");
        plan.specs.push_back(ExperimentSpecFromJson(with_defaults(cell_json)));
      }
    }
    for (const json& e : j.value("experiments", json::array())) {
      plan.specs.push_back(ExperimentSpecFromJson(with_defaults(e)));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("experiment plan: ") + e.what());
  }
  return plan;
}

ExperimentPlan ReadExperimentPlan(const fs::path& path) {
  return ExperimentPlanFromJson(ReadJsonFile(path),
                                fs::absolute(path).parent_path());
}

std::vector<ExperimentResult> LoadResults(const fs::path& results_root) {
  std::vector<fs::path> files;
  const fs::path cells = results_root / "cells";
  if (fs::is_directory(cells)) {
    for (const auto& entry : fs::directory_iterator(cells)) {
      fs::path file = entry.path() / "result.json";
      if (fs::exists(file)) files.push_back(file);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ExperimentResult> results;
  for (const fs::path& file : files) {
    results.push_back(ExperimentResultFromJson(ReadJsonFile(file)));
  }
  return results;
}

}  // namespace absa
