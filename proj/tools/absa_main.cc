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

// Command-line front end: one subcommand per pipeline stage. Every command
// accepts --format text|jsonl; the jsonl form is a single JSON object per
// invocation carrying the same fields as the text lines.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absa/backend.h"
#include "absa/corpus.h"
#include "absa/decoding.h"
#include "absa/error.h"
#include "absa/experiments.h"
#include "absa/metrics.h"
#include "absa/prompting.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Emitter {
 public:
  explicit Emitter(bool as_json) : as_json_(as_json) {}

  void Field(const std::string& key, json value, const std::string& line) {
    if (as_json_) {
      object_[key] = std::move(value);
    } else {
      std::cout << line << '\n';
    }
  }

  void Flush() {
    if (as_json_) std::cout << object_.dump() << '\n';
  }

 private:
  bool as_json_;
  json object_ = json::object();
};

struct CommonOptions {
  std::string format = "text";
  bool Json() const { return format == "jsonl"; }
};

template <typename T, typename Parser>
T ParseOrThrow(const std::string& value, Parser parser, const char* what) {
  auto parsed = parser(value);
  if (!parsed) {
    throw absa::Error(absa::ErrorCode::kInvalidArgument,
                      std::string("unknown ") + what + " '" + value + "'");
  }
  return *parsed;
}

absa::ConflictPolicy ParseConflictPolicy(const std::string& s) {
  if (s == "drop") return absa::ConflictPolicy::kDropEverywhere;
  if (s == "keep-for-extraction") return absa::ConflictPolicy::kKeepForExtraction;
  throw absa::Error(absa::ErrorCode::kInvalidArgument,
                    "conflict policy must be drop or keep-for-extraction");
}

// Scores print as ratios with two decimals ("f1 1.00"); tables use percent.
std::string Ratio(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

void EmitStats(Emitter& out, const absa::StatsRecord& stats) {
  out.Field("sentences", stats.sentences,
            std::to_string(stats.sentences) + " sentences");
  out.Field("aspects", stats.aspects, std::to_string(stats.aspects) + " aspects");
  json histogram = json::object();
  std::string line = "aspects per sentence:";
  for (const auto& [k, n] : stats.aspect_histogram) {
    histogram[std::to_string(k)] = n;
    line += " " + std::to_string(k) + "=" + std::to_string(n);
  }
  out.Field("aspect_histogram", histogram, line);
  out.Field("polarity",
            json{{"positive", stats.positive},
                 {"negative", stats.negative},
                 {"neutral", stats.neutral},
                 {"conflict", stats.conflict}},
            "polarity: positive=" + std::to_string(stats.positive) +
                " negative=" + std::to_string(stats.negative) +
                " neutral=" + std::to_string(stats.neutral) +
                " conflict=" + std::to_string(stats.conflict));
}

void EmitScore(Emitter& out, const absa::ScoreReport& r) {
  out.Field("subtask", std::string(absa::SubtaskName(r.subtask)),
            "subtask " + std::string(absa::SubtaskName(r.subtask)));
  if (r.accuracy) {
    out.Field("accuracy", *r.accuracy, "accuracy " + Ratio(*r.accuracy));
  }
  out.Field("precision", r.precision, "precision " + Ratio(r.precision));
  out.Field("recall", r.recall, "recall " + Ratio(r.recall));
  out.Field("f1", r.f1, "f1 " + Ratio(r.f1));
  out.Field("support",
            json{{"tp", r.support.tp},
                 {"fp", r.support.fp},
                 {"fn", r.support.fn},
                 {"n_samples", r.support.n_samples}},
            "support tp=" + std::to_string(r.support.tp) +
                " fp=" + std::to_string(r.support.fp) +
                " fn=" + std::to_string(r.support.fn) +
                " n=" + std::to_string(r.support.n_samples));
}

absa::PromptConfig MakePromptConfig(absa::PromptVariant variant,
                                    const std::string& template_dir,
                                    const std::string& conflict_policy) {
  absa::PromptConfig config =
      template_dir.empty() ? absa::PromptConfig::Default(variant)
                           : absa::PromptConfig::FromDirectory(template_dir, variant);
  config.targets.conflict_policy = ParseConflictPolicy(conflict_policy);
  return config;
}

absa::BackendSpec MakeBackendSpec(const std::string& kind,
                                  const std::string& argument,
                                  const std::string& model) {
  absa::BackendSpec spec;
  spec.kind = kind;
  spec.argument = argument;
  if (!model.empty()) spec.model = model;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instruction-prompted aspect-based sentiment analysis pipeline"};
  app.require_subcommand(1, 1);
  CommonOptions common;
  app.add_option("--format", common.format, "Output mode")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->capture_default_str();

  std::function<void(Emitter&)> action;

  // ingest
  std::string input, domain_name, split_name, out_path;
  auto* ingest = app.add_subcommand("ingest", "Load a SemEval XML file and write JSONL");
  ingest->add_option("--input", input, "SemEval XML file")->required();
  ingest->add_option("--domain", domain_name, "laptops|restaurants")->required();
  ingest->add_option("--split", split_name, "train|test")->required();
  ingest->add_option("--out", out_path, "Output JSONL corpus")->required();
  ingest->callback([&] {
    action = [&](Emitter& out) {
      auto domain = ParseOrThrow<absa::Domain>(domain_name, absa::ParseDomain, "domain");
      auto split = ParseOrThrow<absa::Split>(split_name, absa::ParseSplit, "split");
      absa::LoadDiagnostics diag;
      absa::Corpus corpus = absa::LoadSemevalXml(input, domain, split, &diag);
      absa::WriteCorpusJsonl(corpus, fs::path(out_path));
      for (const std::string& w : diag.warnings) std::cerr << "warning: " << w << '\n';
      EmitStats(out, absa::ComputeStats(corpus));
      out.Field("merged_duplicate_aspects", diag.merged_duplicate_aspects,
                std::to_string(diag.merged_duplicate_aspects) +
                    " duplicate aspects merged");
    };
  });

  // stats
  std::string corpus_path;
  auto* stats = app.add_subcommand("stats", "Print corpus statistics");
  stats->add_option("--corpus", corpus_path, "JSONL corpus or SemEval XML")->required();
  stats->add_option("--domain", domain_name, "Domain (XML input only)");
  stats->add_option("--split", split_name, "Split (XML input only)");
  stats->callback([&] {
    action = [&](Emitter& out) {
      std::optional<absa::Domain> domain;
      std::optional<absa::Split> split;
      if (!domain_name.empty()) {
        domain = ParseOrThrow<absa::Domain>(domain_name, absa::ParseDomain, "domain");
      }
      if (!split_name.empty()) {
        split = ParseOrThrow<absa::Split>(split_name, absa::ParseSplit, "split");
      }
      absa::Corpus corpus = absa::LoadCorpusFile(corpus_path, domain, split);
      EmitStats(out, absa::ComputeStats(corpus));
      out.Field("atsc_samples", absa::ExpandAtsc(corpus).samples.size(),
                std::to_string(absa::ExpandAtsc(corpus).samples.size()) +
                    " sentiment samples");
    };
  });

  // build-prompts
  std::string subtask_name, variant_name = "v2", template_dir,
                            conflict_policy = "drop";
  size_t max_unrepresentable = 10;
  auto* build = app.add_subcommand("build-prompts", "Render a prompted dataset");
  build->add_option("--corpus", corpus_path, "JSONL corpus")->required();
  build->add_option("--subtask", subtask_name, "ate|atsc|joint")
      ->required()
      ->check(CLI::IsMember({"ate", "atsc", "joint"}));
  build->add_option("--variant", variant_name, "v1|v2")
      ->check(CLI::IsMember({"v1", "v2"}))
      ->capture_default_str();
  build->add_option("--out", out_path, "Output JSONL dataset")->required();
  build->add_option("--templates", template_dir, "Directory with *.tmpl overrides");
  build->add_option("--conflict-policy", conflict_policy,
                    "drop|keep-for-extraction")
      ->capture_default_str();
  build->add_option("--max-unrepresentable", max_unrepresentable,
                    "Fail when more sentences than this cannot be rendered")
      ->capture_default_str();
  build->callback([&] {
    action = [&](Emitter& out) {
      auto subtask = *absa::ParseSubtask(subtask_name);
      auto variant = *absa::ParseVariant(variant_name);
      absa::PromptConfig config = MakePromptConfig(variant, template_dir, conflict_policy);
      absa::Corpus corpus = absa::LoadCorpusFile(corpus_path, std::nullopt, std::nullopt);
      absa::Dataset dataset = absa::BuildDataset(config, subtask, corpus);
      json skipped = json::array();
      for (const absa::SkippedSentence& s : dataset.skipped) {
        std::cerr << "unrepresentable: " << s.sentence_id << ": " << s.reason << '\n';
        skipped.push_back(json{{"sentence_id", s.sentence_id}, {"reason", s.reason}});
      }
      if (dataset.skipped.size() > max_unrepresentable) {
        throw absa::Error(absa::ErrorCode::kUnrepresentableTerm,
                          std::to_string(dataset.skipped.size()) +
                              " unrepresentable sentences exceed the limit of " +
                              std::to_string(max_unrepresentable));
      }
      absa::WritePromptedJsonl(dataset.examples, fs::path(out_path));
      out.Field("examples", dataset.examples.size(),
                std::to_string(dataset.examples.size()) + " examples");
      out.Field("unrepresentable", skipped,
                std::to_string(skipped.size()) + " unrepresentable sentences");
      out.Field("dropped_conflict", dataset.dropped_conflict,
                std::to_string(dataset.dropped_conflict) + " conflict aspects dropped");
    };
  });

  // train
  std::string data_path, backend_kind = "toy", backend_arg, model, checkpoint,
                         hparams_path;
  std::optional<double> lr;
  std::optional<int64_t> batch_size, epochs, seed;
  auto* train = app.add_subcommand("train", "Fine-tune a backend on a prompted dataset");
  train->add_option("--data", data_path, "Prompted JSONL dataset")->required();
  train->add_option("--backend", backend_kind,
                    "oracle|constant|echo-tail|toy|command")
      ->capture_default_str();
  train->add_option("--backend-arg", backend_arg,
                    "Constant output, or adapter command for 'command'");
  train->add_option("--model", model, "Base checkpoint identifier");
  train->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  train->add_option("--hparams", hparams_path, "JSON hyperparameter overrides");
  train->add_option("--lr", lr, "Learning rate");
  train->add_option("--batch-size", batch_size, "Per-step batch size");
  train->add_option("--epochs", epochs, "Training epochs");
  train->add_option("--seed", seed, "Random seed");
  train->callback([&] {
    action = [&](Emitter& out) {
      std::vector<absa::PromptedExample> data = absa::ReadPromptedJsonl(fs::path(data_path));
      if (data.empty()) {
        throw absa::Error(absa::ErrorCode::kEmptyInput, "empty dataset " + data_path);
      }
      const absa::SubtaskKind subtask = data.front().meta.subtask;
      absa::Hyperparameters hp = absa::Hyperparameters::DefaultsFor(subtask);
      if (!hparams_path.empty()) {
        std::ifstream in(hparams_path);
        if (!in) throw absa::Error(absa::ErrorCode::kIo, "cannot open " + hparams_path);
        hp = absa::HyperparametersFromJson(json::parse(in), hp);
      }
      if (lr) hp.learning_rate = *lr;
      if (batch_size) hp.train_batch_size = *batch_size;
      if (epochs) hp.epochs = *epochs;
      if (seed) hp.seed = *seed;
      absa::BackendSpec spec = MakeBackendSpec(backend_kind, backend_arg, model);
      auto backend = absa::MakeBackend(spec, checkpoint);
      absa::TrainReport report = absa::Train(*backend, data, hp);
      backend->SaveCheckpoint(checkpoint);

      absa::RunManifest manifest;
      manifest.checkpoint_id = spec.kind == "command" ? spec.model : backend->identity();
      manifest.backend = backend->identity();
      manifest.subtask = std::string(absa::SubtaskName(subtask));
      manifest.hyperparameters = hp;
      manifest.dataset_fingerprint = absa::DatasetFingerprint(data);
      manifest.dataset_size = data.size();
      manifest.report = report;
      manifest.engine_settings = backend->EngineSettings();
      absa::WriteRunManifest(manifest, fs::path(checkpoint) / "manifest.json");

      out.Field("examples", data.size(), std::to_string(data.size()) + " examples");
      out.Field("steps", report.steps, std::to_string(report.steps) + " steps");
      char loss[64];
      std::snprintf(loss, sizeof loss, "final loss %.6f", report.final_loss);
      out.Field("final_loss", report.final_loss, loss);
      out.Field("checkpoint", checkpoint, "checkpoint " + checkpoint);
    };
  });

  // predict
  int64_t max_length = 128, beam = 1;
  auto* predict = app.add_subcommand("predict", "Generate outputs for a prompted dataset");
  predict->add_option("--data", data_path, "Prompted JSONL dataset")->required();
  predict->add_option("--backend", backend_kind, "Backend kind")->capture_default_str();
  predict->add_option("--backend-arg", backend_arg, "Backend argument");
  predict->add_option("--model", model, "Base checkpoint identifier");
  predict->add_option("--checkpoint", checkpoint, "Trained checkpoint directory");
  predict->add_option("--out", out_path, "Output predictions JSONL")->required();
  predict->add_option("--max-length", max_length, "Maximum output tokens")
      ->capture_default_str();
  predict->add_option("--beam", beam, "Beam width (1 = greedy)")->capture_default_str();
  predict->callback([&] {
    action = [&](Emitter& out) {
      std::vector<absa::PromptedExample> data = absa::ReadPromptedJsonl(fs::path(data_path));
      absa::BackendSpec spec = MakeBackendSpec(backend_kind, backend_arg, model);
      fs::path work = checkpoint.empty() ? fs::temp_directory_path() : fs::path(checkpoint);
      auto backend = absa::MakeBackend(spec, work);
      if (!checkpoint.empty() && !backend->LoadCheckpoint(checkpoint)) {
        throw absa::Error(absa::ErrorCode::kBackendUnavailable,
                          "cannot load checkpoint " + checkpoint);
      }
      std::vector<std::string> outputs =
          absa::Predict(*backend, data,
                        absa::DecodeOptions{static_cast<int>(max_length),
                                            static_cast<int>(beam)});
      std::vector<absa::PredictionRecord> records;
      for (size_t i = 0; i < data.size(); ++i) {
        const absa::ExampleMeta& m = data[i].meta;
        records.push_back({m.sentence_id, m.subtask, m.aspect, m.sample_index, outputs[i]});
      }
      absa::WritePredictionsJsonl(records, fs::path(out_path));
      out.Field("predictions", records.size(),
                std::to_string(records.size()) + " predictions");
    };
  });

  // score
  std::string gold_path, pred_path, averaging = "micro";
  auto* score = app.add_subcommand("score", "Score serialized predictions");
  score->add_option("--gold", gold_path, "Gold JSONL corpus")->required();
  score->add_option("--pred", pred_path, "Predictions JSONL")->required();
  score->add_option("--subtask", subtask_name, "ate|atsc|joint")
      ->required()
      ->check(CLI::IsMember({"ate", "atsc", "joint"}));
  score->add_option("--averaging", averaging, "micro|macro-sentence")
      ->check(CLI::IsMember({"micro", "macro-sentence"}))
      ->capture_default_str();
  score->add_option("--conflict-policy", conflict_policy, "drop|keep-for-extraction")
      ->capture_default_str();
  score->callback([&] {
    action = [&](Emitter& out) {
      absa::Corpus gold = absa::LoadCorpusFile(gold_path, std::nullopt, std::nullopt);
      auto records = absa::ReadPredictionsJsonl(fs::path(pred_path));
      absa::TargetOptions targets;
      targets.conflict_policy = ParseConflictPolicy(conflict_policy);
      absa::ScoreReport report = absa::ScorePredictions(
          gold, *absa::ParseSubtask(subtask_name), records, targets,
          averaging == "micro" ? absa::Averaging::kMicro
                               : absa::Averaging::kMacroPerSentence);
      EmitScore(out, report);
    };
  });

  // experiment
  std::string spec_path;
  auto* experiment = app.add_subcommand("experiment", "Run every cell of an experiment plan");
  experiment->add_option("--spec", spec_path, "Experiment plan JSON")->required();
  experiment->callback([&] {
    action = [&](Emitter& out) {
      absa::ExperimentPlan plan = absa::ReadExperimentPlan(spec_path);
      json cells = json::array();
      std::string lines;
      for (const absa::ExperimentSpec& spec : plan.specs) {
        absa::ExperimentResult result = absa::RunExperiment(spec, plan.environment);
        const absa::ScoreReport& m = result.aggregate.mean;
        json cell = {{"cell", spec.CellName()},
                     {"regime", std::string(absa::RegimeName(spec.regime()))},
                     {"n_runs", result.aggregate.n_runs},
                     {"precision", m.precision},
                     {"recall", m.recall},
                     {"f1", m.f1}};
        std::string line = spec.CellName() + ": ";
        if (m.accuracy) {
          cell["accuracy"] = *m.accuracy;
          line += "accuracy " + Ratio(*m.accuracy) + " ";
        }
        line += "precision " + Ratio(m.precision) + " recall " +
                Ratio(m.recall) + " f1 " + Ratio(m.f1) +
                " (" + std::to_string(result.aggregate.n_runs) + " runs";
        if (!result.resumed_seeds.empty()) {
          line += ", " + std::to_string(result.resumed_seeds.size()) + " resumed";
        }
        line += ")";
        cells.push_back(cell);
        lines += (lines.empty() ? "" : "\n") + line;
      }
      out.Field("cells", cells, lines);
      out.Field("results_dir", plan.environment.results_root.string(),
                "results in " + plan.environment.results_root.string());
    };
  });

  // report
  std::string results_dir, csv_path;
  auto* report = app.add_subcommand("report", "Print result tables from completed runs");
  report->add_option("--results", results_dir, "Results directory")->required();
  report->add_option("--csv", csv_path, "Also write a CSV with every metric");
  report->callback([&] {
    action = [&](Emitter& out) {
      auto results = absa::LoadResults(results_dir);
      if (results.empty()) {
        throw absa::Error(absa::ErrorCode::kEmptyInput,
                          "no completed results under " + results_dir);
      }
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw absa::Error(absa::ErrorCode::kIo, "cannot write " + csv_path);
        csv << absa::ResultsCsv(results);
      }
      std::string tables = absa::ReproduceTables(results);
      if (!tables.empty() && tables.back() == '\n') tables.pop_back();
      out.Field("cells", results.size(), std::to_string(results.size()) + " cells");
      out.Field("tables", tables, tables);
    };
  });

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_option("--format", common.format, "Output mode: text or jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Emitter out(common.Json());
  try {
    action(out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  out.Flush();
  return 0;
}
