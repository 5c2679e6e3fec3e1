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

#ifndef ABSA_BACKEND_H_
#define ABSA_BACKEND_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/prompting.h"
#include "json.hpp"

namespace absa {

struct Hyperparameters {
  double learning_rate = 3e-4;
  int train_batch_size = 16;
  int gradient_accumulation_steps = 2;
  int epochs = 4;
  int64_t seed = 0;
  int max_output_length = 128;  // generation budget in tokens
  int beam_width = 1;           // 1 = greedy

  // Batch 16 for ATE/ATSC, 8 for the joint task; everything else shared.
  static Hyperparameters DefaultsFor(SubtaskKind subtask);
  // Throws kInvalidArgument when a positive field is not positive.
  void Validate() const;
};

nlohmann::json ToJson(const Hyperparameters& hp);
// Missing keys keep the values already in `base`.
Hyperparameters HyperparametersFromJson(const nlohmann::json& j,
                                        Hyperparameters base);

struct DecodeOptions {
  int max_output_length = 128;
  int beam_width = 1;
};

struct TrainReport {
  int64_t steps = 0;
  double final_loss = 0.0;
  double wall_time_seconds = 0.0;
  int64_t seed = 0;
};

// A text-to-text engine. Implementations serialize their own train/predict
// calls; distinct handles may be used from different threads.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual std::string identity() const = 0;
  virtual bool trainable() const = 0;

  // Supervised fine-tuning on input_text -> target_text.
  virtual TrainReport Train(const std::vector<PromptedExample>& dataset,
                            const Hyperparameters& hp) = 0;

  // Exactly one output per example, in order. Model engines look only at
  // input_text; the oracle mock reads target_text.
  virtual std::vector<std::string> Predict(
      const std::vector<PromptedExample>& batch,
      const DecodeOptions& options) = 0;

  // Persist / restore trained state. Backends without state do nothing and
  // report a successful load.
  virtual void SaveCheckpoint(const std::filesystem::path& dir) const;
  virtual bool LoadCheckpoint(const std::filesystem::path& dir);

  // Engine-level training settings not covered by Hyperparameters (optimizer,
  // schedule, ...), copied into run manifests.
  virtual std::map<std::string, std::string> EngineSettings() const;
};

// Checks the preconditions (trainable, non-empty dataset, valid
// hyperparameters) then trains. Throws kNotTrainable / kEmptyInput.
TrainReport Train(ModelBackend& backend,
                  const std::vector<PromptedExample>& dataset,
                  const Hyperparameters& hp);

// Wraps bare input strings and enforces positional alignment of the result.
std::vector<std::string> Predict(ModelBackend& backend,
                                 const std::vector<std::string>& inputs,
                                 int max_output_length = 128);
std::vector<std::string> Predict(ModelBackend& backend,
                                 const std::vector<PromptedExample>& batch,
                                 const DecodeOptions& options);

// Hex SHA-256 of the dataset's JSONL serialization.
std::string DatasetFingerprint(const std::vector<PromptedExample>& dataset);

struct RunManifest {
  std::string checkpoint_id;
  std::string backend;
  std::string subtask;
  std::string variant;
  std::string train_domains;
  Hyperparameters hyperparameters;
  std::string dataset_fingerprint;
  size_t dataset_size = 0;
  TrainReport report;
  std::map<std::string, std::string> engine_settings;
  std::vector<std::string> notes;
};

nlohmann::json ToJson(const RunManifest& manifest);
RunManifest RunManifestFromJson(const nlohmann::json& j);
void WriteRunManifest(const RunManifest& manifest,
                      const std::filesystem::path& path);
std::optional<RunManifest> ReadRunManifest(const std::filesystem::path& path);

// <root>/checkpoints/<subtask>/<variant>/<train-domains>/seed-<seed>
std::filesystem::path CheckpointDir(const std::filesystem::path& root,
                                    SubtaskKind subtask, PromptVariant variant,
                                    std::string_view train_domains,
                                    int64_t seed);

// Default checkpoint identity for the real adapter.
inline constexpr std::string_view kDefaultCheckpoint =
    "allenai/tk-instruct-base-def-pos";

// Declarative backend selection, as used by spec files and the CLI.
//   kind: oracle | constant | echo-tail | toy | command
//   argument: constant text, or the adapter command line for "command"
//   model: checkpoint identity passed to the adapter
struct BackendSpec {
  std::string kind = "oracle";
  std::string argument;
  std::string model = std::string(kDefaultCheckpoint);
  bool trainable = true;  // "command" only: false for predict-only adapters
};

nlohmann::json ToJson(const BackendSpec& spec);
BackendSpec BackendSpecFromJson(const nlohmann::json& j);

// `work_dir` is where stateful engines keep their checkpoint.
std::unique_ptr<ModelBackend> MakeBackend(const BackendSpec& spec,
                                          const std::filesystem::path& work_dir);

}  // namespace absa

#endif  // ABSA_BACKEND_H_
