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

#include "absa/backend.h"

#include <chrono>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "absa/command_backend.h"
#include "absa/error.h"
#include "absa/mock_backends.h"
#include "absa/toy_backend.h"

namespace absa {

using json = nlohmann::json;

Hyperparameters Hyperparameters::DefaultsFor(SubtaskKind subtask) {
  Hyperparameters hp;
  hp.train_batch_size = subtask == SubtaskKind::kJoint ? 8 : 16;
  return hp;
}

void Hyperparameters::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " must be positive");
    }
  };
  require(learning_rate > 0, "learning_rate");
  require(train_batch_size > 0, "train_batch_size");
  require(gradient_accumulation_steps > 0, "gradient_accumulation_steps");
  require(epochs > 0, "epochs");
  require(max_output_length > 0, "max_output_length");
  require(beam_width > 0, "beam_width");
}

json ToJson(const Hyperparameters& hp) {
  return json{{"learning_rate", hp.learning_rate},
              {"train_batch_size", hp.train_batch_size},
              {"gradient_accumulation_steps", hp.gradient_accumulation_steps},
              {"epochs", hp.epochs},
              {"seed", hp.seed},
              {"max_output_length", hp.max_output_length},
              {"beam_width", hp.beam_width}};
}

Hyperparameters HyperparametersFromJson(const json& j, Hyperparameters base) {
  try {
    base.learning_rate = j.value("learning_rate", base.learning_rate);
    base.train_batch_size = j.value("train_batch_size", base.train_batch_size);
    base.gradient_accumulation_steps =
        j.value("gradient_accumulation_steps", base.gradient_accumulation_steps);
    base.epochs = j.value("epochs", base.epochs);
    base.seed = j.value("seed", base.seed);
    base.max_output_length = j.value("max_output_length", base.max_output_length);
    base.beam_width = j.value("beam_width", base.beam_width);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("hyperparameters: ") + e.what());
  }
  base.Validate();
  return base;
}

void ModelBackend::SaveCheckpoint(const std::filesystem::path&) const {}

bool ModelBackend::LoadCheckpoint(const std::filesystem::path&) { return true; }

std::map<std::string, std::string> ModelBackend::EngineSettings() const {
  return {};
}

TrainReport Train(ModelBackend& backend,
                  const std::vector<PromptedExample>& dataset,
                  const Hyperparameters& hp) {
  if (!backend.trainable()) {
    throw Error(ErrorCode::kNotTrainable,
                "backend " + backend.identity() + " cannot be trained");
  }
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyInput, "training dataset is empty");
  }
  hp.Validate();
  auto start = std::chrono::steady_clock::now();
  TrainReport report = backend.Train(dataset, hp);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report.seed = hp.seed;
  return report;
}

std::vector<std::string> Predict(ModelBackend& backend,
                                 const std::vector<PromptedExample>& batch,
                                 const DecodeOptions& options) {
  std::vector<std::string> outputs = backend.Predict(batch, options);
  if (outputs.size() != batch.size()) {
    throw Error(ErrorCode::kBackendUnavailable,
                backend.identity() + " returned " +
                    std::to_string(outputs.size()) + " outputs for " +
                    std::to_string(batch.size()) + " inputs");
  }
  return outputs;
}

std::vector<std::string> Predict(ModelBackend& backend,
                                 const std::vector<std::string>& inputs,
                                 int max_output_length) {
  std::vector<PromptedExample> batch(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) batch[i].input_text = inputs[i];
  return Predict(backend, batch, DecodeOptions{max_output_length, 1});
}

std::string DatasetFingerprint(const std::vector<PromptedExample>& dataset) {
  std::ostringstream serialized;
  WritePromptedJsonl(dataset, serialized);
  const std::string bytes = serialized.str();

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw Error(ErrorCode::kIo, "sha256 failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

json ToJson(const RunManifest& m) {
  return json{{"checkpoint_id", m.checkpoint_id},
              {"backend", m.backend},
              {"subtask", m.subtask},
              {"variant", m.variant},
              {"train_domains", m.train_domains},
              {"hyperparameters", ToJson(m.hyperparameters)},
              {"seed", m.hyperparameters.seed},
              {"dataset_fingerprint", m.dataset_fingerprint},
              {"dataset_size", m.dataset_size},
              {"steps", m.report.steps},
              {"final_loss", m.report.final_loss},
              {"wall_time_seconds", m.report.wall_time_seconds},
              {"engine_settings", m.engine_settings},
              {"notes", m.notes}};
}

RunManifest RunManifestFromJson(const json& j) {
  try {
    RunManifest m;
    m.checkpoint_id = j.at("checkpoint_id").get<std::string>();
    m.backend = j.at("backend").get<std::string>();
    m.subtask = j.value("subtask", std::string());
    m.variant = j.value("variant", std::string());
    m.train_domains = j.value("train_domains", std::string());
    m.hyperparameters =
        HyperparametersFromJson(j.at("hyperparameters"), Hyperparameters{});
    m.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    m.dataset_size = j.value("dataset_size", size_t{0});
    m.report.steps = j.value("steps", int64_t{0});
    m.report.final_loss = j.value("final_loss", 0.0);
    m.report.wall_time_seconds = j.value("wall_time_seconds", 0.0);
    m.report.seed = m.hyperparameters.seed;
    m.engine_settings = j.value("engine_settings",
                                std::map<std::string, std::string>{});
    m.notes = j.value("notes", std::vector<std::string>{});
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string("run manifest: ") + e.what());
  }
}

void WriteRunManifest(const RunManifest& manifest,
                      const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << ToJson(manifest).dump(2) << '\n';
}

std::optional<RunManifest> ReadRunManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return RunManifestFromJson(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, path.string() + ": " + e.what());
  }
}

std::filesystem::path CheckpointDir(const std::filesystem::path& root,
                                    SubtaskKind subtask, PromptVariant variant,
                                    std::string_view train_domains,
                                    int64_t seed) {
  return root / "checkpoints" / std::string(SubtaskName(subtask)) /
         std::string(VariantName(variant)) / std::string(train_domains) /
         ("seed-" + std::to_string(seed));
}

json ToJson(const BackendSpec& spec) {
  return json{{"kind", spec.kind},
              {"argument", spec.argument},
              {"model", spec.model},
              {"trainable", spec.trainable}};
}

BackendSpec BackendSpecFromJson(const json& j) {
  BackendSpec spec;
  if (j.is_string()) {
    spec.kind = j.get<std::string>();
    return spec;
  }
  try {
    spec.kind = j.value("kind", spec.kind);
    spec.argument = j.value("argument", spec.argument);
    spec.model = j.value("model", spec.model);
    spec.trainable = j.value("trainable", spec.trainable);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("backend spec: ") + e.what());
  }
  return spec;
}

std::unique_ptr<ModelBackend> MakeBackend(const BackendSpec& spec,
                                          const std::filesystem::path& work_dir) {
  if (spec.kind == "oracle") return std::make_unique<OracleBackend>();
  if (spec.kind == "constant") {
    return std::make_unique<ConstantBackend>(spec.argument);
  }
  if (spec.kind == "echo-tail") return std::make_unique<EchoTailBackend>();
  if (spec.kind == "toy") return std::make_unique<ToySeq2SeqBackend>();
  if (spec.kind == "command") {
    if (spec.argument.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "command backend needs an adapter command line");
    }
    return std::make_unique<CommandBackend>(spec.argument, spec.model, work_dir,
                                            spec.trainable);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown backend kind '" + spec.kind + "'");
}

}  // namespace absa
