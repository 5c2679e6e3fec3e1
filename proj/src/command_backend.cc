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

#include "absa/command_backend.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "absa/error.h"
#include "absa/text.h"

namespace absa {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string ShellQuote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

}  // namespace

CommandBackend::CommandBackend(std::string command, std::string model,
                               std::filesystem::path checkpoint_dir,
                               bool trainable)
    : command_(std::move(command)),
      model_(std::move(model)),
      checkpoint_dir_(std::move(checkpoint_dir)),
      trainable_(trainable) {}

int CommandBackend::Run(const std::vector<std::string>& args) const {
  // The command itself may hold several words ("python3 adapter.py").
  std::string line = command_;
  for (const std::string& arg : args) line += " " + ShellQuote(arg);
  int status = std::system(line.c_str());
  if (status == -1) {
    throw Error(ErrorCode::kBackendUnavailable, "cannot spawn: " + command_);
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

TrainReport CommandBackend::Train(const std::vector<PromptedExample>& dataset,
                                  const Hyperparameters& hp) {
  std::lock_guard<std::mutex> lock(mutex_);
  fs::create_directories(checkpoint_dir_);
  const fs::path data = checkpoint_dir_ / "train.jsonl";
  const fs::path hparams = checkpoint_dir_ / "hparams.json";
  WritePromptedJsonl(dataset, data);
  {
    std::ofstream out(hparams, std::ios::binary);
    out << ToJson(hp).dump(2) << '\n';
  }
  int code = Run({"train", "--model", model_, "--data", data.string(),
                  "--hparams", hparams.string(), "--checkpoint",
                  checkpoint_dir_.string()});
  if (code == kResourceExhaustedExit) {
    throw Error(ErrorCode::kResourceExhausted,
                model_ + ": adapter reported resource exhaustion during training");
  }
  if (code != 0) {
    throw Error(ErrorCode::kBackendUnavailable,
                model_ + ": training adapter exited with status " +
                    std::to_string(code));
  }
  TrainReport report;
  report.seed = hp.seed;
  std::ifstream in(checkpoint_dir_ / "train_report.json", std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kBackendUnavailable,
                model_ + ": adapter wrote no train_report.json");
  }
  try {
    json j = json::parse(in);
    report.steps = j.value("steps", int64_t{0});
    report.final_loss = j.value("final_loss", 0.0);
    engine_settings_.clear();
    if (j.contains("engine_settings")) {
      for (const auto& [key, value] : j["engine_settings"].items()) {
        engine_settings_[key] =
            value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackendUnavailable,
                model_ + ": bad train_report.json: " + e.what());
  }
  has_checkpoint_ = true;
  return report;
}

std::vector<std::string> CommandBackend::Predict(
    const std::vector<PromptedExample>& batch, const DecodeOptions& options) {
  std::lock_guard<std::mutex> lock(mutex_);
  fs::create_directories(checkpoint_dir_);
  const fs::path inputs = checkpoint_dir_ / "predict_inputs.jsonl";
  const fs::path outputs = checkpoint_dir_ / "predict_outputs.jsonl";
  {
    std::ofstream out(inputs, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + inputs.string());
    for (const PromptedExample& example : batch) {
      out << json{{"input", example.input_text}}.dump() << '\n';
    }
  }
  fs::remove(outputs);
  int code = Run({"predict", "--model", model_, "--checkpoint",
                  has_checkpoint_ ? checkpoint_dir_.string() : std::string(),
                  "--inputs", inputs.string(), "--out", outputs.string(),
                  "--max-length", std::to_string(options.max_output_length),
                  "--beam", std::to_string(options.beam_width)});
  if (code == kResourceExhaustedExit) {
    throw Error(ErrorCode::kResourceExhausted,
                model_ + ": adapter reported resource exhaustion during predict");
  }
  if (code != 0) {
    throw Error(ErrorCode::kBackendUnavailable,
                model_ + ": predict adapter exited with status " +
                    std::to_string(code));
  }
  std::ifstream in(outputs, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kBackendUnavailable,
                model_ + ": adapter wrote no " + outputs.string());
  }
  std::vector<std::string> result;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    try {
      result.push_back(json::parse(line).at("output").get<std::string>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendUnavailable,
                  outputs.string() + ": " + e.what());
    }
  }
  if (result.size() != batch.size()) {
    throw Error(ErrorCode::kBackendUnavailable,
                model_ + ": adapter returned " + std::to_string(result.size()) +
                    " outputs for " + std::to_string(batch.size()) + " inputs");
  }
  return result;
}

void CommandBackend::SaveCheckpoint(const std::filesystem::path& dir) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!has_checkpoint_) return;
  std::error_code ec;
  if (fs::equivalent(dir, checkpoint_dir_, ec)) return;
  fs::create_directories(dir);
  fs::copy(checkpoint_dir_, dir,
           fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

bool CommandBackend::LoadCheckpoint(const std::filesystem::path& dir) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!fs::exists(dir / "train_report.json")) return false;
  checkpoint_dir_ = dir;
  has_checkpoint_ = true;
  return true;
}

std::map<std::string, std::string> CommandBackend::EngineSettings() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::map<std::string, std::string> settings = engine_settings_;
  settings["adapter"] = command_;
  return settings;
}

}  // namespace absa
