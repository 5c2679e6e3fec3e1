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

#ifndef ABSA_COMMAND_BACKEND_H_
#define ABSA_COMMAND_BACKEND_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "absa/backend.h"

namespace absa {

// Drives an external seq2seq trainer through files. The adapter command is
// invoked as
//
//   <command> train   --model <id> --data <train.jsonl> --hparams <hp.json>
//                     --checkpoint <dir>
//   <command> predict --model <id> --checkpoint <dir> --inputs <in.jsonl>
//                     --out <out.jsonl> --max-length <n> --beam <k>
//
// train.jsonl uses the prompted-dataset record format. in.jsonl holds
// {"input": "..."} per line and out.jsonl must hold {"output": "..."} per
// line in the same order. After training the adapter writes
// <dir>/train_report.json: {"steps": n, "final_loss": x,
// "engine_settings": {...}}. Exit status 75 means the engine ran out of
// memory or another resource; any other non-zero status is a failure.
// tools/hf_seq2seq.py implements this protocol with Hugging Face
// transformers.
class CommandBackend final : public ModelBackend {
 public:
  static constexpr int kResourceExhaustedExit = 75;

  CommandBackend(std::string command, std::string model,
                 std::filesystem::path checkpoint_dir, bool trainable = true);

  std::string identity() const override { return model_; }
  bool trainable() const override { return trainable_; }
  TrainReport Train(const std::vector<PromptedExample>& dataset,
                    const Hyperparameters& hp) override;
  std::vector<std::string> Predict(const std::vector<PromptedExample>& batch,
                                   const DecodeOptions& options) override;
  void SaveCheckpoint(const std::filesystem::path& dir) const override;
  bool LoadCheckpoint(const std::filesystem::path& dir) override;
  std::map<std::string, std::string> EngineSettings() const override;

 private:
  int Run(const std::vector<std::string>& args) const;

  std::string command_;
  std::string model_;
  std::filesystem::path checkpoint_dir_;
  bool trainable_;
  bool has_checkpoint_ = false;
  std::map<std::string, std::string> engine_settings_;
  mutable std::mutex mutex_;
};

}  // namespace absa

#endif  // ABSA_COMMAND_BACKEND_H_
