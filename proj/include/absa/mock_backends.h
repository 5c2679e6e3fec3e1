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

#ifndef ABSA_MOCK_BACKENDS_H_
#define ABSA_MOCK_BACKENDS_H_

#include <string>
#include <vector>

#include "absa/backend.h"

namespace absa {

// Hermetic engines. Training is accepted and ignored (zero steps); all three
// are stateless and safe to share between threads.

// Returns each example's gold target_text.
class OracleBackend final : public ModelBackend {
 public:
  std::string identity() const override { return "oracle"; }
  bool trainable() const override { return true; }
  TrainReport Train(const std::vector<PromptedExample>& dataset,
                    const Hyperparameters& hp) override;
  std::vector<std::string> Predict(const std::vector<PromptedExample>& batch,
                                   const DecodeOptions& options) override;
};

// Returns the same string for every input.
class ConstantBackend final : public ModelBackend {
 public:
  explicit ConstantBackend(std::string output) : output_(std::move(output)) {}
  std::string identity() const override { return "constant:" + output_; }
  bool trainable() const override { return true; }
  TrainReport Train(const std::vector<PromptedExample>& dataset,
                    const Hyperparameters& hp) override;
  std::vector<std::string> Predict(const std::vector<PromptedExample>& batch,
                                   const DecodeOptions& options) override;

 private:
  std::string output_;
};

// Returns the last line of each input, i.e. the rendered sample.
class EchoTailBackend final : public ModelBackend {
 public:
  std::string identity() const override { return "echo-tail"; }
  bool trainable() const override { return true; }
  TrainReport Train(const std::vector<PromptedExample>& dataset,
                    const Hyperparameters& hp) override;
  std::vector<std::string> Predict(const std::vector<PromptedExample>& batch,
                                   const DecodeOptions& options) override;
};

}  // namespace absa

#endif  // ABSA_MOCK_BACKENDS_H_
