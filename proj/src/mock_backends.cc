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

#include "absa/mock_backends.h"

namespace absa {

TrainReport OracleBackend::Train(const std::vector<PromptedExample>&,
                                 const Hyperparameters& hp) {
  return TrainReport{0, 0.0, 0.0, hp.seed};
}

std::vector<std::string> OracleBackend::Predict(
    const std::vector<PromptedExample>& batch, const DecodeOptions&) {
  std::vector<std::string> out;
  out.reserve(batch.size());
  for (const PromptedExample& example : batch) {
    out.push_back(example.target_text);
  }
  return out;
}

TrainReport ConstantBackend::Train(const std::vector<PromptedExample>&,
                                   const Hyperparameters& hp) {
  return TrainReport{0, 0.0, 0.0, hp.seed};
}

std::vector<std::string> ConstantBackend::Predict(
    const std::vector<PromptedExample>& batch, const DecodeOptions&) {
  return std::vector<std::string>(batch.size(), output_);
}

TrainReport EchoTailBackend::Train(const std::vector<PromptedExample>&,
                                   const Hyperparameters& hp) {
  return TrainReport{0, 0.0, 0.0, hp.seed};
}

std::vector<std::string> EchoTailBackend::Predict(
    const std::vector<PromptedExample>& batch, const DecodeOptions&) {
  std::vector<std::string> out;
  out.reserve(batch.size());
  for (const PromptedExample& example : batch) {
    const std::string& text = example.input_text;
    size_t newline = text.rfind('\n');
    out.push_back(newline == std::string::npos ? text
                                               : text.substr(newline + 1));
  }
  return out;
}

}  // namespace absa
