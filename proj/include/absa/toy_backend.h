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

#ifndef ABSA_TOY_BACKEND_H_
#define ABSA_TOY_BACKEND_H_

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absa/backend.h"

namespace absa {

// A small trainable text-to-text model: an autoregressive softmax classifier
// over output tokens, with hashed sparse features built from the sample line
// (the last line of the prompt) and the previously emitted tokens. It trains
// with minibatch SGD under teacher forcing and decodes greedily or with a
// beam. It has no hope of generalizing like a pretrained seq2seq model; it is
// here so that the train -> predict -> parse -> score path can be exercised
// for real without an accelerator.
class ToySeq2SeqBackend final : public ModelBackend {
 public:
  static constexpr int kHashBits = 20;

  ToySeq2SeqBackend();

  std::string identity() const override { return "toy-seq2seq"; }
  bool trainable() const override { return true; }
  TrainReport Train(const std::vector<PromptedExample>& dataset,
                    const Hyperparameters& hp) override;
  std::vector<std::string> Predict(const std::vector<PromptedExample>& batch,
                                   const DecodeOptions& options) override;
  void SaveCheckpoint(const std::filesystem::path& dir) const override;
  bool LoadCheckpoint(const std::filesystem::path& dir) override;
  std::map<std::string, std::string> EngineSettings() const override;

  // Exposed for tests.
  static std::vector<std::string> TokenizeTarget(std::string_view target);
  static std::string DetokenizeTarget(const std::vector<std::string>& tokens);

 private:
  using FeatureHashes = std::vector<uint64_t>;

  FeatureHashes InputFeatures(std::string_view input_text) const;
  FeatureHashes StepFeatures(const FeatureHashes& input, int prev2, int prev1,
                             size_t step) const;
  // Softmax over the output vocabulary.
  std::vector<double> Distribution(const FeatureHashes& features) const;
  size_t Slot(uint64_t feature, int label) const;
  std::string Decode(const FeatureHashes& input,
                     const DecodeOptions& options) const;

  mutable std::mutex mutex_;
  std::vector<std::string> vocab_;  // id 0 is end-of-sequence
  std::unordered_map<std::string, int> vocab_index_;
  std::vector<float> weights_;
  bool trained_ = false;
};

}  // namespace absa

#endif  // ABSA_TOY_BACKEND_H_
