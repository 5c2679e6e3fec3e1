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

#include "absa/toy_backend.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "absa/error.h"
#include "absa/text.h"

namespace absa {
namespace {

using json = nlohmann::json;

constexpr int kEos = 0;
constexpr int kBos = -1;

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t Mix(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb3fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

uint64_t Combine(uint64_t a, uint64_t b) { return Mix(a * 31 + b + 0x9e37); }

bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80 || c == '\'';
}

std::vector<std::string> TokenizeInput(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (IsWordByte(c)) {
      current.push_back(static_cast<char>(c));
      continue;
    }
    if (!current.empty()) tokens.push_back(AsciiLower(current));
    current.clear();
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      tokens.emplace_back(1, static_cast<char>(c));
    }
  }
  if (!current.empty()) tokens.push_back(AsciiLower(current));
  return tokens;
}

std::string_view LastLine(std::string_view text) {
  size_t newline = text.rfind('\n');
  return newline == std::string_view::npos ? text : text.substr(newline + 1);
}

struct Hypothesis {
  std::vector<int> tokens;
  double log_prob = 0.0;
  bool finished = false;
};

}  // namespace

ToySeq2SeqBackend::ToySeq2SeqBackend()
    : vocab_{"</s>"}, weights_(size_t{1} << kHashBits, 0.0f) {
  vocab_index_[vocab_[0]] = kEos;
}

std::vector<std::string> ToySeq2SeqBackend::TokenizeTarget(
    std::string_view target) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(current);
    current.clear();
  };
  for (char c : target) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flush();
    } else if (c == ',' || c == ':') {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

std::string ToySeq2SeqBackend::DetokenizeTarget(
    const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& token : tokens) {
    if (token == "," || token == ":") {
      out += token;
      continue;
    }
    if (!out.empty() && out.back() != ':') out.push_back(' ');
    out += token;
  }
  return out;
}

ToySeq2SeqBackend::FeatureHashes ToySeq2SeqBackend::InputFeatures(
    std::string_view input_text) const {
  FeatureHashes features{Fnv1a("bias")};
  for (const std::string& token : TokenizeInput(LastLine(input_text))) {
    features.push_back(Fnv1a("w=" + token));
  }
  std::sort(features.begin() + 1, features.end());
  features.erase(std::unique(features.begin() + 1, features.end()),
                 features.end());
  return features;
}

ToySeq2SeqBackend::FeatureHashes ToySeq2SeqBackend::StepFeatures(
    const FeatureHashes& input, int prev2, int prev1, size_t step) const {
  const uint64_t p1 = Combine(Fnv1a("p1"), static_cast<uint64_t>(prev1 + 2));
  const uint64_t p12 = Combine(p1, static_cast<uint64_t>(prev2 + 2));
  const uint64_t t = Combine(Fnv1a("t"), step);
  FeatureHashes features{p1, p12, t};
  features.reserve(3 + input.size() * 3);
  for (uint64_t f : input) {
    features.push_back(f);
    features.push_back(Combine(f, p1));
    features.push_back(Combine(f, p12));
  }
  return features;
}

size_t ToySeq2SeqBackend::Slot(uint64_t feature, int label) const {
  return static_cast<size_t>(
      Mix(feature ^ (static_cast<uint64_t>(label + 1) * 0x9E3779B97F4A7C15ULL)) &
      ((uint64_t{1} << kHashBits) - 1));
}

std::vector<double> ToySeq2SeqBackend::Distribution(
    const FeatureHashes& features) const {
  std::vector<double> scores(vocab_.size(), 0.0);
  for (size_t label = 0; label < vocab_.size(); ++label) {
    double s = 0;
    for (uint64_t f : features) s += weights_[Slot(f, static_cast<int>(label))];
    scores[label] = s;
  }
  double max_score = *std::max_element(scores.begin(), scores.end());
  double z = 0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    z += s;
  }
  for (double& s : scores) s /= z;
  return scores;
}

TrainReport ToySeq2SeqBackend::Train(const std::vector<PromptedExample>& dataset,
                                     const Hyperparameters& hp) {
  std::lock_guard<std::mutex> lock(mutex_);

  struct Encoded {
    FeatureHashes input;
    std::vector<int> target;  // ends with kEos
  };
  std::vector<Encoded> encoded;
  encoded.reserve(dataset.size());
  for (const PromptedExample& example : dataset) {
    Encoded e;
    e.input = InputFeatures(example.input_text);
    for (const std::string& token : TokenizeTarget(example.target_text)) {
      auto [it, inserted] =
          vocab_index_.try_emplace(token, static_cast<int>(vocab_.size()));
      if (inserted) vocab_.push_back(token);
      e.target.push_back(it->second);
    }
    e.target.push_back(kEos);
    encoded.push_back(std::move(e));
  }

  std::mt19937_64 rng(static_cast<uint64_t>(hp.seed));
  std::vector<size_t> order(encoded.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  const size_t batch = static_cast<size_t>(hp.train_batch_size) *
                       static_cast<size_t>(hp.gradient_accumulation_steps);

  TrainReport report;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    // Fisher-Yates with raw engine output keeps the permutation identical
    // across standard library implementations.
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double epoch_loss = 0;
    size_t epoch_tokens = 0;
    for (size_t begin = 0; begin < order.size(); begin += batch) {
      size_t end = std::min(order.size(), begin + batch);
      std::unordered_map<size_t, double> gradient;
      for (size_t k = begin; k < end; ++k) {
        const Encoded& e = encoded[order[k]];
        int prev2 = kBos, prev1 = kBos;
        for (size_t step = 0; step < e.target.size(); ++step) {
          FeatureHashes features = StepFeatures(e.input, prev2, prev1, step);
          std::vector<double> probs = Distribution(features);
          int gold = e.target[step];
          epoch_loss -= std::log(std::max(probs[gold], 1e-300));
          ++epoch_tokens;
          for (size_t label = 0; label < probs.size(); ++label) {
            double g = probs[label] - (static_cast<int>(label) == gold ? 1.0 : 0.0);
            if (std::abs(g) < 1e-9) continue;
            for (uint64_t f : features) {
              gradient[Slot(f, static_cast<int>(label))] += g;
            }
          }
          prev2 = prev1;
          prev1 = gold;
        }
      }
      const double scale = hp.learning_rate / static_cast<double>(end - begin);
      for (const auto& [slot, g] : gradient) {
        weights_[slot] -= static_cast<float>(scale * g);
      }
      ++report.steps;
    }
    report.final_loss =
        epoch_tokens == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_tokens);
  }
  trained_ = true;
  return report;
}

std::string ToySeq2SeqBackend::Decode(const FeatureHashes& input,
                                      const DecodeOptions& options) const {
  const size_t beam_width = static_cast<size_t>(std::max(1, options.beam_width));
  const size_t max_len = static_cast<size_t>(std::max(1, options.max_output_length));
  std::vector<Hypothesis> beam{Hypothesis{}};
  for (size_t step = 0; step < max_len; ++step) {
    std::vector<Hypothesis> candidates;
    bool expanded = false;
    for (const Hypothesis& h : beam) {
      if (h.finished) {
        candidates.push_back(h);
        continue;
      }
      expanded = true;
      size_t n = h.tokens.size();
      int prev1 = n >= 1 ? h.tokens[n - 1] : kBos;
      int prev2 = n >= 2 ? h.tokens[n - 2] : kBos;
      std::vector<double> probs =
          Distribution(StepFeatures(input, prev2, prev1, step));
      for (size_t label = 0; label < probs.size(); ++label) {
        Hypothesis next = h;
        next.log_prob += std::log(std::max(probs[label], 1e-300));
        if (label == kEos) {
          next.finished = true;
        } else {
          next.tokens.push_back(static_cast<int>(label));
        }
        candidates.push_back(std::move(next));
      }
    }
    if (!expanded) break;
    // Stable sort keeps ties in label order, so decoding is deterministic.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Hypothesis& a, const Hypothesis& b) {
                       return a.log_prob > b.log_prob;
                     });
    if (candidates.size() > beam_width) candidates.resize(beam_width);
    beam = std::move(candidates);
  }
  const Hypothesis& best = beam.front();
  std::vector<std::string> tokens;
  for (int id : best.tokens) tokens.push_back(vocab_[static_cast<size_t>(id)]);
  return DetokenizeTarget(tokens);
}

std::vector<std::string> ToySeq2SeqBackend::Predict(
    const std::vector<PromptedExample>& batch, const DecodeOptions& options) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<std::string> out;
  out.reserve(batch.size());
  for (const PromptedExample& example : batch) {
    out.push_back(trained_ ? Decode(InputFeatures(example.input_text), options)
                           : std::string());
  }
  return out;
}

void ToySeq2SeqBackend::SaveCheckpoint(const std::filesystem::path& dir) const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::filesystem::create_directories(dir);
  json weights = json::array();
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0f) weights.push_back({i, weights_[i]});
  }
  json state = {{"format", "toy-seq2seq/1"},
                {"hash_bits", kHashBits},
                {"trained", trained_},
                {"vocab", vocab_},
                {"weights", std::move(weights)}};
  std::ofstream out(dir / "toy_model.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint in " + dir.string());
  out << state.dump();
}

bool ToySeq2SeqBackend::LoadCheckpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "toy_model.json", std::ios::binary);
  if (!in) return false;
  std::lock_guard<std::mutex> lock(mutex_);
  try {
    json state = json::parse(in);
    if (state.at("hash_bits").get<int>() != kHashBits) return false;
    vocab_ = state.at("vocab").get<std::vector<std::string>>();
    vocab_index_.clear();
    for (size_t i = 0; i < vocab_.size(); ++i) {
      vocab_index_[vocab_[i]] = static_cast<int>(i);
    }
    std::fill(weights_.begin(), weights_.end(), 0.0f);
    for (const json& w : state.at("weights")) {
      weights_.at(w.at(0).get<size_t>()) = w.at(1).get<float>();
    }
    trained_ = state.at("trained").get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation,
                dir.string() + "/toy_model.json: " + e.what());
  }
  return true;
}

std::map<std::string, std::string> ToySeq2SeqBackend::EngineSettings() const {
  return {{"optimizer", "sgd"},
          {"loss", "token cross-entropy, teacher forcing"},
          {"features", "hashed sample-line unigrams x previous two tokens"},
          {"hash_bits", std::to_string(kHashBits)},
          {"lr_schedule", "constant"}};
}

}  // namespace absa
