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

#include <functional>

#include "absa/backend.h"
#include "absa/command_backend.h"
#include "absa/corpus.h"
#include "absa/error.h"
#include "absa/mock_backends.h"
#include "absa/prompting.h"
#include "absa/toy_backend.h"
#include "doctest.h"
#include "testing/fixtures.h"

namespace absa {
namespace {

using testing::DataDir;
using testing::ScratchDir;

std::vector<PromptedExample> SixteenAte(PromptVariant v = PromptVariant::kV1) {
  Corpus c = LoadSemevalXml(DataDir() / "laptops_sixteen.xml", Domain::kLaptops,
                            Split::kTrain);
  return BuildDataset(PromptConfig::Default(v), SubtaskKind::kAte, c).examples;
}

// The toy model needs far larger steps than a transformer fine-tune.
Hyperparameters ToyHyperparameters() {
  Hyperparameters hp;
  hp.learning_rate = 0.5;
  hp.train_batch_size = 1;
  hp.gradient_accumulation_steps = 1;
  hp.epochs = 20;
  return hp;
}

std::vector<std::string> Targets(const std::vector<PromptedExample>& data) {
  std::vector<std::string> t;
  for (const auto& e : data) t.push_back(e.target_text);
  return t;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

TEST_CASE("default hyperparameters") {
  Hyperparameters ate = Hyperparameters::DefaultsFor(SubtaskKind::kAte);
  CHECK(ate.learning_rate == doctest::Approx(3e-4));
  CHECK(ate.train_batch_size == 16);
  CHECK(ate.gradient_accumulation_steps == 2);
  CHECK(ate.epochs == 4);
  CHECK(Hyperparameters::DefaultsFor(SubtaskKind::kJoint).train_batch_size == 8);
  Hyperparameters bad = ate;
  bad.learning_rate = 0;
  CHECK(CodeOf([&] { bad.Validate(); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("hyperparameters and backend specs round-trip through JSON") {
  Hyperparameters hp = ToyHyperparameters();
  hp.seed = 4;
  Hyperparameters back = HyperparametersFromJson(ToJson(hp), Hyperparameters{});
  CHECK(back.learning_rate == hp.learning_rate);
  CHECK(back.epochs == hp.epochs);
  CHECK(back.seed == 4);
  BackendSpec spec{"command", "python3 x.py", "t5-small", false};
  BackendSpec spec_back = BackendSpecFromJson(ToJson(spec));
  CHECK(spec_back.kind == "command");
  CHECK(spec_back.argument == "python3 x.py");
  CHECK(spec_back.model == "t5-small");
  CHECK_FALSE(spec_back.trainable);
  CHECK(BackendSpecFromJson(nlohmann::json("toy")).kind == "toy");
}

TEST_CASE("mock backends") {
  auto data = SixteenAte();
  OracleBackend oracle;
  CHECK(Predict(oracle, data, DecodeOptions{}) == Targets(data));
  ConstantBackend constant("noaspectterm");
  for (const std::string& s : Predict(constant, data, DecodeOptions{})) {
    CHECK(s == "noaspectterm");
  }
  EchoTailBackend echo;
  CHECK(Predict(echo, data, DecodeOptions{}).front() == "input: " + std::string("The battery life is excellent."));
  CHECK(Train(oracle, data, Hyperparameters{}).steps == 0);
}

TEST_CASE("Train rejects empty data and invalid settings") {
  OracleBackend oracle;
  CHECK(CodeOf([&] { Train(oracle, {}, Hyperparameters{}); }) == ErrorCode::kEmptyInput);
  Hyperparameters bad;
  bad.epochs = 0;
  CHECK(CodeOf([&] { Train(oracle, SixteenAte(), bad); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("MakeBackend knows every kind and rejects others") {
  ScratchDir dir("make");
  for (const char* kind : {"oracle", "constant", "echo-tail", "toy"}) {
    BackendSpec spec;
    spec.kind = kind;
    CHECK(MakeBackend(spec, dir.path()) != nullptr);
  }
  BackendSpec unknown;
  unknown.kind = "gpt";
  CHECK(CodeOf([&] { MakeBackend(unknown, dir.path()); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("toy tokenizer round-trips target strings") {
  for (const char* t : {"battery life, screen", "food:positive, service:neutral",
                        "noaspectterm", "noaspectterm:none"}) {
    CHECK(ToySeq2SeqBackend::DetokenizeTarget(ToySeq2SeqBackend::TokenizeTarget(t)) == t);
  }
}

TEST_CASE("untrained toy model predicts empty strings") {
  ToySeq2SeqBackend toy;
  auto out = toy.Predict(SixteenAte(), DecodeOptions{});
  for (const std::string& s : out) CHECK(s.empty());
}

TEST_CASE("toy model memorizes the sixteen-sentence set") {
  auto data = SixteenAte();
  ToySeq2SeqBackend toy;
  TrainReport report = Train(toy, data, ToyHyperparameters());
  CHECK(report.steps == 16 * 20);
  CHECK(report.final_loss < 0.05);
  CHECK(Predict(toy, data, DecodeOptions{}) == Targets(data));
  DecodeOptions beam;
  beam.beam_width = 3;
  CHECK(Predict(toy, data, beam) == Targets(data));
}

TEST_CASE("toy training is deterministic per seed and checkpoints restore it") {
  auto data = SixteenAte();
  Hyperparameters hp = ToyHyperparameters();
  hp.epochs = 3;
  ToySeq2SeqBackend a, b;
  TrainReport ra = Train(a, data, hp);
  TrainReport rb = Train(b, data, hp);
  CHECK(ra.final_loss == rb.final_loss);
  auto pa = Predict(a, data, DecodeOptions{});
  CHECK(pa == Predict(b, data, DecodeOptions{}));

  ScratchDir dir("toy");
  a.SaveCheckpoint(dir.path());
  ToySeq2SeqBackend restored;
  REQUIRE(restored.LoadCheckpoint(dir.path()));
  CHECK(Predict(restored, data, DecodeOptions{}) == pa);
  ToySeq2SeqBackend missing;
  CHECK_FALSE(missing.LoadCheckpoint(dir / "absent"));
}

TEST_CASE("dataset fingerprint tracks content") {
  auto data = SixteenAte();
  std::string f = DatasetFingerprint(data);
  CHECK(f.size() == 64);
  CHECK(DatasetFingerprint(data) == f);
  data[3].target_text += "x";
  CHECK(DatasetFingerprint(data) != f);
  CHECK(DatasetFingerprint(SixteenAte(PromptVariant::kV2)) != f);
}

TEST_CASE("run manifests round-trip") {
  ScratchDir dir("manifest");
  RunManifest m;
  m.checkpoint_id = std::string(kDefaultCheckpoint);
  m.backend = "toy-seq2seq";
  m.subtask = "ate";
  m.variant = "v2";
  m.train_domains = "laptops";
  m.hyperparameters = ToyHyperparameters();
  m.dataset_fingerprint = "abc";
  m.dataset_size = 16;
  m.report.steps = 9;
  m.engine_settings = {{"optimizer", "sgd"}};
  m.notes = {"n"};
  WriteRunManifest(m, dir / "manifest.json");
  auto back = ReadRunManifest(dir / "manifest.json");
  REQUIRE(back.has_value());
  CHECK(back->checkpoint_id == m.checkpoint_id);
  CHECK(back->report.steps == 9);
  CHECK(back->engine_settings == m.engine_settings);
  CHECK(back->notes == m.notes);
  CHECK_FALSE(ReadRunManifest(dir / "none.json").has_value());
  CHECK(CheckpointDir("r", SubtaskKind::kAte, PromptVariant::kV2, "laptops", 3) ==
        std::filesystem::path("r/checkpoints/ate/v2/laptops/seed-3"));
}

TEST_CASE("command backend speaks the adapter protocol") {
  ScratchDir dir("cmd");
  const std::string adapter = "python3 " + (DataDir() / "fake_adapter.py").string();
  auto data = SixteenAte();
  CommandBackend backend(adapter, "fake-model", dir.path(), true);
  Hyperparameters hp;
  TrainReport report = Train(backend, data, hp);
  CHECK(report.steps == 16 * 4);
  CHECK(report.final_loss == doctest::Approx(0.25));
  CHECK(backend.EngineSettings().at("optimizer") == "none");
  auto out = Predict(backend, data, DecodeOptions{});
  REQUIRE(out.size() == 16);
  CHECK(out[0] == "excellent. is life battery The input:");

  CommandBackend exhausted(adapter + " --exhaust", "fake-model", dir / "x", true);
  CHECK(CodeOf([&] { Train(exhausted, data, hp); }) == ErrorCode::kResourceExhausted);
  CommandBackend broken("false", "fake-model", dir / "y", true);
  CHECK(CodeOf([&] { Predict(broken, data, DecodeOptions{}); }) ==
        ErrorCode::kBackendUnavailable);
  CommandBackend frozen(adapter, "fake-model", dir / "z", false);
  CHECK(CodeOf([&] { Train(frozen, data, hp); }) == ErrorCode::kNotTrainable);
}

}  // namespace
}  // namespace absa
