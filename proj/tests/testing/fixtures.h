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

#ifndef ABSA_TESTING_FIXTURES_H_
#define ABSA_TESTING_FIXTURES_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace absa::testing {

inline std::filesystem::path DataDir() { return ABSA_TEST_DATA_DIR; }
inline std::filesystem::path GoldenDir() { return ABSA_GOLDEN_DIR; }
inline std::filesystem::path TemplateDir() { return ABSA_TEMPLATE_DIR; }
inline std::filesystem::path CliPath() { return ABSA_CLI_PATH; }

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& s) {
  std::ofstream out(path, std::ios::binary);
  out << s;
}

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("absa-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace absa::testing

#endif  // ABSA_TESTING_FIXTURES_H_
