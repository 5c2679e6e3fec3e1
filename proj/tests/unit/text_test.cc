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

#include "absa/error.h"
#include "absa/text.h"
#include "doctest.h"

namespace absa {
namespace {

TEST_CASE("Trim strips ASCII whitespace only at the ends") {
  CHECK(Trim("  a b \t\n") == "a b");
  CHECK(Trim("") == "");
  CHECK(Trim(" \t ") == "");
}

TEST_CASE("CanonicalizeTerm lowercases and collapses whitespace") {
  CHECK(CanonicalizeTerm("  Battery   Life ") == "battery life");
  CHECK(CanonicalizeTerm("Glass\tof\nWine") == "glass of wine");
  CHECK(CanonicalizeTerm("CAFÉ") == "caf\xc3\x89");  // non-ASCII bytes untouched
}

TEST_CASE("CanonicalizeTerm is idempotent") {
  for (const char* s : {"A  b", " x ", "", "Mixed Case\tTerm"}) {
    std::string once = CanonicalizeTerm(s);
    CHECK(CanonicalizeTerm(once) == once);
  }
}

TEST_CASE("SplitString keeps empty pieces") {
  auto parts = SplitString("a,,b,", ",");
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == "a");
  CHECK(parts[1] == "");
  CHECK(parts[2] == "b");
  CHECK(parts[3] == "");
}

TEST_CASE("Join and CountOccurrences") {
  CHECK(Join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(Join({}, ", ") == "");
  CHECK(CountOccurrences("aaaa", "aa") == 2);
  CHECK(CountOccurrences("abc", "") == 0);
}

TEST_CASE("Error messages carry the code name") {
  Error e(ErrorCode::kIdMismatch, "sentence 7");
  CHECK(e.code() == ErrorCode::kIdMismatch);
  CHECK(std::string(e.what()) == "IdMismatch: sentence 7");
}

}  // namespace
}  // namespace absa
