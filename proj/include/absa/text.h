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

#ifndef ABSA_TEXT_H_
#define ABSA_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace absa {

// Strips ASCII whitespace from both ends.
std::string_view Trim(std::string_view s);

// ASCII lowercase; bytes outside ASCII are left untouched.
std::string AsciiLower(std::string_view s);

// Canonical form used for every term comparison: trimmed, internal
// whitespace runs collapsed to one space, ASCII-lowercased. Idempotent.
std::string CanonicalizeTerm(std::string_view term);

// Splits on every occurrence of `sep`; keeps empty pieces.
std::vector<std::string_view> SplitString(std::string_view s, std::string_view sep);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

bool Contains(std::string_view haystack, std::string_view needle);

// Number of non-overlapping occurrences of `needle`.
size_t CountOccurrences(std::string_view haystack, std::string_view needle);

}  // namespace absa

#endif  // ABSA_TEXT_H_
