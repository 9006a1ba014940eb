//
// Copyright 2026 The Causal Span Tagger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CAUSAL_TEXT_H_
#define CAUSAL_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

struct CodePoint {
  char32_t value = 0;
  std::size_t length = 1;  // bytes consumed; invalid bytes decode as U+FFFD
};

CodePoint DecodeUtf8(std::string_view text, std::size_t pos);

bool IsSpace(char32_t cp);
bool IsPunctuation(char32_t cp);

std::string AsciiLower(std::string_view text);
std::string_view Trim(std::string_view text);

// RFC 4180 records; quoted cells may contain separators, quotes and newlines.
std::vector<std::vector<std::string>> ParseCsv(std::string_view content);
std::string FormatCsvRecord(const std::vector<std::string>& cells);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

}  // namespace causal

#endif  // CAUSAL_TEXT_H_
