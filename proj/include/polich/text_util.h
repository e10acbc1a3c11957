// Copyright 2026 The Polich Authors.
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


// Small string helpers shared by the text-facing modules. ASCII-only case
// folding; bytes >= 0x80 pass through unchanged.

#ifndef POLICH_TEXT_UTIL_H_
#define POLICH_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace polich {

std::string ToLower(std::string_view text);
// Letters, digits, apostrophes and non-ASCII bytes.
bool IsWordChar(char c);
std::string Trim(std::string_view text);
std::string TrimRight(std::string_view text);

// Splits on '\n', dropping a trailing '\r' from each line. A final empty
// line after a trailing newline is not returned.
std::vector<std::string> SplitLines(std::string_view text);
std::vector<std::string> SplitTabs(std::string_view line);
// Whitespace-separated words.
std::vector<std::string> SplitWords(std::string_view text);
// Lower-cased words with surrounding punctuation stripped; empty words
// dropped.
std::vector<std::string> NormalizedWords(std::string_view text);
// Sentences end at '.', '!', '?' or ':' followed by whitespace or the end
// of the text, and at line breaks. Results are trimmed and non-empty.
std::vector<std::string> SplitSentences(std::string_view text);

}  // namespace polich

#endif  // POLICH_TEXT_UTIL_H_
