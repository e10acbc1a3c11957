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

// Rule-based baselines that work from the policy text alone: span
// extraction by cue phrases, question rephrasing by a pattern table and
// tree inference from bullet structure.

#ifndef POLICH_PATTERNS_H_
#define POLICH_PATTERNS_H_

#include <string>
#include <string_view>
#include <vector>

#include "polich/expr.h"

namespace polich {

struct BulletBlock {
  std::string lead_in;  // sentence immediately preceding the bullets
  std::vector<std::string> items;
  bool operator==(const BulletBlock&) const = default;
};

struct PolicyText {
  std::string prose;
  std::vector<BulletBlock> bullets;
};

// Cue phrases that mark a prose sentence as a span.
std::vector<std::string> DefaultCuePhrases();

// Case-insensitive, word-boundary match of phrase inside text.
bool ContainsPhrase(std::string_view text, std::string_view phrase);

// Cue-matching prose sentences in order, then every bullet item. Prose
// sentences that repeat a bullet lead-in or item are not cue spans.
std::vector<std::string> ExtractSpans(
    const PolicyText& policy,
    const std::vector<std::string>& cues = DefaultCuePhrases());

struct RephrasePattern {
  enum class Kind { kSwap, kPrefixDoYouHave, kPrefixAreYou };
  std::string match_prefix;
  std::string replacement;  // used by kSwap only
  Kind kind = Kind::kSwap;
  bool operator==(const RephrasePattern&) const = default;
};

// Table format: one pattern per line, tab-separated
//   match_prefix <TAB> replacement <TAB> kind
// with kind one of swap, prefix_do_you_have, prefix_are_you. Blank lines
// and lines starting with '#' are ignored. Throws Error on malformed lines.
std::vector<RephrasePattern> ParsePatternTable(std::string_view text);
std::vector<RephrasePattern> LoadPatternTable(const std::string& path);
// The built-in table; identical to data/rephrase_patterns.tsv.
const std::vector<RephrasePattern>& DefaultPatterns();
// Table named by $POLICH_PATTERNS when set, otherwise the built-in one.
std::vector<RephrasePattern> PatternsFromEnvironment();

// Applies the first swap pattern whose prefix starts the span. Otherwise
// prefix patterns decide between "Are you ..." and "Do you have ...",
// defaulting to "Do you have" for spans that read as noun phrases. The
// result always ends in '?'.
std::string RephraseSpan(std::string_view span,
                         const std::vector<RephrasePattern>& patterns);

// Bullet items map positionally onto Q0, Q1, ... across blocks. A block is
// a conjunction when its lead-in says "must" or "both", a disjunction
// otherwise, and is negated when the lead-in contains "not" or "n't".
// Blocks and any remaining questions are joined with "and". Throws Error
// unless 1 <= question_count <= 10.
ExprTree InferTreeFromPatterns(const PolicyText& policy, int question_count);

}  // namespace polich

#endif  // POLICH_PATTERNS_H_
