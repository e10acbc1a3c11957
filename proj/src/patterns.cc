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

#include "polich/patterns.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "polich/default_tables.h"
#include "polich/text_util.h"

namespace polich {

std::vector<std::string> DefaultCuePhrases() {
  return {"must be", "should apply"};
}

bool ContainsPhrase(std::string_view text, std::string_view phrase) {
  if (phrase.empty()) return false;
  const std::string hay = ToLower(text);
  const std::string needle = ToLower(phrase);
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + 1)) {
    const size_t end = pos + needle.size();
    const bool left_ok = pos == 0 || !IsWordChar(hay[pos - 1]);
    const bool right_ok = end == hay.size() || !IsWordChar(hay[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

namespace {

// Sentence text without a bullet marker or closing punctuation, for
// comparing prose sentences against the bullet structure.
std::string SpanKey(std::string_view text) {
  std::string s = Trim(text);
  while (!s.empty() && (s[0] == '-' || s[0] == '*')) s = Trim(s.substr(1));
  while (!s.empty() && std::string_view(".,;:!?").find(s.back()) != std::string_view::npos) {
    s.pop_back();
  }
  return ToLower(TrimRight(s));
}

}  // namespace

std::vector<std::string> ExtractSpans(const PolicyText& policy,
                                      const std::vector<std::string>& cues) {
  // Lead-ins and bullet lines also appear in the prose; they are covered by
  // the bullet rule and must not be extracted twice.
  std::set<std::string> structural;
  for (const BulletBlock& block : policy.bullets) {
    structural.insert(SpanKey(block.lead_in));
    for (const std::string& item : block.items) structural.insert(SpanKey(item));
  }
  std::vector<std::string> spans;
  for (const std::string& sentence : SplitSentences(policy.prose)) {
    if (structural.contains(SpanKey(sentence))) continue;
    const bool cued = std::any_of(cues.begin(), cues.end(), [&](const auto& c) {
      return ContainsPhrase(sentence, c);
    });
    if (cued) spans.push_back(sentence);
  }
  for (const BulletBlock& block : policy.bullets) {
    for (const std::string& item : block.items) {
      const std::string trimmed = Trim(item);
      if (!trimmed.empty()) spans.push_back(trimmed);
    }
  }
  return spans;
}

// ---------------------------------------------------------------------------
// Rephrasing

std::vector<RephrasePattern> ParsePatternTable(std::string_view text) {
  std::vector<RephrasePattern> patterns;
  int line_no = 0;
  for (const std::string& raw : SplitLines(text)) {
    ++line_no;
    const std::string line = TrimRight(raw);
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    const std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw Error("pattern table line " + std::to_string(line_no) +
                  ": expected 3 tab-separated fields, got " +
                  std::to_string(fields.size()));
    }
    RephrasePattern p;
    p.match_prefix = ToLower(Trim(fields[0]));
    p.replacement = Trim(fields[1]);
    const std::string kind = Trim(fields[2]);
    if (kind == "swap") {
      p.kind = RephrasePattern::Kind::kSwap;
    } else if (kind == "prefix_do_you_have") {
      p.kind = RephrasePattern::Kind::kPrefixDoYouHave;
    } else if (kind == "prefix_are_you") {
      p.kind = RephrasePattern::Kind::kPrefixAreYou;
    } else {
      throw Error("pattern table line " + std::to_string(line_no) +
                  ": unknown kind '" + kind + "'");
    }
    if (p.match_prefix.empty()) {
      throw Error("pattern table line " + std::to_string(line_no) +
                  ": empty match prefix");
    }
    if (p.kind == RephrasePattern::Kind::kSwap && p.replacement.empty()) {
      throw Error("pattern table line " + std::to_string(line_no) +
                  ": swap pattern without replacement");
    }
    patterns.push_back(std::move(p));
  }
  return patterns;
}

std::vector<RephrasePattern> LoadPatternTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pattern table '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParsePatternTable(buffer.str());
}

const std::vector<RephrasePattern>& DefaultPatterns() {
  static const std::vector<RephrasePattern> patterns =
      ParsePatternTable(internal::kDefaultPatternTable);
  return patterns;
}

std::vector<RephrasePattern> PatternsFromEnvironment() {
  const char* path = std::getenv("POLICH_PATTERNS");
  if (path == nullptr || *path == '\0') return DefaultPatterns();
  return LoadPatternTable(path);
}

namespace {

// True when span (already lower-cased) begins with prefix at a word
// boundary.
bool StartsWithWords(const std::string& span, const std::string& prefix) {
  if (span.compare(0, prefix.size(), prefix) != 0) return false;
  return span.size() == prefix.size() || !IsWordChar(span[prefix.size()]);
}

std::string StripSpan(std::string_view span) {
  std::string s = Trim(span);
  // Leading bullet markers.
  while (!s.empty() && (s[0] == '-' || s[0] == '*')) s = Trim(s.substr(1));
  if (s.rfind("\xE2\x80\xA2", 0) == 0) s = Trim(s.substr(3));  // U+2022
  while (!s.empty() && std::string_view(".,;:!?").find(s.back()) !=
                           std::string_view::npos) {
    s.pop_back();
  }
  return TrimRight(s);
}

// Lower-cases a capitalized first word but leaves acronyms and "I" alone.
std::string LowerFirst(std::string s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return s;
  const bool single_letter = s.size() == 1 || !IsWordChar(s[1]);
  const bool capitalized =
      !single_letter && std::islower(static_cast<unsigned char>(s[1]));
  if ((single_letter && s[0] != 'I') || capitalized) {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
  return s;
}

bool LooksPredicative(const std::string& lower) {
  const std::string first = lower.substr(0, lower.find(' '));
  auto ends_with = [&](std::string_view suffix) {
    return first.size() > suffix.size() + 2 &&
           first.compare(first.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with("ing") || ends_with("ed");
}

}  // namespace

std::string RephraseSpan(std::string_view span,
                         const std::vector<RephrasePattern>& patterns) {
  const std::string body = StripSpan(span);
  if (body.empty()) return "?";
  const std::string lower = ToLower(body);
  for (const RephrasePattern& p : patterns) {
    if (p.kind != RephrasePattern::Kind::kSwap) continue;
    if (StartsWithWords(lower, p.match_prefix)) {
      return p.replacement + body.substr(p.match_prefix.size()) + "?";
    }
  }
  const std::string rest = LowerFirst(body);
  for (const RephrasePattern& p : patterns) {
    if (p.kind == RephrasePattern::Kind::kSwap) continue;
    if (StartsWithWords(lower, p.match_prefix)) {
      const char* opener = p.kind == RephrasePattern::Kind::kPrefixAreYou
                               ? "Are you "
                               : "Do you have ";
      return opener + rest + "?";
    }
  }
  if (LooksPredicative(lower)) return "Are you " + rest + "?";
  return "Do you have " + rest + "?";
}

// ---------------------------------------------------------------------------
// Tree inference from bullet structure

namespace {

bool HasNegation(std::string_view lead_in) {
  if (ContainsPhrase(lead_in, "not") || ContainsPhrase(lead_in, "cannot")) {
    return true;
  }
  const std::string lower = ToLower(lead_in);
  for (std::string_view suffix : {"n't", "n\xE2\x80\x99t"}) {
    for (size_t pos = lower.find(suffix); pos != std::string::npos;
         pos = lower.find(suffix, pos + 1)) {
      const size_t end = pos + suffix.size();
      if (pos > 0 && (end == lower.size() || !IsWordChar(lower[end]))) return true;
    }
  }
  return false;
}

}  // namespace

ExprTree InferTreeFromPatterns(const PolicyText& policy, int question_count) {
  if (question_count < 1 || question_count > kMaxQuestions) {
    throw Error("question_count must be in [1, " +
                std::to_string(kMaxQuestions) + "]");
  }
  std::vector<ExprTree> terms;
  int next = 0;
  for (const BulletBlock& block : policy.bullets) {
    const int k = std::min(static_cast<int>(block.items.size()),
                           question_count - next);
    if (k <= 0) continue;
    std::vector<ExprTree> leaves;
    for (int i = 0; i < k; ++i) leaves.push_back(ExprTree::Leaf(QuestionId(next + i)));
    next += k;
    const bool conjunctive = ContainsPhrase(block.lead_in, "must") ||
                             ContainsPhrase(block.lead_in, "both");
    ExprTree group = k == 1 ? leaves.front()
                            : conjunctive ? ExprTree::And(std::move(leaves))
                                          : ExprTree::Or(std::move(leaves));
    if (HasNegation(block.lead_in)) group = ExprTree::Not(std::move(group));
    terms.push_back(std::move(group));
  }
  for (int i = next; i < question_count; ++i) {
    terms.push_back(ExprTree::Leaf(QuestionId(i)));
  }
  if (terms.size() == 1) return terms.front();
  std::vector<ExprTree> flat;
  for (ExprTree& t : terms) {
    if (t.kind() == ExprTree::Kind::kAnd) {
      flat.insert(flat.end(), t.children().begin(), t.children().end());
    } else {
      flat.push_back(std::move(t));
    }
  }
  return ExprTree::And(std::move(flat));
}

}  // namespace polich
