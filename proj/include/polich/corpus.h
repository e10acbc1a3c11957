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


// JSON Lines corpus format and the tab-separated scores file.
//
// One record per line with fields in this order:
//   id, policy, bullets [{lead_in, items}], main_question,
//   questions [{id, text}], tree, scenarios [{id, answers, label}],
//   augmented_from, strategy
// tree may be null for prediction inputs. augmented_from and strategy are
// written only when set. Answers and labels are "yes", "no" or "unknown".

#ifndef POLICH_CORPUS_H_
#define POLICH_CORPUS_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polich/error.h"
#include "polich/expr.h"
#include "polich/logic.h"
#include "polich/patterns.h"

namespace polich {

struct Scenario {
  std::string id;
  AnswerAssignment answers;
  TruthValue label = TruthValue::kUnknown;
  bool operator==(const Scenario&) const = default;
};

struct PolicyRecord {
  std::string id;
  std::string policy;
  std::vector<BulletBlock> bullets;
  std::string main_question;
  std::vector<std::string> questions;  // questions[i] is the text of Q<i>
  std::optional<ExprTree> tree;
  std::vector<Scenario> scenarios;
  std::optional<std::string> augmented_from;
  std::optional<std::string> strategy;

  int question_count() const { return static_cast<int>(questions.size()); }
  PolicyText policy_text() const { return {policy, bullets}; }
  bool operator==(const PolicyRecord&) const = default;
};

// line is 1-based; 0 when the record did not come from a file.
class SchemaError : public Error {
 public:
  SchemaError(int line, const std::string& field, const std::string& detail);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

class TreeInvalidError : public Error {
 public:
  TreeInvalidError(int line, const std::string& detail);
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Checks the record invariants: at most kMaxQuestions questions, the tree
// uses exactly Q0..Q(n-1), scenario answers name listed questions only.
// Throws SchemaError or TreeInvalidError.
void ValidateRecord(const PolicyRecord& record, int line = 0);

PolicyRecord ParseRecord(const std::string& json_line, int line = 0);
std::string FormatRecord(const PolicyRecord& record);

// Blank lines are skipped.
std::vector<PolicyRecord> ReadCorpus(std::istream& in);
std::vector<PolicyRecord> LoadCorpus(const std::string& path);
void WriteCorpus(const std::vector<PolicyRecord>& records, std::ostream& out);
void SaveCorpus(const std::vector<PolicyRecord>& records,
                const std::string& path);

struct ScoreEntry {
  std::string record_id;
  ExprTree tree;
  double score;
};

// record_id <TAB> tree <TAB> score per line; '#' comments and blank lines
// are skipped. Throws Error with the line number on malformed input.
std::vector<ScoreEntry> ReadScores(std::istream& in);
std::vector<ScoreEntry> LoadScores(const std::string& path);

}  // namespace polich

#endif  // POLICH_CORPUS_H_
