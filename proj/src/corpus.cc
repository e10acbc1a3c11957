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


#include "polich/corpus.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "polich/text_util.h"

namespace polich {

using Json = nlohmann::ordered_json;

SchemaError::SchemaError(int line, const std::string& field,
                         const std::string& detail)
    : Error("line " + std::to_string(line) + ": field '" + field + "': " +
            detail),
      line_(line),
      field_(field) {}

TreeInvalidError::TreeInvalidError(int line, const std::string& detail)
    : Error("line " + std::to_string(line) + ": invalid tree: " + detail),
      line_(line) {}

namespace {

const Json& Require(const Json& obj, const char* field, int line) {
  auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(line, field, "missing");
  return *it;
}

std::string RequireString(const Json& obj, const char* field, int line) {
  const Json& v = Require(obj, field, line);
  if (!v.is_string()) throw SchemaError(line, field, "expected a string");
  return v.get<std::string>();
}

const Json& RequireArray(const Json& obj, const char* field, int line) {
  const Json& v = Require(obj, field, line);
  if (!v.is_array()) throw SchemaError(line, field, "expected an array");
  return v;
}

std::optional<std::string> OptionalString(const Json& obj, const char* field,
                                          int line) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(line, field, "expected a string");
  return it->get<std::string>();
}

TruthValue ParseAnswer(const Json& v, const std::string& field, int line) {
  if (!v.is_string()) throw SchemaError(line, field, "expected a string");
  const std::string text = v.get<std::string>();
  if (text == "yes") return TruthValue::kTrue;
  if (text == "no") return TruthValue::kFalse;
  if (text == "unknown") return TruthValue::kUnknown;
  throw SchemaError(line, field, "expected yes, no or unknown, got '" + text + "'");
}

QuestionId ParseQuestionId(const std::string& text, const std::string& field,
                           int line) {
  if (text.size() == 2 && text[0] == 'Q' && text[1] >= '0' && text[1] <= '9') {
    return QuestionId(text[1] - '0');
  }
  throw SchemaError(line, field, "bad question id '" + text + "'");
}

}  // namespace

void ValidateRecord(const PolicyRecord& record, int line) {
  const int n = record.question_count();
  if (n > kMaxQuestions) {
    throw SchemaError(line, "questions",
                      "more than " + std::to_string(kMaxQuestions) + " questions");
  }
  if (record.tree) {
    const uint32_t expected = (1u << n) - 1;
    if (record.tree->QuestionMask() != expected) {
      throw TreeInvalidError(line, "'" + ToString(*record.tree) +
                                       "' does not use exactly Q0..Q" +
                                       std::to_string(n - 1));
    }
  }
  for (const Scenario& s : record.scenarios) {
    for (const auto& [q, value] : s.answers) {
      if (q.index() >= n) {
        throw SchemaError(line, "scenarios",
                          "scenario '" + s.id + "' answers unlisted " + q.ToString());
      }
    }
  }
}

PolicyRecord ParseRecord(const std::string& json_line, int line) {
  Json obj;
  try {
    obj = Json::parse(json_line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(line, "<record>", std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw SchemaError(line, "<record>", "expected an object");

  PolicyRecord r;
  r.id = RequireString(obj, "id", line);
  r.policy = RequireString(obj, "policy", line);
  for (const Json& b : RequireArray(obj, "bullets", line)) {
    if (!b.is_object()) throw SchemaError(line, "bullets", "expected objects");
    BulletBlock block;
    block.lead_in = RequireString(b, "lead_in", line);
    for (const Json& item : RequireArray(b, "items", line)) {
      if (!item.is_string()) throw SchemaError(line, "items", "expected strings");
      block.items.push_back(item.get<std::string>());
    }
    r.bullets.push_back(std::move(block));
  }
  r.main_question = RequireString(obj, "main_question", line);
  int expected_index = 0;
  for (const Json& q : RequireArray(obj, "questions", line)) {
    if (!q.is_object()) throw SchemaError(line, "questions", "expected objects");
    const std::string id = RequireString(q, "id", line);
    if (expected_index >= kMaxQuestions ||
        id != "Q" + std::to_string(expected_index)) {
      throw SchemaError(line, "questions",
                        "ids must be dense from Q0, got '" + id + "'");
    }
    r.questions.push_back(RequireString(q, "text", line));
    ++expected_index;
  }
  if (auto it = obj.find("tree"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError(line, "tree", "expected a string");
    try {
      r.tree = ParseExpr(it->get<std::string>());
    } catch (const Error& e) {
      throw TreeInvalidError(line, e.what());
    }
  }
  if (auto it = obj.find("scenarios"); it != obj.end()) {
    if (!it->is_array()) throw SchemaError(line, "scenarios", "expected an array");
    for (const Json& s : *it) {
      if (!s.is_object()) throw SchemaError(line, "scenarios", "expected objects");
      Scenario scenario;
      scenario.id = RequireString(s, "id", line);
      const Json& answers = Require(s, "answers", line);
      if (!answers.is_object()) throw SchemaError(line, "answers", "expected an object");
      for (const auto& [key, value] : answers.items()) {
        scenario.answers[ParseQuestionId(key, "answers", line)] =
            ParseAnswer(value, "answers", line);
      }
      scenario.label = ParseAnswer(Require(s, "label", line), "label", line);
      r.scenarios.push_back(std::move(scenario));
    }
  }
  r.augmented_from = OptionalString(obj, "augmented_from", line);
  r.strategy = OptionalString(obj, "strategy", line);
  ValidateRecord(r, line);
  return r;
}

std::string FormatRecord(const PolicyRecord& r) {
  Json obj;
  obj["id"] = r.id;
  obj["policy"] = r.policy;
  obj["bullets"] = Json::array();
  for (const BulletBlock& b : r.bullets) {
    obj["bullets"].push_back({{"lead_in", b.lead_in}, {"items", b.items}});
  }
  obj["main_question"] = r.main_question;
  obj["questions"] = Json::array();
  for (size_t i = 0; i < r.questions.size(); ++i) {
    obj["questions"].push_back(
        {{"id", QuestionId(static_cast<int>(i)).ToString()}, {"text", r.questions[i]}});
  }
  obj["tree"] = r.tree ? Json(ToString(*r.tree)) : Json(nullptr);
  obj["scenarios"] = Json::array();
  for (const Scenario& s : r.scenarios) {
    Json answers = Json::object();
    for (const auto& [q, value] : s.answers) answers[q.ToString()] = TruthValueName(value);
    obj["scenarios"].push_back(
        {{"id", s.id}, {"answers", answers}, {"label", TruthValueName(s.label)}});
  }
  if (r.augmented_from) obj["augmented_from"] = *r.augmented_from;
  if (r.strategy) obj["strategy"] = *r.strategy;
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

std::vector<PolicyRecord> ReadCorpus(std::istream& in) {
  std::vector<PolicyRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    records.push_back(ParseRecord(line, line_no));
  }
  return records;
}

std::vector<PolicyRecord> LoadCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return ReadCorpus(in);
}

void WriteCorpus(const std::vector<PolicyRecord>& records, std::ostream& out) {
  for (const PolicyRecord& r : records) out << FormatRecord(r) << '\n';
}

void SaveCorpus(const std::vector<PolicyRecord>& records,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  WriteCorpus(records, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<ScoreEntry> ReadScores(std::istream& in) {
  std::vector<ScoreEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::vector<std::string> fields = SplitTabs(line);
    const std::string where = "scores line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) throw Error(where + "expected 3 tab-separated fields");
    ScoreEntry e{Trim(fields[0]), ExprTree::Leaf(QuestionId(0)), 0.0};
    try {
      e.tree = ParseExpr(fields[1]);
    } catch (const Error& err) {
      throw Error(where + err.what());
    }
    const std::string score = Trim(fields[2]);
    char* end = nullptr;
    e.score = std::strtod(score.c_str(), &end);
    if (score.empty() || *end != '\0' || !std::isfinite(e.score)) {
      throw Error(where + "bad score '" + score + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ScoreEntry> LoadScores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return ReadScores(in);
}

}  // namespace polich
