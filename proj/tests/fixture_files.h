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


// Readers for the small TSV fixtures shared by the unit and acceptance
// tests.

#ifndef POLICH_TESTS_FIXTURE_FILES_H_
#define POLICH_TESTS_FIXTURE_FILES_H_

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "polich/logic.h"
#include "polich/metrics.h"
#include "polich/text_util.h"

namespace polich::fixtures {

// Non-blank, non-comment lines split on tabs.
inline std::vector<std::vector<std::string>> Rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fixture " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    rows.push_back(SplitTabs(line));
  }
  return rows;
}

// (predicted, gold) pairs.
inline std::vector<std::pair<ExprTree, ExprTree>> TreePairs(const std::string& path) {
  std::vector<std::pair<ExprTree, ExprTree>> pairs;
  for (const auto& row : Rows(path)) pairs.emplace_back(ParseExpr(row.at(0)), ParseExpr(row.at(1)));
  return pairs;
}

inline std::vector<PcdInstance> PcdInstances(const std::string& path) {
  std::vector<PcdInstance> out;
  for (const auto& row : Rows(path)) {
    PcdInstance inst{ParseExpr(row.at(0)), {}, ParseTruthValue(row.at(2))};
    std::string answers = row.at(1);
    int q = 0;
    for (size_t start = 0; start <= answers.size();) {
      const size_t comma = std::min(answers.find(',', start), answers.size());
      inst.answers[QuestionId(q++)] = ParseTruthValue(answers.substr(start, comma - start));
      start = comma + 1;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

inline std::vector<ExprTree> Trees(const std::string& path) {
  std::vector<ExprTree> trees;
  for (const auto& row : Rows(path)) trees.push_back(ParseExpr(row.at(0)));
  return trees;
}

}  // namespace polich::fixtures

#endif  // POLICH_TESTS_FIXTURE_FILES_H_
