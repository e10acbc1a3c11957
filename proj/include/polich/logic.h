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

// Semantics of expression trees: truth tables, three-valued evaluation,
// equivalence, canonical forms, enumeration and equivalence-preserving
// rewrites.

#ifndef POLICH_LOGIC_H_
#define POLICH_LOGIC_H_

#include <bitset>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "polich/error.h"
#include "polich/expr.h"

namespace polich {

// Row i assigns Q_k the bit (i >> (n - 1 - k)) & 1, i.e. binary counting
// with Q0 as the most significant position.
class TruthTable {
 public:
  static constexpr int kMaxRows = 1 << kMaxQuestions;

  explicit TruthTable(int num_questions);

  int num_questions() const { return num_questions_; }
  int rows() const { return 1 << num_questions_; }
  bool operator[](int row) const { return bits_[row]; }
  void set(int row, bool value) { bits_[row] = value; }

  // Row 0 first, e.g. "0001" for Q0 and Q1.
  std::string ToBitString() const;
  static TruthTable FromBitString(const std::string& bits);

  bool operator==(const TruthTable& other) const {
    return num_questions_ == other.num_questions_ && bits_ == other.bits_;
  }

  size_t Hash() const;

 private:
  int num_questions_;
  std::bitset<kMaxRows> bits_;
};

// Value of Q_index in row `row` of a table over n questions.
inline bool RowValue(int row, int index, int n) {
  return (row >> (n - 1 - index)) & 1;
}

// Table over Q0..Q(max index); trees over a sparse set of ids still get a
// dense table.
TruthTable ComputeTruthTable(const ExprTree& tree);
// Table over Q0..Q(num_questions-1); throws Error if the tree uses an id
// outside that range.
TruthTable ComputeTruthTable(const ExprTree& tree, int num_questions);

// Ordered False < Unknown < True so that and/or are min/max.
enum class TruthValue : uint8_t { kFalse = 0, kUnknown = 1, kTrue = 2 };

std::string TruthValueName(TruthValue v);  // "no", "unknown", "yes"
TruthValue ParseTruthValue(const std::string& text);  // throws Error

using AnswerAssignment = std::map<QuestionId, TruthValue>;

class MissingAnswerError : public Error {
 public:
  explicit MissingAnswerError(QuestionId q);
  QuestionId question() const { return question_; }

 private:
  QuestionId question_;
};

// Strong-Kleene evaluation; classical when no answer is Unknown.
TruthValue Evaluate(const ExprTree& tree, const AnswerAssignment& answers);

// False when the trees use a different number of questions; otherwise the
// truth tables over the union of their ids are compared.
bool Equivalent(const ExprTree& a, const ExprTree& b);

// Same serialized token sequence.
bool Identical(const ExprTree& a, const ExprTree& b);

// Collapses double negation, flattens nested same-operator nodes and sorts
// children by their lowest question index. Idempotent.
ExprTree Canonicalize(const ExprTree& tree);

enum class Dedup { kSyntactic, kEquivalenceClass };

// Number of canonical read-once trees over exactly Q0..Q(n-1) without
// double negation: 2, 16, 320, 10624, 493568, 29476864 for n = 1..6.
uint64_t CountTrees(int n);

// Visits every canonical tree over Q0..Q(n-1) in a fixed order.
void ForEachTree(int n, const std::function<void(const ExprTree&)>& visit);

// kSyntactic: every canonical tree (n <= 5; n = 6 has 29 million trees and
// throws Error, use ForEachTree). kEquivalenceClass: one canonical
// representative per truth table, sorted by serialization, for n <= 6.
std::vector<ExprTree> EnumerateTrees(int n, Dedup dedup);

// Uniform draw over the canonical trees counted by CountTrees(n), n <= 6.
ExprTree SampleUniformTree(int n, std::mt19937_64& rng);

class NoDistinctEquivalentError : public Error {
 public:
  using Error::Error;
};

// Individual sound rewrites. Each returns the rewritten node.
// Not(And(xs)) -> Or(not xs) and Not(Or(xs)) -> And(not xs); a negated
// child loses its negation instead of gaining a second one.
ExprTree PushNegation(const ExprTree& tree);
// And(xs) -> Not(Or(not xs)) and dually.
ExprTree PullNegation(const ExprTree& tree);

// Applies a seeded random chain of De Morgan, permutation, regrouping and
// flattening rewrites. The result is equivalent to and not identical with
// the input. Throws NoDistinctEquivalentError when the tree has no and/or
// node ("Q0", "not Q0").
ExprTree RewriteEquivalent(const ExprTree& tree, uint64_t seed);

}  // namespace polich

template <>
struct std::hash<polich::TruthTable> {
  size_t operator()(const polich::TruthTable& t) const { return t.Hash(); }
};

#endif  // POLICH_LOGIC_H_
