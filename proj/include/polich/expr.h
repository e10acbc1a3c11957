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

// The infix expression-tree language: tokens, trees, parsing and printing.
//
// A tree is a read-once propositional formula over question identifiers
// Q0..Q9 built from "and", "or", "not" and parentheses. Precedence is
// not > and > or; an unparenthesized chain of one operator becomes a single
// n-ary node, while a parenthesized operand of the same operator stays a
// nested node. Serialize() prints the minimal parentheses that reconstruct
// the exact tree, so Parse(Serialize(t)) == t.

#ifndef POLICH_EXPR_H_
#define POLICH_EXPR_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polich/error.h"

namespace polich {

inline constexpr int kMaxQuestions = 10;

class QuestionId {
 public:
  // Throws Error when index is outside [0, kMaxQuestions).
  explicit QuestionId(int index);

  int index() const { return index_; }
  std::string ToString() const;  // "Q3"

  auto operator<=>(const QuestionId&) const = default;

 private:
  int8_t index_;
};

enum class TokenKind : uint8_t {
  kQuestion,
  kAnd,
  kOr,
  kNot,
  kOpen,
  kClose,
  kBos,
  kEos,
};

// One decoder vocabulary symbol. The defaulted ordering (questions
// ascending, then and, or, not, open, close) is the decoder tie-break order.
struct Token {
  TokenKind kind = TokenKind::kQuestion;
  int8_t question = 0;  // meaningful only for kQuestion

  static Token Question(QuestionId q) { return {TokenKind::kQuestion, static_cast<int8_t>(q.index())}; }
  static constexpr Token And() { return {TokenKind::kAnd, 0}; }
  static constexpr Token Or() { return {TokenKind::kOr, 0}; }
  static constexpr Token Not() { return {TokenKind::kNot, 0}; }
  static constexpr Token Open() { return {TokenKind::kOpen, 0}; }
  static constexpr Token Close() { return {TokenKind::kClose, 0}; }
  static constexpr Token Bos() { return {TokenKind::kBos, 0}; }
  static constexpr Token Eos() { return {TokenKind::kEos, 0}; }

  bool is_question() const { return kind == TokenKind::kQuestion; }
  QuestionId question_id() const { return QuestionId(question); }

  auto operator<=>(const Token&) const = default;
};

using TokenSequence = std::vector<Token>;

// Surface spellings. kPlain: Q0 and or not ( ) <s> </s>.
// kBracket: [Q0] [AND] [OR] [NOT] [BR] [/BR] <s> </s>.
enum class Spelling { kPlain, kBracket };

std::string Spell(Token token, Spelling spelling = Spelling::kPlain);
std::string JoinTokens(std::span<const Token> tokens,
                       Spelling spelling = Spelling::kPlain);

class UnknownTokenError : public Error {
 public:
  UnknownTokenError(std::string word, int position);
  const std::string& word() const { return word_; }
  int position() const { return position_; }

 private:
  std::string word_;
  int position_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int position);
  // Index of the offending token; equal to the sequence length when input
  // ended early.
  int position() const { return position_; }

 private:
  int position_;
};

class DuplicateQuestionError : public Error {
 public:
  explicit DuplicateQuestionError(QuestionId q);
  QuestionId question() const { return question_; }

 private:
  QuestionId question_;
};

// Splits text into tokens. Whitespace separates words; "(" and ")" are
// tokens on their own so "(Q1)" needs no spaces. Both spellings are
// accepted, case-insensitively. Positions in UnknownTokenError count words.
TokenSequence Tokenize(std::string_view text);

class ExprTree {
 public:
  enum class Kind : uint8_t { kLeaf, kNot, kAnd, kOr };

  static ExprTree Leaf(QuestionId q);
  static ExprTree Not(ExprTree child);
  // And/Or need at least two children with pairwise disjoint questions.
  static ExprTree And(std::vector<ExprTree> children);
  static ExprTree Or(std::vector<ExprTree> children);
  // Builds an And or Or node; kind must be one of those two.
  static ExprTree Nary(Kind kind, std::vector<ExprTree> children);

  Kind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == Kind::kLeaf; }
  bool is_not() const { return kind_ == Kind::kNot; }
  bool is_nary() const { return kind_ == Kind::kAnd || kind_ == Kind::kOr; }

  QuestionId question() const;  // leaves only
  const std::vector<ExprTree>& children() const { return children_; }
  const ExprTree& operand() const { return children_.front(); }  // Not only

  // Leaves in left-to-right order.
  std::vector<QuestionId> Questions() const;
  int QuestionCount() const;
  // Bitmask of question indices used by the tree.
  uint32_t QuestionMask() const;
  int MaxQuestionIndex() const;
  // Number of and/or/not nodes.
  int OperatorCount() const;
  bool Contains(Kind kind) const;

  bool operator==(const ExprTree& other) const = default;

 private:
  ExprTree(Kind kind, int8_t question, std::vector<ExprTree> children)
      : kind_(kind), question_(question), children_(std::move(children)) {}

  Kind kind_;
  int8_t question_;
  std::vector<ExprTree> children_;
};

// Throws SyntaxError or DuplicateQuestionError. A leading Bos and trailing
// Eos are skipped.
ExprTree Parse(std::span<const Token> tokens);
ExprTree ParseExpr(std::string_view text);

// Non-throwing variant used in hot loops; returns nullopt exactly when
// Parse would throw.
std::optional<ExprTree> TryParse(std::span<const Token> tokens);

TokenSequence Serialize(const ExprTree& tree);
std::string ToString(const ExprTree& tree, Spelling spelling = Spelling::kPlain);

// Plain serialization; lets test frameworks print trees.
std::ostream& operator<<(std::ostream& os, const ExprTree& tree);

// True iff Tokenize and Parse both succeed.
bool IsValid(std::string_view text);

}  // namespace polich

#endif  // POLICH_EXPR_H_
