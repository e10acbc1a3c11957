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

#include "polich/expr.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <utility>

namespace polich {

QuestionId::QuestionId(int index) : index_(static_cast<int8_t>(index)) {
  if (index < 0 || index >= kMaxQuestions) {
    throw Error("question index " + std::to_string(index) +
                " outside Q0..Q" + std::to_string(kMaxQuestions - 1));
  }
}

std::string QuestionId::ToString() const {
  return "Q" + std::to_string(index_);
}

UnknownTokenError::UnknownTokenError(std::string word, int position)
    : Error("unknown token '" + word + "' at position " +
            std::to_string(position)),
      word_(std::move(word)),
      position_(position) {}

SyntaxError::SyntaxError(const std::string& what, int position)
    : Error("syntax error at token " + std::to_string(position) + ": " + what),
      position_(position) {}

DuplicateQuestionError::DuplicateQuestionError(QuestionId q)
    : Error("question " + q.ToString() + " occurs more than once"),
      question_(q) {}

std::string Spell(Token token, Spelling spelling) {
  const bool bracket = spelling == Spelling::kBracket;
  switch (token.kind) {
    case TokenKind::kQuestion:
      return bracket ? "[Q" + std::to_string(token.question) + "]"
                     : "Q" + std::to_string(token.question);
    case TokenKind::kAnd:
      return bracket ? "[AND]" : "and";
    case TokenKind::kOr:
      return bracket ? "[OR]" : "or";
    case TokenKind::kNot:
      return bracket ? "[NOT]" : "not";
    case TokenKind::kOpen:
      return bracket ? "[BR]" : "(";
    case TokenKind::kClose:
      return bracket ? "[/BR]" : ")";
    case TokenKind::kBos:
      return "<s>";
    case TokenKind::kEos:
      return "</s>";
  }
  return "?";
}

std::string JoinTokens(std::span<const Token> tokens, Spelling spelling) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += Spell(t, spelling);
  }
  return out;
}

namespace {

std::optional<Token> LookupWord(std::string_view word) {
  std::string w(word);
  std::transform(w.begin(), w.end(), w.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (w.size() >= 2 && w.front() == '[' && w.back() == ']') {
    const std::string inner = w.substr(1, w.size() - 2);
    if (inner == "and") return Token::And();
    if (inner == "or") return Token::Or();
    if (inner == "not") return Token::Not();
    if (inner == "br") return Token::Open();
    if (inner == "/br") return Token::Close();
    w = inner;  // "[q3]" falls through to the question rule
  } else {
    if (w == "and") return Token::And();
    if (w == "or") return Token::Or();
    if (w == "not") return Token::Not();
    if (w == "(") return Token::Open();
    if (w == ")") return Token::Close();
    if (w == "<s>") return Token::Bos();
    if (w == "</s>") return Token::Eos();
  }
  if (w.size() == 2 && w[0] == 'q' && std::isdigit(static_cast<unsigned char>(w[1]))) {
    return Token::Question(QuestionId(w[1] - '0'));
  }
  return std::nullopt;
}

}  // namespace

TokenSequence Tokenize(std::string_view text) {
  TokenSequence tokens;
  int position = 0;
  size_t i = 0;
  auto emit = [&](std::string_view word) {
    std::optional<Token> token = LookupWord(word);
    if (!token) throw UnknownTokenError(std::string(word), position);
    tokens.push_back(*token);
    ++position;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      emit(text.substr(i, 1));
      ++i;
    } else if (c == '[') {
      size_t end = text.find(']', i);
      end = end == std::string_view::npos ? text.size() : end + 1;
      emit(text.substr(i, end - i));
      i = end;
    } else {
      size_t end = i;
      while (end < text.size() &&
             !std::isspace(static_cast<unsigned char>(text[end])) &&
             text[end] != '(' && text[end] != ')' && text[end] != '[') {
        ++end;
      }
      emit(text.substr(i, end - i));
      i = end;
    }
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// ExprTree

namespace {

void CheckDisjoint(const std::vector<ExprTree>& children) {
  uint32_t seen = 0;
  for (const ExprTree& c : children) {
    const uint32_t mask = c.QuestionMask();
    if (seen & mask) {
      throw DuplicateQuestionError(QuestionId(std::countr_zero(seen & mask)));
    }
    seen |= mask;
  }
}

}  // namespace

ExprTree ExprTree::Leaf(QuestionId q) {
  return ExprTree(Kind::kLeaf, static_cast<int8_t>(q.index()), {});
}

ExprTree ExprTree::Not(ExprTree child) {
  std::vector<ExprTree> children;
  children.push_back(std::move(child));
  return ExprTree(Kind::kNot, 0, std::move(children));
}

ExprTree ExprTree::Nary(Kind kind, std::vector<ExprTree> children) {
  if (kind != Kind::kAnd && kind != Kind::kOr) {
    throw Error("Nary() expects kAnd or kOr");
  }
  if (children.size() < 2) {
    throw Error("and/or nodes need at least two children");
  }
  CheckDisjoint(children);
  return ExprTree(kind, 0, std::move(children));
}

ExprTree ExprTree::And(std::vector<ExprTree> children) {
  return Nary(Kind::kAnd, std::move(children));
}

ExprTree ExprTree::Or(std::vector<ExprTree> children) {
  return Nary(Kind::kOr, std::move(children));
}

QuestionId ExprTree::question() const {
  if (kind_ != Kind::kLeaf) throw Error("question() on a non-leaf node");
  return QuestionId(question_);
}

std::vector<QuestionId> ExprTree::Questions() const {
  std::vector<QuestionId> out;
  auto walk = [&out](const ExprTree& t, auto&& self) -> void {
    if (t.is_leaf()) {
      out.push_back(t.question());
      return;
    }
    for (const ExprTree& c : t.children()) self(c, self);
  };
  walk(*this, walk);
  return out;
}

int ExprTree::QuestionCount() const {
  if (is_leaf()) return 1;
  int n = 0;
  for (const ExprTree& c : children_) n += c.QuestionCount();
  return n;
}

uint32_t ExprTree::QuestionMask() const {
  if (is_leaf()) return 1u << question_;
  uint32_t mask = 0;
  for (const ExprTree& c : children_) mask |= c.QuestionMask();
  return mask;
}

int ExprTree::MaxQuestionIndex() const {
  return 31 - std::countl_zero(QuestionMask());
}

int ExprTree::OperatorCount() const {
  if (is_leaf()) return 0;
  int n = 1;
  for (const ExprTree& c : children_) n += c.OperatorCount();
  return n;
}

bool ExprTree::Contains(Kind kind) const {
  if (kind_ == kind) return true;
  return std::any_of(children_.begin(), children_.end(),
                     [kind](const ExprTree& c) { return c.Contains(kind); });
}

// ---------------------------------------------------------------------------
// Parser
//
//   or_expr  := and_expr ("or" and_expr)*
//   and_expr := unary ("and" unary)*
//   unary    := "not" unary | primary
//   primary  := question | "(" or_expr ")"

namespace {

struct ParseFailure {
  std::string message;
  int position = 0;
  std::optional<QuestionId> duplicate;
};

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {}

  std::optional<ExprTree> Run() {
    size_t begin = 0;
    size_t end = tokens_.size();
    if (begin < end && tokens_[begin].kind == TokenKind::kBos) ++begin;
    if (end > begin && tokens_[end - 1].kind == TokenKind::kEos) --end;
    pos_ = begin;
    end_ = end;
    std::optional<ExprTree> tree = ParseOr();
    if (!tree) return std::nullopt;
    if (pos_ != end_) return Fail("unexpected token after expression");
    return tree;
  }

  const ParseFailure& failure() const { return failure_; }

 private:
  std::nullopt_t Fail(std::string message) {
    failure_.message = std::move(message);
    failure_.position = static_cast<int>(pos_);
    return std::nullopt;
  }

  bool At(TokenKind kind) const {
    return pos_ < end_ && tokens_[pos_].kind == kind;
  }

  std::optional<ExprTree> ParseChain(TokenKind op, ExprTree::Kind kind) {
    std::optional<ExprTree> first =
        kind == ExprTree::Kind::kOr ? ParseAnd() : ParseUnary();
    if (!first) return std::nullopt;
    if (!At(op)) return first;
    std::vector<ExprTree> operands;
    operands.push_back(std::move(*first));
    while (At(op)) {
      ++pos_;
      std::optional<ExprTree> next =
          kind == ExprTree::Kind::kOr ? ParseAnd() : ParseUnary();
      if (!next) return std::nullopt;
      operands.push_back(std::move(*next));
    }
    return Combine(kind, std::move(operands));
  }

  std::optional<ExprTree> ParseOr() {
    return ParseChain(TokenKind::kOr, ExprTree::Kind::kOr);
  }
  std::optional<ExprTree> ParseAnd() {
    return ParseChain(TokenKind::kAnd, ExprTree::Kind::kAnd);
  }

  std::optional<ExprTree> ParseUnary() {
    if (At(TokenKind::kNot)) {
      ++pos_;
      std::optional<ExprTree> operand = ParseUnary();
      if (!operand) return std::nullopt;
      return ExprTree::Not(std::move(*operand));
    }
    return ParsePrimary();
  }

  std::optional<ExprTree> ParsePrimary() {
    if (pos_ >= end_) return Fail("expression ended early");
    const Token& t = tokens_[pos_];
    if (t.kind == TokenKind::kQuestion) {
      ++pos_;
      const uint32_t bit = 1u << t.question;
      if (used_ & bit) {
        failure_.duplicate = t.question_id();
        return Fail("duplicate question");
      }
      used_ |= bit;
      return ExprTree::Leaf(t.question_id());
    }
    if (t.kind == TokenKind::kOpen) {
      ++pos_;
      std::optional<ExprTree> inner = ParseOr();
      if (!inner) return std::nullopt;
      if (!At(TokenKind::kClose)) return Fail("expected ')'");
      ++pos_;
      return inner;
    }
    return Fail("expected a question, 'not' or '('");
  }

  // Questions were already checked for duplicates while scanning, so the
  // node constructor's own disjointness check cannot fire here.
  static ExprTree Combine(ExprTree::Kind kind, std::vector<ExprTree> operands) {
    return ExprTree::Nary(kind, std::move(operands));
  }

  std::span<const Token> tokens_;
  size_t pos_ = 0;
  size_t end_ = 0;
  uint32_t used_ = 0;
  ParseFailure failure_;
};

}  // namespace

std::optional<ExprTree> TryParse(std::span<const Token> tokens) {
  Parser parser(tokens);
  return parser.Run();
}

ExprTree Parse(std::span<const Token> tokens) {
  Parser parser(tokens);
  std::optional<ExprTree> tree = parser.Run();
  if (tree) return std::move(*tree);
  const ParseFailure& f = parser.failure();
  if (f.duplicate) throw DuplicateQuestionError(*f.duplicate);
  throw SyntaxError(f.message, f.position);
}

ExprTree ParseExpr(std::string_view text) { return Parse(Tokenize(text)); }

bool IsValid(std::string_view text) {
  try {
    return TryParse(Tokenize(text)).has_value();
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Serializer

namespace {

bool NeedsParens(const ExprTree& parent, const ExprTree& child) {
  if (child.is_leaf() || child.is_not()) return false;
  switch (parent.kind()) {
    case ExprTree::Kind::kNot:
      return true;
    case ExprTree::Kind::kAnd:
      return true;  // and-in-and keeps its grouping, or-in-and needs it
    case ExprTree::Kind::kOr:
      return child.kind() == ExprTree::Kind::kOr;
    case ExprTree::Kind::kLeaf:
      break;
  }
  return false;
}

void Emit(const ExprTree& tree, TokenSequence& out) {
  if (tree.is_leaf()) {
    out.push_back(Token::Question(tree.question()));
    return;
  }
  auto emit_child = [&](const ExprTree& child) {
    if (NeedsParens(tree, child)) {
      out.push_back(Token::Open());
      Emit(child, out);
      out.push_back(Token::Close());
    } else {
      Emit(child, out);
    }
  };
  if (tree.is_not()) {
    out.push_back(Token::Not());
    emit_child(tree.operand());
    return;
  }
  const Token op =
      tree.kind() == ExprTree::Kind::kAnd ? Token::And() : Token::Or();
  for (size_t i = 0; i < tree.children().size(); ++i) {
    if (i > 0) out.push_back(op);
    emit_child(tree.children()[i]);
  }
}

}  // namespace

TokenSequence Serialize(const ExprTree& tree) {
  TokenSequence out;
  Emit(tree, out);
  return out;
}

std::string ToString(const ExprTree& tree, Spelling spelling) {
  return JoinTokens(Serialize(tree), spelling);
}

std::ostream& operator<<(std::ostream& os, const ExprTree& tree) {
  return os << ToString(tree);
}

}  // namespace polich
