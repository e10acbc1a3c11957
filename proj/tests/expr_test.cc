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
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "polich/fsa.h"
#include "polich/logic.h"

namespace polich {
namespace {

ExprTree L(int i) { return ExprTree::Leaf(QuestionId(i)); }

TEST(QuestionIdTest, RangeIsZeroToNine) {
  EXPECT_EQ(QuestionId(0).ToString(), "Q0");
  EXPECT_EQ(QuestionId(9).ToString(), "Q9");
  EXPECT_THROW(QuestionId(10), Error);
  EXPECT_THROW(QuestionId(-1), Error);
}

TEST(TokenizeTest, PlainSpelling) {
  const TokenSequence expected = {Token::Question(QuestionId(0)), Token::And(),
                                  Token::Not(), Token::Question(QuestionId(1))};
  EXPECT_EQ(Tokenize("Q0 and not Q1"), expected);
}

TEST(TokenizeTest, EmptyInput) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(TokenizeTest, UnknownWordCarriesPosition) {
  try {
    Tokenize("Q0 xor Q1");
    FAIL() << "expected UnknownTokenError";
  } catch (const UnknownTokenError& e) {
    EXPECT_EQ(e.word(), "xor");
    EXPECT_EQ(e.position(), 1);
  }
}

TEST(TokenizeTest, CaseParenthesesAndBracketSpelling) {
  EXPECT_EQ(Tokenize("Q0  AND  Q1"), Tokenize("Q0 and Q1"));
  EXPECT_EQ(Tokenize("not (Q0 or Q1)"), Tokenize("not ( Q0 or Q1 )"));
  EXPECT_EQ(Tokenize("[NOT] [BR] [Q0] [OR] [Q1] [/BR]"), Tokenize("not ( Q0 or Q1 )"));
  EXPECT_EQ(Tokenize("<s> Q0 </s>"),
            (TokenSequence{Token::Bos(), Token::Question(QuestionId(0)), Token::Eos()}));
  EXPECT_THROW(Tokenize("Q10"), UnknownTokenError);
}

TEST(ParseTest, RedundantParenthesesAccepted) {
  EXPECT_EQ(ParseExpr("Q0 or (Q1)"), ExprTree::Or({L(0), L(1)}));
}

TEST(ParseTest, NotBetweenQuestionsRejected) {
  EXPECT_THROW(ParseExpr("Q0 not Q1"), SyntaxError);
}

TEST(ParseTest, UnbalancedRejected) {
  EXPECT_THROW(ParseExpr("Q0 or (Q1"), SyntaxError);
  EXPECT_THROW(ParseExpr("Q0 or Q1)"), SyntaxError);
}

TEST(ParseTest, CorpusExample) {
  EXPECT_EQ(ParseExpr("Q0 and Q1 and not (Q2 or Q3)"),
            ExprTree::And({L(0), L(1), ExprTree::Not(ExprTree::Or({L(2), L(3)}))}));
}

TEST(ParseTest, PrecedenceNotOverAndOverOr) {
  EXPECT_EQ(ParseExpr("Q0 or Q1 and Q2"),
            ExprTree::Or({L(0), ExprTree::And({L(1), L(2)})}));
  EXPECT_EQ(ParseExpr("not Q0 and Q1"), ExprTree::And({ExprTree::Not(L(0)), L(1)}));
  EXPECT_EQ(ParseExpr("Q0 and Q1 or Q2 and Q3"),
            ExprTree::Or({ExprTree::And({L(0), L(1)}), ExprTree::And({L(2), L(3)})}));
}

TEST(ParseTest, ParenthesizedSameOperatorStaysNested) {
  EXPECT_EQ(ParseExpr("(Q0 and Q1) and Q2"),
            ExprTree::And({ExprTree::And({L(0), L(1)}), L(2)}));
  EXPECT_EQ(ParseExpr("Q0 and Q1 and Q2"), ExprTree::And({L(0), L(1), L(2)}));
}

TEST(ParseTest, MalformedInputs) {
  for (const char* text : {"", "Q0 Q1", "and Q0", "Q0 and", "()", "( )", "Q0 ( Q1 )",
                           "not", "Q0 and or Q1", "Q0 )("}) {
    EXPECT_THROW(ParseExpr(text), SyntaxError) << text;
  }
}

TEST(ParseTest, DuplicateQuestionRejected) {
  try {
    ParseExpr("Q0 and not Q0");
    FAIL();
  } catch (const DuplicateQuestionError& e) {
    EXPECT_EQ(e.question(), QuestionId(0));
  }
}

TEST(ParseTest, DoubleNegationAccepted) {
  EXPECT_EQ(ParseExpr("not not Q0"), ExprTree::Not(ExprTree::Not(L(0))));
}

TEST(ParseTest, DelimitersSkipped) {
  EXPECT_EQ(ParseExpr("<s> Q0 and Q1 </s>"), ParseExpr("Q0 and Q1"));
  EXPECT_THROW(ParseExpr("Q0 <s> and Q1"), SyntaxError);
}

TEST(SerializeTest, MinimalParentheses) {
  EXPECT_EQ(ToString(ExprTree::Or({L(0), L(1)})), "Q0 or Q1");
  EXPECT_EQ(ToString(ExprTree::Not(ExprTree::Or({L(0), L(1)}))), "not ( Q0 or Q1 )");
  EXPECT_EQ(ToString(ExprTree::And({L(0), ExprTree::Or({L(1), L(2)})})),
            "Q0 and ( Q1 or Q2 )");
  EXPECT_EQ(ToString(ExprTree::Or({L(0), ExprTree::And({L(1), L(2)})})), "Q0 or Q1 and Q2");
  EXPECT_EQ(ToString(ExprTree::And({ExprTree::And({L(0), L(1)}), L(2)})),
            "( Q0 and Q1 ) and Q2");
  EXPECT_EQ(ToString(ExprTree::Not(ExprTree::Or({L(0), L(1)})), Spelling::kBracket),
            "[NOT] [BR] [Q0] [OR] [Q1] [/BR]");
}

TEST(SerializeTest, TokenSequences) {
  EXPECT_EQ(Serialize(ExprTree::Not(ExprTree::Or({L(0), L(1)}))),
            (TokenSequence{Token::Not(), Token::Open(), Token::Question(QuestionId(0)),
                           Token::Or(), Token::Question(QuestionId(1)), Token::Close()}));
}

TEST(IsValidTest, ReferenceExamples) {
  EXPECT_TRUE(IsValid("Q0 and not Q1"));
  EXPECT_TRUE(IsValid("Q0 or (Q1)"));
  EXPECT_TRUE(IsValid("not Q0"));
  EXPECT_FALSE(IsValid("Q0 not Q1"));
  EXPECT_FALSE(IsValid("Q0 or (Q1"));
  EXPECT_FALSE(IsValid("Q0 xor Q1"));
}

TEST(ExprTreeTest, NaryInvariants) {
  EXPECT_THROW(ExprTree::And({L(0)}), Error);
  EXPECT_THROW(ExprTree::Or({L(0), L(0)}), Error);
  EXPECT_THROW(ExprTree::Nary(ExprTree::Kind::kNot, {L(0), L(1)}), Error);
  const ExprTree t = ParseExpr("Q2 and not (Q0 or Q4)");
  EXPECT_EQ(t.QuestionCount(), 3);
  EXPECT_EQ(t.QuestionMask(), 0b10101u);
  EXPECT_EQ(t.MaxQuestionIndex(), 4);
  EXPECT_EQ(t.OperatorCount(), 3);
  EXPECT_TRUE(t.Contains(ExprTree::Kind::kNot));
  EXPECT_FALSE(L(0).Contains(ExprTree::Kind::kAnd));
}

// Property: parse(serialize(t)) == t.

TEST(RoundTripProperty, ExhaustiveUpToThreeQuestions) {
  for (int n = 1; n <= 3; ++n) {
    for (const ExprTree& t : EnumerateTrees(n, Dedup::kSyntactic)) {
      ASSERT_EQ(Parse(Serialize(t)), t) << ToString(t);
      ASSERT_EQ(ParseExpr(ToString(t, Spelling::kBracket)), t);
    }
  }
}

TEST(RoundTripProperty, RandomTreesUpToSixQuestions) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 6;
    const ExprTree t = SampleUniformTree(n, rng);
    ASSERT_EQ(Parse(Serialize(t)), t) << ToString(t);
    // Non-canonical shapes survive too.
    const ExprTree r = RewriteEquivalent(n > 1 ? t : ParseExpr("Q0 and Q1"), i);
    ASSERT_EQ(Parse(Serialize(r)), r) << ToString(r);
  }
}

TEST(ReadOnceProperty, EveryRepeatedIdIsRejected) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const std::string text = "Q" + std::to_string(a) + " or not Q" + std::to_string(b);
      EXPECT_EQ(IsValid(text), a != b) << text;
    }
  }
}

// Property: the parser and the strict automaton accept the same language
// over three questions for every sequence of up to eight tokens.
TEST(AcceptanceParityProperty, ExhaustiveLengthEight) {
  const std::vector<Token> alphabet = {
      Token::Question(QuestionId(0)), Token::Question(QuestionId(1)),
      Token::Question(QuestionId(2)), Token::And(), Token::Or(), Token::Not(),
      Token::Open(), Token::Close()};
  DecodeConfig strict;
  strict.strict_replay = true;
  strict.allow_double_negation = true;
  long checked = 0;
  long accepted = 0;
  TokenSequence seq;
  // Walk the automaton alongside the sequence so rejected prefixes are not
  // re-run, but still call the parser on every sequence.
  std::function<void(const std::optional<DecoderState>&)> walk =
      [&](const std::optional<DecoderState>& state) {
        const bool fsa = state && state->phase() == FsaPhase::kAfterTerm &&
                         state->balance() == 0;
        const bool parser = TryParse(seq).has_value();
        ++checked;
        accepted += parser;
        if (fsa != parser) {
          ADD_FAILURE() << "disagreement on '" << JoinTokens(seq) << "': fsa=" << fsa
                        << " parser=" << parser;
        }
        if (seq.size() == 8) return;
        for (const Token& t : alphabet) {
          std::optional<DecoderState> next;
          if (state) {
            const std::vector<Token> valid = ValidTokens(*state, strict);
            if (std::find(valid.begin(), valid.end(), t) != valid.end()) {
              next = NextState(*state, t, strict);
            }
          }
          seq.push_back(t);
          walk(next);
          seq.pop_back();
        }
      };
  walk(DecoderState::Initial(3));
  EXPECT_EQ(checked, (std::pow(8, 9) - 1) / 7);
  EXPECT_GT(accepted, 0);
  // Spot check the automaton entry point itself.
  EXPECT_TRUE(Accepts(Tokenize("Q0 or ( Q1 )"), 3, strict));
  EXPECT_FALSE(Accepts(Tokenize("Q0 not Q1"), 3, strict));
}

}  // namespace
}  // namespace polich
