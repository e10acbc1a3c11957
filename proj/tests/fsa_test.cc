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


#include "polich/fsa.h"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "polich/logic.h"

namespace polich {
namespace {

Token Q(int i) { return Token::Question(QuestionId(i)); }

DecoderState Feed(int n, const std::string& prefix, const DecodeConfig& config = {}) {
  DecoderState s = DecoderState::Initial(n);
  for (const Token& t : Tokenize(prefix)) s = NextState(s, t, config);
  return s;
}

DecodeConfig Strict() {
  DecodeConfig c;
  c.strict_replay = true;
  return c;
}

std::set<Token> AsSet(const std::vector<Token>& v) { return {v.begin(), v.end()}; }

TEST(NextStateTest, QuestionMovesToAfterTerm) {
  const DecoderState s = NextState(DecoderState::Initial(2), Q(0));
  EXPECT_EQ(s.phase(), FsaPhase::kAfterTerm);
  EXPECT_EQ(s.balance(), 0);
  EXPECT_EQ(s.unused(), std::vector<QuestionId>{QuestionId(1)});
}

TEST(NextStateTest, CloseDecrementsBalance) {
  DecoderState s = Feed(2, "( Q0 and Q1", Strict());
  ASSERT_EQ(s.balance(), 1);
  ASSERT_EQ(s.unused_count(), 0);
  s = NextState(s, Token::Close(), Strict());
  EXPECT_EQ(s.phase(), FsaPhase::kAfterTerm);
  EXPECT_EQ(s.balance(), 0);
}

TEST(NextStateTest, OperatorCannotStartTerm) {
  EXPECT_THROW(NextState(DecoderState::Initial(2), Token::And()), IllegalTransitionError);
  EXPECT_THROW(NextState(Feed(2, "Q0"), Q(1)), IllegalTransitionError);
  EXPECT_THROW(NextState(Feed(2, "Q0 and"), Q(0)), IllegalTransitionError);
  EXPECT_THROW(NextState(DecoderState::Initial(2), Token::Bos()), IllegalTransitionError);
}

TEST(NextStateTest, NotAndOpenTransitions) {
  DecoderState s = NextState(DecoderState::Initial(3), Token::Not());
  EXPECT_EQ(s.phase(), FsaPhase::kExpectTermAfterNot);
  s = NextState(s, Token::Open());
  EXPECT_EQ(s.phase(), FsaPhase::kExpectTerm);
  EXPECT_EQ(s.balance(), 1);
}

TEST(InitialTest, QuestionCountRange) {
  EXPECT_THROW(DecoderState::Initial(0), Error);
  EXPECT_THROW(DecoderState::Initial(11), Error);
  EXPECT_EQ(DecoderState::Initial(10).unused_count(), 10);
}

TEST(ValidTokensTest, AfterQ0AndOneLeft) {
  // Mask after "Q0 and" with one question left.
  EXPECT_EQ(AsSet(ValidTokens(Feed(2, "Q0 and", Strict()), Strict())),
            (std::set<Token>{Token::Not(), Token::Open(), Q(1)}));
  // The default budget withholds "(" when only one question remains.
  EXPECT_EQ(AsSet(ValidTokens(Feed(2, "Q0 and"))), (std::set<Token>{Token::Not(), Q(1)}));
}

TEST(ValidTokensTest, AfterSingleQuestion) {
  EXPECT_EQ(ValidTokens(Feed(2, "Q0")), (std::vector<Token>{Token::And(), Token::Or()}));
}

TEST(ValidTokensTest, InsideGroupWithQuestionLeft) {
  // Oracle: try every single-token continuation and keep those with a
  // valid completion, found by completing with "and Q2" / "Q2" plus closes.
  const std::string prefix = "( Q0 or Q1";
  std::set<Token> extendable;
  for (const char* next : {"Q0", "Q1", "Q2", "and", "or", "not", "(", ")"}) {
    for (const char* rest : {"Q2 )", ") Q2", "and Q2", "and Q2 )", "Q2", ""}) {
      const std::string text = prefix + " " + next + " " + rest;
      if (IsValid(text) && ParseExpr(text).QuestionCount() == 3) {
        extendable.insert(Tokenize(next).front());
      }
    }
  }
  EXPECT_EQ(extendable, (std::set<Token>{Token::And(), Token::Or(), Token::Close()}));
  EXPECT_EQ(AsSet(ValidTokens(Feed(3, prefix, Strict()), Strict())), extendable);
}

TEST(ValidTokensTest, DefaultStartMask) {
  EXPECT_EQ(ValidTokens(DecoderState::Initial(2)),
            (std::vector<Token>{Q(0), Q(1), Token::Not()}));
  EXPECT_EQ(ValidTokens(DecoderState::Initial(3)),
            (std::vector<Token>{Q(0), Q(1), Q(2), Token::Not(), Token::Open()}));
  const std::vector<Token> ten = ValidTokens(DecoderState::Initial(10));
  EXPECT_EQ(std::count_if(ten.begin(), ten.end(), [](Token t) { return t.is_question(); }), 10);
}

TEST(ValidTokensTest, DoubleNegationFlag) {
  const DecoderState s = Feed(2, "not");
  EXPECT_EQ(AsSet(ValidTokens(s)).count(Token::Not()), 0u);
  DecodeConfig c;
  c.allow_double_negation = true;
  EXPECT_EQ(AsSet(ValidTokens(s, c)).count(Token::Not()), 1u);
}

TEST(ValidTokensTest, NestingCap) {
  DecodeConfig c;
  c.max_nesting_depth = 1;
  const DecoderState s = Feed(4, "Q0 and (", c);
  EXPECT_EQ(AsSet(ValidTokens(s, c)).count(Token::Open()), 0u);
  c.max_nesting_depth = 0;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(ValidTokensTest, DoneHasNoTokens) {
  EXPECT_TRUE(ValidTokens(Finish(Feed(1, "Q0"))).empty());
  EXPECT_THROW(Finish(Feed(2, "Q0")), Error);
}

TEST(ReplayScorerTest, Examples) {
  const TokenSequence target = Tokenize("Q0 and Q1");
  auto scorer = MakeReplayScorer(target);
  const std::vector<Token> cands = {Q(0), Q(1), Token::Not()};
  EXPECT_EQ(scorer->Score({}, cands).at(Q(0)), 1.0);
  EXPECT_EQ(scorer->Score({}, cands).at(Q(1)), 0.0);
  const TokenSequence after_q0 = {Q(0)};
  const std::vector<Token> ops = {Token::And(), Token::Or()};
  EXPECT_EQ(scorer->Score(after_q0, ops).at(Token::And()), 1.0);
  auto exhausted = MakeReplayScorer({Q(0)});
  for (const auto& [t, v] : exhausted->Score(after_q0, ops)) EXPECT_EQ(v, 0.0);
}

TEST(DecodeTest, ReplayNegatedDisjunction) {
  auto scorer = MakeReplayScorer(Tokenize("not ( Q0 or Q1 )"));
  EXPECT_EQ(Decode(*scorer, 2, Strict()),
            (TokenSequence{Token::Not(), Token::Open(), Q(0), Token::Or(), Q(1), Token::Close()}));
}

TEST(DecodeTest, DanglingParenthesisAutoClosed) {
  auto scorer = MakeReplayScorer(Tokenize("( Q0 and Q1"));
  EXPECT_EQ(Decode(*scorer, 2, Strict()),
            (TokenSequence{Token::Open(), Q(0), Token::And(), Q(1), Token::Close()}));
}

TEST(DecodeTest, UniformSingleQuestion) {
  // Hand trace: the only mask is {Q0, not}; the tie goes to Q0, after which
  // nothing is unused.
  auto scorer = MakeUniformScorer();
  EXPECT_EQ(Decode(*scorer, 1), TokenSequence{Q(0)});
}

TEST(DecodeTest, MissingScoreIsScorerFailure) {
  class Partial : public TokenScorer {
   public:
    std::map<Token, double> Score(std::span<const Token>, std::span<const Token> c) override {
      return {{c.front(), 1.0}};
    }
  } partial;
  EXPECT_THROW(Decode(partial, 2), ScorerFailureError);
}

TEST(DecodeTest, SequenceTableScorer) {
  auto scorer = MakeSequenceTableScorer({{Tokenize("Q1 or not Q0"), 0.9},
                                         {Tokenize("Q0 and Q1"), 0.4}});
  EXPECT_EQ(JoinTokens(Decode(*scorer, 2)), "Q1 or not Q0");
}

TEST(DecodeTest, TraceFormat) {
  auto scorer = MakeReplayScorer(Tokenize("Q1 and Q0"));
  std::ostringstream trace;
  Decode(*scorer, 2, {}, &trace);
  EXPECT_EQ(trace.str(),
            "0\tExpectTerm\t0\tQ0,Q1\tQ0,Q1,not\tQ1\n"
            "1\tAfterTerm\t0\tQ0\tand,or\tand\n"
            "2\tExpectTerm\t0\tQ0\tQ0,not\tQ0\n");
}

TEST(DecodeTest, Delimiters) {
  EXPECT_EQ(JoinTokens(WithDelimiters(Tokenize("Q0"))), "<s> Q0 </s>");
}

// Property: every decode is a valid read-once tree over all questions.
TEST(SoundnessProperty, RandomScorers) {
  DecodeConfig double_neg;
  double_neg.allow_double_negation = true;
  for (const DecodeConfig& config : {DecodeConfig{}, Strict(), double_neg}) {
    for (int n = 1; n <= 6; ++n) {
      for (uint64_t seed = 0; seed < 300; ++seed) {
        auto scorer = MakeRandomScorer(seed * 31 + n);
        const TokenSequence out = Decode(*scorer, n, config);
        const std::optional<ExprTree> tree = TryParse(out);
        ASSERT_TRUE(tree.has_value()) << JoinTokens(out);
        ASSERT_EQ(tree->QuestionMask(), (1u << n) - 1) << JoinTokens(out);
      }
    }
  }
}

// Property: replaying any canonical tree reproduces it token for token.
TEST(CompletenessProperty, CanonicalTreesUpToFour) {
  for (int n = 1; n <= 4; ++n) {
    for (const ExprTree& t : EnumerateTrees(n, Dedup::kSyntactic)) {
      const TokenSequence target = Serialize(t);
      auto strict = MakeReplayScorer(target);
      ASSERT_EQ(Decode(*strict, n, Strict()), target) << ToString(t);
      // Canonical trees up to four questions fit the default regime too.
      auto defaults = MakeReplayScorer(target);
      ASSERT_EQ(Decode(*defaults, n), target) << ToString(t);
    }
  }
}

TEST(CompletenessProperty, RedundantParenthesisVariants) {
  std::mt19937_64 rng(11);
  int replayed = 0;
  for (int n = 1; n <= 4; ++n) {
    const std::vector<ExprTree> trees = EnumerateTrees(n, Dedup::kSyntactic);
    for (int i = 0; i < 300; ++i) {
      TokenSequence seq = Serialize(trees[rng() % trees.size()]);
      // Wrap a random question in redundant parentheses.
      std::vector<size_t> leaves;
      for (size_t k = 0; k < seq.size(); ++k) {
        if (seq[k].is_question()) leaves.push_back(k);
      }
      const size_t at = leaves[rng() % leaves.size()];
      seq.insert(seq.begin() + at + 1, Token::Close());
      seq.insert(seq.begin() + at, Token::Open());
      if (rng() % 2 == 0) {
        seq.insert(seq.begin(), Token::Open());
        seq.push_back(Token::Close());
      }
      if (seq.size() > 12) continue;
      ASSERT_TRUE(TryParse(seq).has_value()) << JoinTokens(seq);
      auto scorer = MakeReplayScorer(seq);
      ASSERT_EQ(Decode(*scorer, n, Strict()), seq) << JoinTokens(seq);
      ++replayed;
    }
  }
  EXPECT_GT(replayed, 500);
}

// Brute-force oracle for mask minimality. Enumerates token sequences of
// up to max_len tokens, pruning only sequences that cannot become valid
// for local reasons (an operator followed by an operator, a reused
// question, a negative balance, more questions or binary operators than
// available, fewer tokens left than open parentheses plus missing
// questions), and keeps the valid complete ones: parseable, using all n
// questions and without "not not". Records every prefix of a valid
// sequence.
class CompletionOracle {
 public:
  CompletionOracle(int n, int max_len) : n_(n), max_len_(max_len) {
    for (int i = 0; i < n; ++i) alphabet_.push_back(Q(i));
    for (Token t : {Token::And(), Token::Or(), Token::Not(), Token::Open(), Token::Close()}) {
      alphabet_.push_back(t);
    }
    TokenSequence seq;
    Search(seq, 0, 0, 0);
  }

  bool Extendable(const TokenSequence& prefix) const { return prefixes_.contains(prefix); }

 private:
  static bool EndsTerm(const TokenSequence& s) {
    return !s.empty() && (s.back().is_question() || s.back().kind == TokenKind::kClose);
  }

  void Search(TokenSequence& seq, int balance, int used_mask, int binary_ops) {
    const int used = std::popcount(static_cast<unsigned>(used_mask));
    if (static_cast<int>(seq.size()) + balance + (n_ - used) > max_len_) return;
    if (used == n_ && balance == 0 && EndsTerm(seq)) {
      const std::optional<ExprTree> tree = TryParse(seq);
      bool double_not = false;
      for (size_t i = 1; i < seq.size(); ++i) {
        double_not |= seq[i].kind == TokenKind::kNot && seq[i - 1].kind == TokenKind::kNot;
      }
      if (tree && !double_not) {
        for (size_t k = 0; k <= seq.size(); ++k) {
          prefixes_.insert(TokenSequence(seq.begin(), seq.begin() + k));
        }
      }
    }
    for (const Token& t : alphabet_) {
      const bool after_term = EndsTerm(seq);
      const bool is_term_start = t.is_question() || t.kind == TokenKind::kNot ||
                                 t.kind == TokenKind::kOpen;
      if (after_term == is_term_start) continue;  // bigram legality
      int next_balance = balance;
      int next_used = used_mask;
      int next_ops = binary_ops;
      if (t.is_question()) {
        if (used_mask & (1 << t.question)) continue;
        next_used |= 1 << t.question;
      } else if (t.kind == TokenKind::kOpen) {
        ++next_balance;
      } else if (t.kind == TokenKind::kClose) {
        if (--next_balance < 0) continue;
      } else if (t.kind == TokenKind::kAnd || t.kind == TokenKind::kOr) {
        if (++next_ops > n_ - 1) continue;
      }
      seq.push_back(t);
      Search(seq, next_balance, next_used, next_ops);
      seq.pop_back();
    }
  }

  int n_;
  int max_len_;
  std::vector<Token> alphabet_;
  std::set<TokenSequence> prefixes_;
};

// Property: in strict mode the mask is exactly the set of tokens that can
// still be completed, checked against completions of up to ten tokens from
// every reachable state of up to four tokens.
TEST(MaskMinimalityProperty, BruteForceUpToThreeQuestions) {
  constexpr int kPrefix = 4;
  constexpr int kCompletion = 10;
  const DecodeConfig strict = Strict();
  for (int n = 1; n <= 3; ++n) {
    const CompletionOracle oracle(n, kPrefix + 1 + kCompletion);
    std::vector<Token> alphabet;
    for (int i = 0; i < n; ++i) alphabet.push_back(Q(i));
    for (Token t : {Token::And(), Token::Or(), Token::Not(), Token::Open(), Token::Close()}) {
      alphabet.push_back(t);
    }
    int states = 0;
    std::function<void(const DecoderState&)> visit = [&](const DecoderState& s) {
      ++states;
      const std::set<Token> mask = AsSet(ValidTokens(s, strict));
      for (const Token& t : alphabet) {
        TokenSequence next = s.emitted();
        next.push_back(t);
        ASSERT_EQ(mask.contains(t), oracle.Extendable(next))
            << "n=" << n << " prefix '" << JoinTokens(s.emitted()) << "' token " << Spell(t);
      }
      if (static_cast<int>(s.emitted().size()) == kPrefix) return;
      for (const Token& t : mask) visit(NextState(s, t, strict));
    };
    visit(DecoderState::Initial(n));
    EXPECT_GT(states, 10);
  }
}

// Longest sequence the default regime can emit, exploring only the lowest
// unused question at each step (masks do not depend on which ids remain).
int LongestDecode(const DecoderState& s, const DecodeConfig& config) {
  if (s.unused_count() == 0) return static_cast<int>(s.emitted().size()) + s.balance();
  int best = 0;
  bool question_tried = false;
  for (const Token& t : ValidTokens(s, config)) {
    if (t.is_question()) {
      if (question_tried) continue;
      question_tried = true;
    }
    best = std::max(best, LongestDecode(NextState(s, t, config), config));
  }
  return best;
}

TEST(TerminationProperty, LongestDefaultDecode) {
  const DecodeConfig config;
  const int d = config.max_nesting_depth;
  for (int n = 1; n <= 6; ++n) {
    const int longest = LongestDecode(DecoderState::Initial(n), config);
    EXPECT_LE(longest, std::max(1, 6 * n - 4)) << "n=" << n;
    if (n <= 5) EXPECT_LE(longest, 4 * n + 2 * d) << "n=" << n;
  }
  // The tighter linear bound stops holding at six questions: this valid
  // decode has 32 tokens, more than 4 * 6 + 2 * 3.
  const TokenSequence long_seq = Tokenize(
      "not ( Q0 and not ( Q1 and not ( Q2 and not Q3 ) ) ) and not ( Q4 and not Q5 )");
  EXPECT_TRUE(Accepts(long_seq, 6, config));
  EXPECT_EQ(LongestDecode(DecoderState::Initial(6), config), 32);
}

}  // namespace
}  // namespace polich
