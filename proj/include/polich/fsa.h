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

// Greedy constrained decoding of expression trees.
//
// A finite state automaton tracks where the decoder is inside an infix
// expression (expecting a term, expecting a term right after "not", or
// after a complete term), how many parentheses are open and which question
// ids are still unused. At each step only the tokens that can still be
// extended to a valid read-once tree are handed to the scorer; the argmax
// is appended. Decoding stops once every question has been emitted and any
// open parentheses are closed automatically.
//
// Two masking regimes exist:
//
//  * strict_replay: the mask is exactly the set of tokens that have some
//    valid completion using every question. Any valid sequence can be
//    replayed.
//  * default: additionally every parenthesized group must contain a
//    top-level and/or, a bare group may not wrap the whole expression,
//    and nesting is capped at max_nesting_depth. An open parenthesis is
//    offered only while enough questions remain to give every pending
//    group its operator; at top level with nothing pending this is the
//    familiar "at least two unused questions" budget.

#ifndef POLICH_FSA_H_
#define POLICH_FSA_H_

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "polich/error.h"
#include "polich/expr.h"

namespace polich {

enum class FsaPhase : uint8_t {
  kExpectTerm,
  kExpectTermAfterNot,
  kAfterTerm,
  kDone,
};

std::string PhaseName(FsaPhase phase);

struct DecodeConfig {
  bool allow_double_negation = false;
  bool max_open_budget_rule = true;
  int max_nesting_depth = 3;
  bool strict_replay = false;

  // Throws Error when max_nesting_depth < 1.
  void Validate() const;
};

class IllegalTransitionError : public Error {
 public:
  IllegalTransitionError(Token token, FsaPhase phase);
  Token token() const { return token_; }

 private:
  Token token_;
};

class ScorerFailureError : public Error {
 public:
  using Error::Error;
};

class DecoderState {
 public:
  // Throws Error unless 1 <= question_count <= kMaxQuestions.
  static DecoderState Initial(int question_count);

  FsaPhase phase() const { return phase_; }
  int balance() const { return static_cast<int>(frames_.size()) - 1; }
  int question_count() const { return question_count_; }
  uint32_t unused_mask() const { return unused_; }
  int unused_count() const;
  std::vector<QuestionId> unused() const;
  bool is_unused(QuestionId q) const { return unused_ & (1u << q.index()); }
  const TokenSequence& emitted() const { return emitted_; }

  // Groups (including the top level) that still need a top-level operator
  // under the default regime.
  int pending_groups() const;

  bool operator==(const DecoderState&) const = default;

 private:
  friend DecoderState NextState(const DecoderState&, Token, const DecodeConfig&);
  friend DecoderState Finish(const DecoderState&);
  friend std::vector<Token> ValidTokens(const DecoderState&,
                                        const DecodeConfig&);

  // One entry per open parenthesis plus the top level at index 0.
  struct Frame {
    bool has_operator = false;
    // The first term of this frame is an un-negated parenthesized group, so
    // the frame needs an operator for that group to be non-redundant.
    bool led_by_bare_group = false;
    bool operator==(const Frame&) const = default;
  };

  bool FramePending(size_t i) const;

  FsaPhase phase_ = FsaPhase::kExpectTerm;
  int question_count_ = 0;
  uint32_t unused_ = 0;
  std::vector<Frame> frames_;
  TokenSequence emitted_;
};

// Tokens the automaton allows next, in tie-break order. Once every question
// is used only ")" remains possible (while parentheses are open); Decode
// stops asking at that point and closes them itself.
std::vector<Token> ValidTokens(const DecoderState& state,
                               const DecodeConfig& config = {});

// Throws IllegalTransitionError unless token is in ValidTokens(state, config).
DecoderState NextState(const DecoderState& state, Token token,
                       const DecodeConfig& config = {});

// Appends the closing parentheses and moves to Done. Throws Error while
// questions remain unused.
DecoderState Finish(const DecoderState& state);

// Closing tokens Finish() would append.
TokenSequence ClosingSuffix(const DecoderState& state);

// Language membership: true iff tokens drive the automaton over
// question_count questions to a complete term with no open parenthesis.
// Unlike Decode, not every question has to be used.
bool Accepts(std::span<const Token> tokens, int question_count,
             const DecodeConfig& config);

class TokenScorer {
 public:
  virtual ~TokenScorer() = default;
  // Must return a score for every candidate.
  virtual std::map<Token, double> Score(std::span<const Token> prefix,
                                        std::span<const Token> candidates) = 0;
};

// +1 to the target's next token, 0 to everything else.
std::unique_ptr<TokenScorer> MakeReplayScorer(TokenSequence target);
// Every candidate scores 0, so the tie-break order decides.
std::unique_ptr<TokenScorer> MakeUniformScorer();
// Independent uniform scores in [0, 1) from a seeded generator.
std::unique_ptr<TokenScorer> MakeRandomScorer(uint64_t seed);
// Sequence-level scores turned into a greedy token scorer: a candidate
// scores the best score among entries that extend prefix + candidate, or
// kUnscored when none does.
inline constexpr double kUnscored = -1e30;
std::unique_ptr<TokenScorer> MakeSequenceTableScorer(
    std::vector<std::pair<TokenSequence, double>> entries);

// Writes one tab-separated line per decoding step:
//   step  phase  balance  unused  candidates  chosen
// where unused and candidates are comma-joined plain spellings.
void WriteTraceLine(std::ostream& out, int step, const DecoderState& state,
                    std::span<const Token> candidates, Token chosen);

// Runs the greedy loop and returns the emitted tokens without Bos/Eos.
// Ties go to the earliest candidate in token order. When trace is non-null
// one line per step is written to it.
TokenSequence Decode(TokenScorer& scorer, int question_count,
                     const DecodeConfig& config = {},
                     std::ostream* trace = nullptr);

// Bos + tokens + Eos, as handed to a model tokenizer.
TokenSequence WithDelimiters(std::span<const Token> tokens);

}  // namespace polich

#endif  // POLICH_FSA_H_
