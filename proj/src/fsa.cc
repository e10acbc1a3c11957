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
#include <bit>
#include <cmath>
#include <random>
#include <utility>

namespace polich {

std::string PhaseName(FsaPhase phase) {
  switch (phase) {
    case FsaPhase::kExpectTerm:
      return "ExpectTerm";
    case FsaPhase::kExpectTermAfterNot:
      return "ExpectTermAfterNot";
    case FsaPhase::kAfterTerm:
      return "AfterTerm";
    case FsaPhase::kDone:
      return "Done";
  }
  return "?";
}

void DecodeConfig::Validate() const {
  if (max_nesting_depth < 1) {
    throw Error("max_nesting_depth must be at least 1");
  }
}

IllegalTransitionError::IllegalTransitionError(Token token, FsaPhase phase)
    : Error("token '" + Spell(token) + "' is not allowed in phase " +
            PhaseName(phase)),
      token_(token) {}

DecoderState DecoderState::Initial(int question_count) {
  if (question_count < 1 || question_count > kMaxQuestions) {
    throw Error("question_count must be in [1, " +
                std::to_string(kMaxQuestions) + "], got " +
                std::to_string(question_count));
  }
  DecoderState s;
  s.question_count_ = question_count;
  s.unused_ = (1u << question_count) - 1;
  s.frames_.push_back(Frame{});
  return s;
}

int DecoderState::unused_count() const { return std::popcount(unused_); }

std::vector<QuestionId> DecoderState::unused() const {
  std::vector<QuestionId> out;
  for (int i = 0; i < question_count_; ++i) {
    if (unused_ & (1u << i)) out.emplace_back(i);
  }
  return out;
}

bool DecoderState::FramePending(size_t i) const {
  const Frame& f = frames_[i];
  return !f.has_operator && (i > 0 || f.led_by_bare_group);
}

int DecoderState::pending_groups() const {
  int n = 0;
  for (size_t i = 0; i < frames_.size(); ++i) n += FramePending(i) ? 1 : 0;
  return n;
}

namespace {

bool ExpectingTerm(FsaPhase phase) {
  return phase == FsaPhase::kExpectTerm ||
         phase == FsaPhase::kExpectTermAfterNot;
}

bool OpenAllowed(const DecoderState& s, const DecodeConfig& config) {
  const int unused = s.unused_count();
  if (unused == 0) return false;
  if (config.strict_replay) return true;
  if (s.balance() >= config.max_nesting_depth) return false;
  if (!config.max_open_budget_rule) return true;
  // The new group is pending, and an un-negated group that opens the top
  // level makes the top level pending too. Each pending group needs one
  // question beyond the term currently being built.
  int pending_after = s.pending_groups() + 1;
  const bool opens_top_level = s.balance() == 0 &&
                               s.phase() == FsaPhase::kExpectTerm &&
                               s.emitted().empty();
  if (opens_top_level) ++pending_after;
  return unused >= pending_after + 1;
}

}  // namespace

std::vector<Token> ValidTokens(const DecoderState& s,
                               const DecodeConfig& config) {
  std::vector<Token> out;
  if (s.phase() == FsaPhase::kDone) return out;
  const int unused = s.unused_count();
  if (ExpectingTerm(s.phase())) {
    for (int i = 0; i < s.question_count(); ++i) {
      if (s.unused_mask() & (1u << i)) out.push_back(Token::Question(QuestionId(i)));
    }
    if (unused > 0 && (s.phase() == FsaPhase::kExpectTerm ||
                       config.allow_double_negation)) {
      out.push_back(Token::Not());
    }
    if (OpenAllowed(s, config)) out.push_back(Token::Open());
    return out;
  }
  // AfterTerm.
  bool op_allowed = unused > 0;
  bool close_allowed = s.balance() > 0;
  if (!config.strict_replay && config.max_open_budget_rule) {
    const bool innermost_pending = s.FramePending(s.balance());
    const int pending_after = s.pending_groups() - (innermost_pending ? 1 : 0);
    op_allowed = op_allowed && unused >= pending_after + 1;
    close_allowed = close_allowed && s.frames_.back().has_operator;
  }
  if (op_allowed) {
    out.push_back(Token::And());
    out.push_back(Token::Or());
  }
  if (close_allowed) out.push_back(Token::Close());
  return out;
}

DecoderState NextState(const DecoderState& state, Token token,
                       const DecodeConfig& config) {
  const std::vector<Token> valid = ValidTokens(state, config);
  if (std::find(valid.begin(), valid.end(), token) == valid.end()) {
    throw IllegalTransitionError(token, state.phase());
  }
  DecoderState next = state;
  next.emitted_.push_back(token);
  switch (token.kind) {
    case TokenKind::kQuestion:
      next.unused_ &= ~(1u << token.question);
      next.phase_ = FsaPhase::kAfterTerm;
      break;
    case TokenKind::kNot:
      next.phase_ = FsaPhase::kExpectTermAfterNot;
      break;
    case TokenKind::kOpen: {
      DecoderState::Frame& current = next.frames_.back();
      if (!current.has_operator && state.phase() == FsaPhase::kExpectTerm &&
          (next.frames_.size() > 1 || state.emitted().empty())) {
        current.led_by_bare_group = true;
      }
      next.frames_.push_back(DecoderState::Frame{});
      next.phase_ = FsaPhase::kExpectTerm;
      break;
    }
    case TokenKind::kClose:
      next.frames_.pop_back();
      next.phase_ = FsaPhase::kAfterTerm;
      break;
    case TokenKind::kAnd:
    case TokenKind::kOr:
      next.frames_.back().has_operator = true;
      next.phase_ = FsaPhase::kExpectTerm;
      break;
    case TokenKind::kBos:
    case TokenKind::kEos:
      throw IllegalTransitionError(token, state.phase());
  }
  return next;
}

TokenSequence ClosingSuffix(const DecoderState& state) {
  return TokenSequence(static_cast<size_t>(state.balance()), Token::Close());
}

DecoderState Finish(const DecoderState& state) {
  if (state.unused_mask() != 0) {
    throw Error(std::to_string(state.unused_count()) +
                " question(s) still unused");
  }
  if (state.phase() != FsaPhase::kAfterTerm) {
    throw Error("cannot finish in phase " + PhaseName(state.phase()));
  }
  DecoderState done = state;
  const TokenSequence suffix = ClosingSuffix(state);
  done.emitted_.insert(done.emitted_.end(), suffix.begin(), suffix.end());
  done.frames_.resize(1);
  done.phase_ = FsaPhase::kDone;
  return done;
}

bool Accepts(std::span<const Token> tokens, int question_count,
             const DecodeConfig& config) {
  DecoderState state = DecoderState::Initial(question_count);
  for (const Token& t : tokens) {
    const std::vector<Token> valid = ValidTokens(state, config);
    if (std::find(valid.begin(), valid.end(), t) == valid.end()) return false;
    state = NextState(state, t, config);
  }
  return state.phase() == FsaPhase::kAfterTerm && state.balance() == 0;
}

// ---------------------------------------------------------------------------
// Scorers

namespace {

class ReplayScorer : public TokenScorer {
 public:
  explicit ReplayScorer(TokenSequence target) : target_(std::move(target)) {}

  std::map<Token, double> Score(std::span<const Token> prefix,
                                std::span<const Token> candidates) override {
    std::map<Token, double> scores;
    const bool has_next = prefix.size() < target_.size();
    for (const Token& c : candidates) {
      scores[c] = has_next && target_[prefix.size()] == c ? 1.0 : 0.0;
    }
    return scores;
  }

 private:
  TokenSequence target_;
};

class UniformScorer : public TokenScorer {
 public:
  std::map<Token, double> Score(std::span<const Token>,
                                std::span<const Token> candidates) override {
    std::map<Token, double> scores;
    for (const Token& c : candidates) scores[c] = 0.0;
    return scores;
  }
};

class RandomScorer : public TokenScorer {
 public:
  explicit RandomScorer(uint64_t seed) : rng_(seed) {}

  std::map<Token, double> Score(std::span<const Token>,
                                std::span<const Token> candidates) override {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::map<Token, double> scores;
    for (const Token& c : candidates) scores[c] = dist(rng_);
    return scores;
  }

 private:
  std::mt19937_64 rng_;
};

class SequenceTableScorer : public TokenScorer {
 public:
  explicit SequenceTableScorer(
      std::vector<std::pair<TokenSequence, double>> entries)
      : entries_(std::move(entries)) {}

  std::map<Token, double> Score(std::span<const Token> prefix,
                                std::span<const Token> candidates) override {
    std::map<Token, double> scores;
    for (const Token& c : candidates) scores[c] = kUnscored;
    for (const auto& [seq, score] : entries_) {
      if (seq.size() <= prefix.size() ||
          !std::equal(prefix.begin(), prefix.end(), seq.begin())) {
        continue;
      }
      auto it = scores.find(seq[prefix.size()]);
      if (it != scores.end()) it->second = std::max(it->second, score);
    }
    return scores;
  }

 private:
  std::vector<std::pair<TokenSequence, double>> entries_;
};

std::string JoinUnused(const DecoderState& state) {
  std::string out;
  for (QuestionId q : state.unused()) {
    if (!out.empty()) out += ',';
    out += q.ToString();
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::unique_ptr<TokenScorer> MakeReplayScorer(TokenSequence target) {
  return std::make_unique<ReplayScorer>(std::move(target));
}

std::unique_ptr<TokenScorer> MakeUniformScorer() {
  return std::make_unique<UniformScorer>();
}

std::unique_ptr<TokenScorer> MakeRandomScorer(uint64_t seed) {
  return std::make_unique<RandomScorer>(seed);
}

std::unique_ptr<TokenScorer> MakeSequenceTableScorer(
    std::vector<std::pair<TokenSequence, double>> entries) {
  return std::make_unique<SequenceTableScorer>(std::move(entries));
}

void WriteTraceLine(std::ostream& out, int step, const DecoderState& state,
                    std::span<const Token> candidates, Token chosen) {
  std::string cands;
  for (const Token& c : candidates) {
    if (!cands.empty()) cands += ',';
    cands += Spell(c);
  }
  out << step << '\t' << PhaseName(state.phase()) << '\t' << state.balance()
      << '\t' << JoinUnused(state) << '\t' << cands << '\t' << Spell(chosen)
      << '\n';
}

TokenSequence Decode(TokenScorer& scorer, int question_count,
                     const DecodeConfig& config, std::ostream* trace) {
  config.Validate();
  DecoderState state = DecoderState::Initial(question_count);
  int step = 0;
  while (state.unused_mask() != 0) {
    const std::vector<Token> candidates = ValidTokens(state, config);
    if (candidates.empty()) {
      throw Error("decoder reached a state with no valid continuation");
    }
    const std::map<Token, double> scores =
        scorer.Score(state.emitted(), candidates);
    const Token* best = nullptr;
    double best_score = 0.0;
    for (const Token& c : candidates) {
      auto it = scores.find(c);
      if (it == scores.end() || std::isnan(it->second)) {
        throw ScorerFailureError("scorer returned no score for '" + Spell(c) +
                                 "' at step " + std::to_string(step));
      }
      if (best == nullptr || it->second > best_score) {
        best = &c;
        best_score = it->second;
      }
    }
    if (trace != nullptr) WriteTraceLine(*trace, step, state, candidates, *best);
    state = NextState(state, *best, config);
    ++step;
  }
  return Finish(state).emitted();
}

TokenSequence WithDelimiters(std::span<const Token> tokens) {
  TokenSequence out;
  out.reserve(tokens.size() + 2);
  out.push_back(Token::Bos());
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.push_back(Token::Eos());
  return out;
}

}  // namespace polich
