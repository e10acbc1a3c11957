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


// Whole-tree inference strategies: ranking a candidate set with a
// compatibility scorer, and the random and most-common baselines.

#ifndef POLICH_INFERENCE_H_
#define POLICH_INFERENCE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polich/corpus.h"
#include "polich/error.h"
#include "polich/expr.h"

namespace polich {

struct ScoringInput {
  std::string record_id;
  std::string policy;
  std::string main_question;
  std::vector<std::string> questions;
};

ScoringInput MakeScoringInput(const PolicyRecord& record);

class TreeScorer {
 public:
  virtual ~TreeScorer() = default;
  // Higher is more compatible. Must be deterministic.
  virtual double Compatibility(const ScoringInput& input,
                               const ExprTree& candidate) = 0;
  // When true, RankCandidates may call Compatibility from several threads.
  virtual bool concurrency_safe() const { return false; }
  virtual std::string name() const = 0;
};

// Stand-in so the pipeline runs without a trained model. Rewards and/or/not
// nodes when the policy contains conjunctive ("must", "all", "both"),
// disjunctive ("any", "or", "either", "one of") or negating cues.
std::unique_ptr<TreeScorer> MakeLexicalStubScorer();

// Scores from a scores file. A candidate takes the highest score among the
// record's entries that are equivalent to it, or kUnscoredTree when none
// is.
inline constexpr double kUnscoredTree = -1e30;
std::unique_ptr<TreeScorer> MakePrecomputedScorer(std::vector<ScoreEntry> entries);

// Gold trees over exactly n questions, one canonical representative per
// equivalence class, sorted by serialization.
std::vector<ExprTree> CandidateSet(std::span<const PolicyRecord> corpus, int n);

class EmptyCandidatesError : public Error {
 public:
  EmptyCandidatesError() : Error("no candidate trees") {}
};

// Argmax of the scorer; equal scores go to the smaller serialization.
// Throws ScorerFailureError on a NaN score.
ExprTree RankCandidates(const ScoringInput& input,
                        std::span<const ExprTree> candidates,
                        TreeScorer& scorer);

// Uniform over the canonical trees of EnumerateTrees(n, kSyntactic).
ExprTree RandomTree(int n, uint64_t seed);

class TrainingStats {
 public:
  static TrainingStats FromCorpus(std::span<const PolicyRecord> corpus);

  // Canonicalizes tree before counting.
  void Add(const ExprTree& tree, int frequency = 1);

  // question count -> (canonical tree, frequency), sorted by serialization.
  std::map<int, std::vector<std::pair<ExprTree, int>>> by_count() const;

 private:
  std::map<int, std::map<std::string, std::pair<ExprTree, int>>> counts_;
};

class NoTreesForCountError : public Error {
 public:
  explicit NoTreesForCountError(int n);
  int count() const { return n_; }

 private:
  int n_;
};

// Highest frequency; ties go to the smaller serialization.
ExprTree MostCommonTree(const TrainingStats& stats, int n);

struct TrainingPair {
  std::string record_id;
  ExprTree tree;
  int label;  // 1 for the gold tree, 0 for a sampled negative
};

// For each record with a tree: the gold pair, then up to k distinct trees
// over the same questions that are not equivalent to the gold one.
std::vector<TrainingPair> MakeTrainingPairs(std::span<const PolicyRecord> corpus,
                                            int k, uint64_t seed);

// Random read-once tree over Q0..Q(n-1) for any n in [1, 10]; uniform
// only for n <= 6.
ExprTree SampleTree(int n, std::mt19937_64& rng);

}  // namespace polich

#endif  // POLICH_INFERENCE_H_
