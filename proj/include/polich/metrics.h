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


// Evaluation metrics for generated questions, inferred trees and end-to-end
// compliance decisions, plus corpus statistics and report formatting.
//
// Text metrics work on lower-cased words with surrounding punctuation
// stripped, so "Are you over 25?" and "are you over 25" are the same
// token sequence.

#ifndef POLICH_METRICS_H_
#define POLICH_METRICS_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polich/corpus.h"
#include "polich/expr.h"
#include "polich/logic.h"

namespace polich {

// Sentence BLEU without smoothing: geometric mean of clipped n-gram
// precisions for n = 1..min(max_n, candidate length), times the brevity
// penalty against the closest reference length (shorter wins ties).
// Returns 0 for an empty candidate or when any used precision is 0.
double SentenceBleu(const std::string& candidate,
                    const std::vector<std::string>& references, int max_n);

// Corpus BLEU: clipped counts, candidate lengths and closest reference
// lengths are summed over segments before combining.
double CorpusBleu(const std::vector<std::string>& candidates,
                  const std::vector<std::vector<std::string>>& references,
                  int max_n);

// F1 over the longest common subsequence of words. Two empty strings
// score 1.
double RougeL(const std::string& candidate, const std::string& reference);

class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  // Symmetric, in [0, 1], 1 for identical inputs.
  virtual double Similarity(const std::string& a, const std::string& b) = 0;
  virtual std::string name() const = 0;
};

// Jaccard index of the word sets.
std::unique_ptr<SimilarityProvider> MakeJaccardSimilarity();

// Scores from a file of "a <TAB> b <TAB> score" lines, looked up in either
// order. Identical strings score 1; unlisted pairs fall back to Jaccard.
std::unique_ptr<SimilarityProvider> LoadExternalSimilarity(const std::string& path);

// Threshold on similarity above which a candidate span counts as question
// worthy.
inline constexpr double kSuitabilityThreshold = 0.65;

// Throws Error when gold is empty.
double MaxSimilarity(const std::string& question,
                     const std::vector<std::string>& gold,
                     SimilarityProvider& provider);

// Greedy matching: repeatedly takes the most similar unmatched pair, ties
// by generated index then gold index. Returns generated index -> gold
// index for matched pairs only.
std::map<int, int> AlignQuestions(const std::vector<std::string>& generated,
                                  const std::vector<std::string>& gold,
                                  SimilarityProvider& provider);

struct TreeMetrics {
  int total = 0;
  int identical = 0;
  int equivalent = 0;
  double identical_rate = 0.0;
  double equivalent_rate = 0.0;
};

// pairs are (predicted, gold).
TreeMetrics ComputeTreeMetrics(std::span<const std::pair<ExprTree, ExprTree>> pairs);

struct PcdInstance {
  ExprTree tree;
  AnswerAssignment answers;
  TruthValue gold;
};

struct PcdReport {
  int total = 0;
  int correct = 0;
  double micro_accuracy = 0.0;
  // Mean of per_label_accuracy over the gold labels present.
  double macro_accuracy = 0.0;
  std::map<TruthValue, double> per_label_accuracy;  // keyed by gold label
  std::map<TruthValue, int> per_label_count;
  int unknown_count = 0;  // predictions that came out unknown
};

// Throws MissingAnswerError when a scenario does not answer a tree question.
PcdReport PcdEvaluate(std::span<const PcdInstance> instances);

struct CorpusStats {
  int trees = 0;
  int single_question = 0;
  int both_operators = 0;
  double single_question_fraction = 0.0;
  double both_operators_fraction = 0.0;
  std::map<int, int> question_counts;
  std::map<int, int> operator_counts;         // and/or/not nodes per tree
  std::map<int, int> unique_operator_counts;  // distinct kinds among and/or/not
};

// Records without a tree are ignored.
CorpusStats ComputeCorpusStats(std::span<const PolicyRecord> corpus);
CorpusStats ComputeTreeStats(std::span<const ExprTree> trees);

// Report objects keep insertion order. Text form is one "key: value" line
// per scalar, nested keys joined with '.'.
using Report = nlohmann::ordered_json;
Report ToReport(const TreeMetrics& m);
Report ToReport(const PcdReport& r);
Report ToReport(const CorpusStats& s);
std::string FormatReportText(const Report& report);
std::string FormatReportJson(const Report& report);

// Two-panel SVG: trees per question count and trees per number of distinct
// operator kinds.
std::string RenderStatsSvg(const CorpusStats& stats);

}  // namespace polich

#endif  // POLICH_METRICS_H_
