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


// Corpus augmentation: structural transforms on records whose trees are
// re-validated after every edit.

#ifndef POLICH_AUGMENT_H_
#define POLICH_AUGMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polich/corpus.h"
#include "polich/error.h"
#include "polich/expr.h"

namespace polich {

enum class Strategy { kSplitQuestion, kEquivalentTree, kConditionalPhrase, kOmitBullet };

std::string StrategyName(Strategy s);  // split_question, equivalent_tree, ...
Strategy ParseStrategy(std::string_view name);  // throws Error
std::vector<Strategy> AllStrategies();

struct PhraseEntry {
  enum class Transform { kAndToOr, kOrToAnd, kNegateGroup, kNone };
  std::string from;
  std::string to;
  Transform transform = Transform::kNone;
  bool operator==(const PhraseEntry&) const = default;
};

// from <TAB> to <TAB> transform, transform one of and_to_or, or_to_and,
// negate_group, none. '#' comments and blank lines are skipped.
std::vector<PhraseEntry> ParsePhraseTable(std::string_view text);
std::vector<PhraseEntry> LoadPhraseTable(const std::string& path);
// The built-in table; identical to data/conditional_phrases.tsv.
const std::vector<PhraseEntry>& DefaultPhraseTable();

struct AugmentConfig {
  std::set<Strategy> strategies{Strategy::kSplitQuestion, Strategy::kEquivalentTree,
                                Strategy::kConditionalPhrase, Strategy::kOmitBullet};
  // Maximum outputs per input record; strategies missing here default to 1.
  std::map<Strategy, int> caps;
  uint64_t seed = 0;
  std::vector<PhraseEntry> phrase_table = DefaultPhraseTable();

  int cap(Strategy s) const;
};

class NotSplittableError : public Error {
 public:
  NotSplittableError(QuestionId q, const std::string& why);
  QuestionId question() const { return question_; }

 private:
  QuestionId question_;
};

class CannotPruneError : public Error {
 public:
  using Error::Error;
};

// Splits the text of question q on its last top-level " and " (op = kAnd)
// or " or " (op = kOr) and replaces the leaf by "(Qq op Qq+1)", shifting
// later ids up by one. The question opener ("Are you", "Do you have", ...)
// is carried over to the second half. Scenarios are dropped because their
// answers no longer line up. Throws NotSplittableError.
PolicyRecord SplitQuestion(const PolicyRecord& record, QuestionId q,
                           ExprTree::Kind op);

// Replaces the tree with RewriteEquivalent(tree, seed). Throws
// NoDistinctEquivalentError for trees without and/or.
PolicyRecord SubstituteEquivalentTree(const PolicyRecord& record, uint64_t seed);

// Tree transform of one table entry, or nullopt when it does not apply
// (and_to_or on a tree without "and", or_to_and without "or").
std::optional<ExprTree> ApplyPhraseTransform(const ExprTree& tree,
                                             PhraseEntry::Transform transform);

// One record per entry whose phrase occurs in the policy or a bullet
// lead-in and whose transform applies.
std::vector<PolicyRecord> SubstituteConditional(const PolicyRecord& record,
                                                std::span<const PhraseEntry> table);

// Removes q from the tree: the leaf goes, a "not" over it goes with it, a
// one-child and/or collapses into its child, and double negation created by
// the collapse cancels. Returns nullopt when nothing is left.
std::optional<ExprTree> PruneQuestion(const ExprTree& tree, QuestionId q);

// Renumbers the questions of tree to Q0..Q(k-1), keeping their relative
// order. old_to_new (optional) receives the mapping indexed by old id.
ExprTree ReindexDense(const ExprTree& tree, std::vector<int>* old_to_new = nullptr);

// Bullet items map positionally onto Q0, Q1, ... . Removes bullet q from
// the bullets and the policy text, the question from the list and the leaf
// from the tree, then renumbers densely. Throws CannotPruneError when the
// tree is a single question or q is not bullet-derived.
PolicyRecord OmitBullet(const PolicyRecord& record, QuestionId q);

// Output ids are "<source id>#<strategy>-<k>" with augmented_from and
// strategy set. Records without a tree are skipped. Output order follows
// the corpus, then strategy order, then variant index.
std::vector<PolicyRecord> AugmentCorpus(std::span<const PolicyRecord> corpus,
                                        const AugmentConfig& config);

}  // namespace polich

#endif  // POLICH_AUGMENT_H_
