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


#include "polich/inference.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <set>
#include <thread>

#include "polich/fsa.h"
#include "polich/logic.h"
#include "polich/patterns.h"
#include "polich/text_util.h"

namespace polich {

ScoringInput MakeScoringInput(const PolicyRecord& record) {
  std::string policy = record.policy;
  for (const BulletBlock& b : record.bullets) {
    policy += "\n" + b.lead_in;
    for (const std::string& item : b.items) policy += "\n" + item;
  }
  return {record.id, std::move(policy), record.main_question, record.questions};
}

namespace {

class LexicalStubScorer : public TreeScorer {
 public:
  double Compatibility(const ScoringInput& input,
                       const ExprTree& candidate) override {
    const std::string& text = input.policy;
    const double conj = Evidence(text, {"must", "all", "both", "each", "and"});
    const double disj = Evidence(text, {"any", "or", "either", "one of"});
    const double neg = Evidence(text, {"not", "no", "cannot", "never"});
    double score = 0.0;
    Visit(candidate, [&](const ExprTree& node) {
      switch (node.kind()) {
        case ExprTree::Kind::kAnd: score += conj - 0.5; break;
        case ExprTree::Kind::kOr: score += disj - 0.5; break;
        case ExprTree::Kind::kNot: score += neg - 0.5; break;
        case ExprTree::Kind::kLeaf: break;
      }
    });
    return score;
  }

  bool concurrency_safe() const override { return true; }
  std::string name() const override { return "lexical-stub"; }

 private:
  static double Evidence(const std::string& text,
                         std::initializer_list<const char*> cues) {
    int hits = 0;
    for (const char* cue : cues) hits += ContainsPhrase(text, cue) ? 1 : 0;
    return std::min(1.0, hits / 2.0);
  }

  template <typename F>
  static void Visit(const ExprTree& node, F&& f) {
    f(node);
    for (const ExprTree& c : node.children()) Visit(c, f);
  }
};

class PrecomputedScorer : public TreeScorer {
 public:
  explicit PrecomputedScorer(std::vector<ScoreEntry> entries) {
    for (ScoreEntry& e : entries) by_record_[e.record_id].push_back(std::move(e));
  }

  double Compatibility(const ScoringInput& input,
                       const ExprTree& candidate) override {
    auto it = by_record_.find(input.record_id);
    if (it == by_record_.end()) return kUnscoredTree;
    double best = kUnscoredTree;
    for (const ScoreEntry& e : it->second) {
      if (Equivalent(e.tree, candidate)) best = std::max(best, e.score);
    }
    return best;
  }

  bool concurrency_safe() const override { return true; }
  std::string name() const override { return "precomputed"; }

 private:
  std::map<std::string, std::vector<ScoreEntry>> by_record_;
};

}  // namespace

std::unique_ptr<TreeScorer> MakeLexicalStubScorer() {
  return std::make_unique<LexicalStubScorer>();
}

std::unique_ptr<TreeScorer> MakePrecomputedScorer(std::vector<ScoreEntry> entries) {
  return std::make_unique<PrecomputedScorer>(std::move(entries));
}

std::vector<ExprTree> CandidateSet(std::span<const PolicyRecord> corpus, int n) {
  std::map<std::string, ExprTree> classes;  // truth table bits -> representative
  for (const PolicyRecord& r : corpus) {
    if (!r.tree || r.tree->QuestionCount() != n) continue;
    const std::string key = ComputeTruthTable(*r.tree, n).ToBitString();
    ExprTree canonical = Canonicalize(*r.tree);
    auto it = classes.find(key);
    if (it == classes.end()) {
      classes.emplace(key, std::move(canonical));
    } else if (ToString(canonical) < ToString(it->second)) {
      it->second = std::move(canonical);
    }
  }
  std::vector<ExprTree> out;
  for (auto& [key, tree] : classes) out.push_back(std::move(tree));
  std::sort(out.begin(), out.end(), [](const ExprTree& a, const ExprTree& b) {
    return ToString(a) < ToString(b);
  });
  return out;
}

ExprTree RankCandidates(const ScoringInput& input,
                        std::span<const ExprTree> candidates,
                        TreeScorer& scorer) {
  if (candidates.empty()) throw EmptyCandidatesError();
  std::vector<double> scores(candidates.size());
  const size_t workers = std::min<size_t>(
      candidates.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (scorer.concurrency_safe() && workers > 1) {
    std::vector<std::future<void>> pending;
    for (size_t w = 0; w < workers; ++w) {
      pending.push_back(std::async(std::launch::async, [&, w] {
        for (size_t i = w; i < candidates.size(); i += workers) {
          scores[i] = scorer.Compatibility(input, candidates[i]);
        }
      }));
    }
    for (auto& f : pending) f.get();
  } else {
    for (size_t i = 0; i < candidates.size(); ++i) {
      scores[i] = scorer.Compatibility(input, candidates[i]);
    }
  }
  size_t best = 0;
  std::string best_text;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (std::isnan(scores[i])) {
      throw ScorerFailureError("scorer returned NaN for '" +
                               ToString(candidates[i]) + "'");
    }
    std::string text = ToString(candidates[i]);
    if (i == 0 || scores[i] > scores[best] ||
        (scores[i] == scores[best] && text < best_text)) {
      best = i;
      best_text = std::move(text);
    }
  }
  return candidates[best];
}

ExprTree RandomTree(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SampleUniformTree(n, rng);
}

TrainingStats TrainingStats::FromCorpus(std::span<const PolicyRecord> corpus) {
  TrainingStats stats;
  for (const PolicyRecord& r : corpus) {
    if (r.tree) stats.Add(*r.tree);
  }
  return stats;
}

void TrainingStats::Add(const ExprTree& tree, int frequency) {
  if (frequency < 1) throw Error("frequency must be positive");
  ExprTree canonical = Canonicalize(tree);
  const std::string key = ToString(canonical);
  auto& slot = counts_[canonical.QuestionCount()];
  auto it = slot.find(key);
  if (it == slot.end()) {
    slot.emplace(key, std::make_pair(std::move(canonical), frequency));
  } else {
    it->second.second += frequency;
  }
}

std::map<int, std::vector<std::pair<ExprTree, int>>> TrainingStats::by_count() const {
  std::map<int, std::vector<std::pair<ExprTree, int>>> out;
  for (const auto& [n, trees] : counts_) {
    for (const auto& [key, entry] : trees) out[n].push_back(entry);
  }
  return out;
}

NoTreesForCountError::NoTreesForCountError(int n)
    : Error("no training trees with " + std::to_string(n) + " questions"), n_(n) {}

ExprTree MostCommonTree(const TrainingStats& stats, int n) {
  const auto by_count = stats.by_count();
  auto it = by_count.find(n);
  if (it == by_count.end() || it->second.empty()) throw NoTreesForCountError(n);
  // Entries are sorted by serialization, so the first maximum wins ties.
  const auto* best = &it->second.front();
  for (const auto& entry : it->second) {
    if (entry.second > best->second) best = &entry;
  }
  return best->first;
}

namespace {

ExprTree SampleOver(std::vector<int>& ids, std::mt19937_64& rng, bool may_negate) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (ids.size() == 1) {
    ExprTree leaf = ExprTree::Leaf(QuestionId(ids.front()));
    return may_negate && coin(rng) ? ExprTree::Not(std::move(leaf)) : leaf;
  }
  // Random split into 2..|ids| non-empty groups.
  std::uniform_int_distribution<int> group_count(2, static_cast<int>(ids.size()));
  const int k = group_count(rng);
  std::vector<std::vector<int>> groups(k);
  for (int i = 0; i < k; ++i) groups[i].push_back(ids[i]);
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (size_t i = k; i < ids.size(); ++i) groups[pick(rng)].push_back(ids[i]);
  const ExprTree::Kind kind = coin(rng) ? ExprTree::Kind::kAnd : ExprTree::Kind::kOr;
  std::vector<ExprTree> children;
  for (auto& g : groups) {
    ExprTree child = SampleOver(g, rng, true);
    if (child.kind() == kind) child = ExprTree::Not(std::move(child));
    children.push_back(std::move(child));
  }
  ExprTree node = ExprTree::Nary(kind, std::move(children));
  return may_negate && coin(rng) ? ExprTree::Not(std::move(node)) : node;
}

}  // namespace

ExprTree SampleTree(int n, std::mt19937_64& rng) {
  if (n >= 1 && n <= 6) return SampleUniformTree(n, rng);
  if (n < 1 || n > kMaxQuestions) {
    throw Error("question count must be in [1, " + std::to_string(kMaxQuestions) + "]");
  }
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  return SampleOver(ids, rng, true);
}

std::vector<TrainingPair> MakeTrainingPairs(std::span<const PolicyRecord> corpus,
                                            int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TrainingPair> pairs;
  for (const PolicyRecord& r : corpus) {
    if (!r.tree) continue;
    pairs.push_back({r.id, *r.tree, 1});
    const int n = r.tree->QuestionCount();
    const TruthTable gold = ComputeTruthTable(*r.tree, n);
    std::set<std::string> seen{gold.ToBitString()};
    int made = 0;
    for (int attempt = 0; made < k && attempt < 50 * (k + 1); ++attempt) {
      ExprTree t = SampleTree(n, rng);
      if (!seen.insert(ComputeTruthTable(t, n).ToBitString()).second) continue;
      pairs.push_back({r.id, std::move(t), 0});
      ++made;
    }
  }
  return pairs;
}

}  // namespace polich
