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
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "polich/fsa.h"
#include "polich/logic.h"

namespace polich {
namespace {

ExprTree P(const char* text) { return ParseExpr(text); }

std::vector<PolicyRecord> CorpusOf(std::initializer_list<const char*> trees) {
  std::vector<PolicyRecord> corpus;
  for (const char* t : trees) {
    PolicyRecord r;
    r.id = "r" + std::to_string(corpus.size());
    r.tree = P(t);
    r.questions.assign(r.tree->QuestionCount(), "q?");
    corpus.push_back(std::move(r));
  }
  return corpus;
}

class TableScorer : public TreeScorer {
 public:
  explicit TableScorer(std::map<std::string, double> scores, bool safe = false)
      : scores_(std::move(scores)), safe_(safe) {}
  double Compatibility(const ScoringInput&, const ExprTree& c) override {
    if (!safe_ && busy_.exchange(true)) overlapped_ = true;
    ++calls_;
    const auto it = scores_.find(ToString(c));
    const double s = it == scores_.end() ? 0.0 : it->second;
    if (!safe_) busy_ = false;
    return s;
  }
  bool concurrency_safe() const override { return safe_; }
  std::string name() const override { return "table"; }

  std::atomic<int> calls_{0};
  std::atomic<bool> overlapped_{false};

 private:
  std::map<std::string, double> scores_;
  bool safe_;
  std::atomic<bool> busy_{false};
};

TEST(CandidateSetTest, Examples) {
  const std::vector<PolicyRecord> corpus = CorpusOf({"Q0 and Q1", "Q1 and Q0", "Q0 or Q1"});
  const std::vector<ExprTree> two = CandidateSet(corpus, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_TRUE(CandidateSet(corpus, 9).empty());
  const std::vector<PolicyRecord> single = CorpusOf({"not Q0"});
  EXPECT_EQ(CandidateSet(single, 1), std::vector<ExprTree>{P("not Q0")});
}

TEST(CandidateSetTest, RepresentativeIsCanonical) {
  const std::vector<PolicyRecord> corpus =
      CorpusOf({"not (not Q1 or not Q0)", "Q1 and Q0", "not not Q0 and Q1"});
  EXPECT_EQ(CandidateSet(corpus, 2), std::vector<ExprTree>{P("Q0 and Q1")});
}

TEST(RankCandidatesTest, Argmax) {
  TableScorer scorer({{"Q0 and Q1", 0.9}, {"Q0 or Q1", 0.2}});
  const std::vector<ExprTree> c = {P("Q0 or Q1"), P("Q0 and Q1")};
  EXPECT_EQ(RankCandidates({}, c, scorer), P("Q0 and Q1"));
}

TEST(RankCandidatesTest, TieGoesToSmallerSerialization) {
  TableScorer scorer({{"Q0 and Q1", 0.5}, {"Q0 or Q1", 0.5}});
  const std::vector<ExprTree> c = {P("Q0 or Q1"), P("Q0 and Q1")};
  ASSERT_LT(ToString(c[1]), ToString(c[0]));
  EXPECT_EQ(RankCandidates({}, c, scorer), P("Q0 and Q1"));
}

TEST(RankCandidatesTest, Empty) {
  TableScorer scorer({});
  EXPECT_THROW(RankCandidates({}, std::vector<ExprTree>{}, scorer), EmptyCandidatesError);
}

TEST(RankCandidatesTest, NanIsAFailure) {
  TableScorer scorer({{"Q0", std::numeric_limits<double>::quiet_NaN()}});
  EXPECT_THROW(RankCandidates({}, std::vector<ExprTree>{P("Q0"), P("not Q0")}, scorer),
               ScorerFailureError);
}

TEST(RankCandidatesTest, UnsafeScorerIsCalledSerially) {
  const std::vector<ExprTree> c = EnumerateTrees(3, Dedup::kEquivalenceClass);
  TableScorer unsafe({});
  RankCandidates({}, c, unsafe);
  EXPECT_EQ(unsafe.calls_, static_cast<int>(c.size()));
  EXPECT_FALSE(unsafe.overlapped_);
  TableScorer safe({{"Q0 and Q1 and Q2", 1.0}}, /*safe=*/true);
  EXPECT_EQ(RankCandidates({}, c, safe), P("Q0 and Q1 and Q2"));
  EXPECT_EQ(safe.calls_, static_cast<int>(c.size()));
}

TEST(PrecomputedScorerTest, UsesBestEquivalentEntry) {
  auto scorer = MakePrecomputedScorer({{"a", P("Q1 and Q0"), 0.4},
                                       {"a", P("not (not Q0 or not Q1)"), 0.7},
                                       {"b", P("Q0 or Q1"), 0.9}});
  ScoringInput in{"a", "", "", {"x", "y"}};
  EXPECT_DOUBLE_EQ(scorer->Compatibility(in, P("Q0 and Q1")), 0.7);
  EXPECT_DOUBLE_EQ(scorer->Compatibility(in, P("Q0 or Q1")), kUnscoredTree);
  const std::vector<ExprTree> c = {P("Q0 or Q1"), P("Q0 and Q1")};
  EXPECT_EQ(RankCandidates(in, c, *scorer), P("Q0 and Q1"));
}

TEST(LexicalStubScorerTest, PrefersCuedOperator) {
  auto scorer = MakeLexicalStubScorer();
  PolicyRecord r;
  r.policy = "You must meet both of these.";
  r.questions = {"a?", "b?"};
  const std::vector<ExprTree> c = {P("Q0 or Q1"), P("Q0 and Q1"), P("not (Q0 and Q1)")};
  EXPECT_EQ(RankCandidates(MakeScoringInput(r), c, *scorer), P("Q0 and Q1"));
  r.policy = "You need any one of these.";
  EXPECT_EQ(RankCandidates(MakeScoringInput(r), c, *scorer), P("Q0 or Q1"));
  EXPECT_NE(scorer->name().find("stub"), std::string::npos);
}

TEST(RandomTreeTest, SingleQuestionIsFair) {
  // Binomial(10000, 1/2) has standard deviation 50.
  int q0 = 0;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    const ExprTree t = RandomTree(1, seed);
    ASSERT_TRUE(t == P("Q0") || t == P("not Q0"));
    q0 += t == P("Q0");
  }
  EXPECT_LE(std::abs(q0 - 5000), 150);
}

TEST(RandomTreeTest, Deterministic) {
  EXPECT_EQ(RandomTree(4, 77), RandomTree(4, 77));
}

TEST(RandomTreeTest, TwoQuestionsCoverEveryTree) {
  std::map<std::string, int> seen;
  for (uint64_t seed = 0; seed < 10000; ++seed) ++seen[ToString(RandomTree(2, seed))];
  const std::vector<ExprTree> all = EnumerateTrees(2, Dedup::kSyntactic);
  EXPECT_EQ(seen.size(), all.size());
  double chi2 = 0.0;
  const double expected = 10000.0 / all.size();
  for (const ExprTree& t : all) {
    const int observed = seen[ToString(t)];
    EXPECT_GT(observed, 0) << ToString(t);
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  // 15 degrees of freedom; 37.7 is the 0.999 quantile.
  EXPECT_LT(chi2, 37.7);
}

TEST(MostCommonTreeTest, Examples) {
  TrainingStats stats;
  stats.Add(P("Q0 and Q1"), 30);
  stats.Add(P("Q0 or Q1"), 10);
  EXPECT_EQ(MostCommonTree(stats, 2), P("Q0 and Q1"));
  TrainingStats tie;
  tie.Add(P("Q0"), 5);
  tie.Add(P("not Q0"), 5);
  EXPECT_EQ(MostCommonTree(tie, 1), P("Q0"));
  try {
    MostCommonTree(stats, 3);
    FAIL();
  } catch (const NoTreesForCountError& e) {
    EXPECT_EQ(e.count(), 3);
  }
}

TEST(MostCommonTreeTest, CountsAreCanonical) {
  const std::vector<PolicyRecord> corpus =
      CorpusOf({"Q1 or Q0", "Q0 or Q1", "Q0 and Q1", "not not Q0"});
  const TrainingStats stats = TrainingStats::FromCorpus(corpus);
  const auto by_count = stats.by_count();
  ASSERT_EQ(by_count.at(2).size(), 2u);
  EXPECT_EQ(MostCommonTree(stats, 2), P("Q0 or Q1"));
  EXPECT_EQ(MostCommonTree(stats, 1), P("Q0"));
  for (const auto& [n, entries] : by_count) {
    for (const auto& [tree, freq] : entries) {
      EXPECT_GE(freq, 1);
      EXPECT_EQ(Canonicalize(tree), tree);
    }
  }
}

TEST(TrainingPairsTest, NegativesAreNotEquivalent) {
  const std::vector<PolicyRecord> corpus = CorpusOf({"Q0 and Q1", "not Q0", "Q0 or Q1 and Q2"});
  const std::vector<TrainingPair> pairs = MakeTrainingPairs(corpus, 3, 5);
  std::map<std::string, int> positives;
  for (const TrainingPair& p : pairs) {
    const PolicyRecord& r = corpus[p.record_id.back() - '0'];
    EXPECT_EQ(p.tree.QuestionCount(), r.question_count());
    if (p.label == 1) {
      ++positives[p.record_id];
      EXPECT_EQ(p.tree, *r.tree);
    } else {
      EXPECT_FALSE(Equivalent(p.tree, *r.tree));
    }
  }
  EXPECT_EQ(positives.size(), 3u);
  // "not Q0" has one non-equivalent tree over one question.
  EXPECT_EQ(std::count_if(pairs.begin(), pairs.end(),
                          [](const TrainingPair& p) { return p.record_id == "r1"; }),
            2);
  EXPECT_EQ(pairs.size(), 1u + 3u + 1u + 1u + 1u + 3u);
}

// Properties.

TEST(InferenceProperty, CandidateSetsArePairwiseInequivalent) {
  std::mt19937_64 rng(31);
  std::vector<PolicyRecord> corpus;
  for (int i = 0; i < 300; ++i) {
    PolicyRecord r;
    const int n = 1 + static_cast<int>(rng() % 4);
    r.tree = RewriteEquivalent(SampleUniformTree(std::max(n, 2), rng), i);
    r.questions.assign(r.tree->QuestionCount(), "q?");
    corpus.push_back(std::move(r));
  }
  for (int n = 1; n <= 4; ++n) {
    const std::vector<ExprTree> c = CandidateSet(corpus, n);
    for (size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(c[i].QuestionCount(), n);
      for (size_t j = i + 1; j < c.size(); ++j) ASSERT_FALSE(Equivalent(c[i], c[j]));
    }
  }
}

TEST(InferenceProperty, RankingIsPermutationInvariant) {
  std::mt19937_64 rng(32);
  std::vector<ExprTree> c = EnumerateTrees(3, Dedup::kEquivalenceClass);
  std::map<std::string, double> scores;
  for (const ExprTree& t : c) scores[ToString(t)] = static_cast<double>(rng() % 5);
  TableScorer scorer(scores);
  const ExprTree expected = RankCandidates({}, c, scorer);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(c.begin(), c.end(), rng);
    ASSERT_EQ(RankCandidates({}, c, scorer), expected);
  }
}

TEST(InferenceProperty, StrategyOutputsAreValid) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + i % kMaxQuestions;
    const ExprTree t = SampleTree(n, rng);
    ASSERT_EQ(t.QuestionMask(), (1u << n) - 1);
    ASSERT_TRUE(IsValid(ToString(t))) << ToString(t);
    if (n <= 6) {
      const ExprTree r = RandomTree(n, i);
      ASSERT_EQ(r.QuestionMask(), (1u << n) - 1);
      ASSERT_TRUE(IsValid(ToString(r)));
    }
  }
}

}  // namespace
}  // namespace polich
