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

#include "polich/logic.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <unordered_map>
#include <utility>

namespace polich {

// ---------------------------------------------------------------------------
// Truth tables

TruthTable::TruthTable(int num_questions) : num_questions_(num_questions) {
  if (num_questions < 1 || num_questions > kMaxQuestions) {
    throw Error("truth tables cover 1.." + std::to_string(kMaxQuestions) +
                " questions, got " + std::to_string(num_questions));
  }
}

std::string TruthTable::ToBitString() const {
  std::string out(static_cast<size_t>(rows()), '0');
  for (int i = 0; i < rows(); ++i) {
    if (bits_[i]) out[i] = '1';
  }
  return out;
}

TruthTable TruthTable::FromBitString(const std::string& bits) {
  const int n = std::countr_zero(static_cast<unsigned>(bits.size()));
  if (bits.empty() || (1u << n) != bits.size()) {
    throw Error("truth table length must be a power of two, got " +
                std::to_string(bits.size()));
  }
  TruthTable table(n);
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw Error("truth table bitstrings contain only 0 and 1");
    }
    table.set(static_cast<int>(i), bits[i] == '1');
  }
  return table;
}

size_t TruthTable::Hash() const {
  return std::hash<std::bitset<kMaxRows>>()(bits_) ^
         (static_cast<size_t>(num_questions_) << 1);
}

namespace {

using Column = std::bitset<TruthTable::kMaxRows>;

Column RowMask(int n) {
  Column mask;
  for (int i = 0; i < (1 << n); ++i) mask.set(i);
  return mask;
}

Column Columns(const ExprTree& tree, int n, const Column& rows) {
  switch (tree.kind()) {
    case ExprTree::Kind::kLeaf: {
      Column col;
      const int k = tree.question().index();
      for (int i = 0; i < (1 << n); ++i) {
        if (RowValue(i, k, n)) col.set(i);
      }
      return col;
    }
    case ExprTree::Kind::kNot:
      return ~Columns(tree.operand(), n, rows) & rows;
    case ExprTree::Kind::kAnd: {
      Column acc = rows;
      for (const ExprTree& c : tree.children()) acc &= Columns(c, n, rows);
      return acc;
    }
    case ExprTree::Kind::kOr: {
      Column acc;
      for (const ExprTree& c : tree.children()) acc |= Columns(c, n, rows);
      return acc;
    }
  }
  return {};
}

}  // namespace

TruthTable ComputeTruthTable(const ExprTree& tree, int num_questions) {
  TruthTable table(num_questions);
  if (tree.MaxQuestionIndex() >= num_questions) {
    throw Error("tree uses Q" + std::to_string(tree.MaxQuestionIndex()) +
                " but the table covers only " + std::to_string(num_questions) +
                " questions");
  }
  const Column col = Columns(tree, num_questions, RowMask(num_questions));
  for (int i = 0; i < table.rows(); ++i) table.set(i, col[i]);
  return table;
}

TruthTable ComputeTruthTable(const ExprTree& tree) {
  return ComputeTruthTable(tree, tree.MaxQuestionIndex() + 1);
}

// ---------------------------------------------------------------------------
// Three-valued evaluation

std::string TruthValueName(TruthValue v) {
  switch (v) {
    case TruthValue::kFalse:
      return "no";
    case TruthValue::kUnknown:
      return "unknown";
    case TruthValue::kTrue:
      return "yes";
  }
  return "?";
}

TruthValue ParseTruthValue(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t == "yes" || t == "true") return TruthValue::kTrue;
  if (t == "no" || t == "false") return TruthValue::kFalse;
  if (t == "unknown") return TruthValue::kUnknown;
  throw Error("expected yes/no/unknown, got '" + text + "'");
}

MissingAnswerError::MissingAnswerError(QuestionId q)
    : Error("no answer for " + q.ToString()), question_(q) {}

TruthValue Evaluate(const ExprTree& tree, const AnswerAssignment& answers) {
  switch (tree.kind()) {
    case ExprTree::Kind::kLeaf: {
      auto it = answers.find(tree.question());
      if (it == answers.end()) throw MissingAnswerError(tree.question());
      return it->second;
    }
    case ExprTree::Kind::kNot: {
      const TruthValue v = Evaluate(tree.operand(), answers);
      if (v == TruthValue::kUnknown) return v;
      return v == TruthValue::kTrue ? TruthValue::kFalse : TruthValue::kTrue;
    }
    case ExprTree::Kind::kAnd:
    case ExprTree::Kind::kOr: {
      const bool is_and = tree.kind() == ExprTree::Kind::kAnd;
      TruthValue acc = is_and ? TruthValue::kTrue : TruthValue::kFalse;
      // No short circuit: every leaf must have an answer.
      for (const ExprTree& c : tree.children()) {
        const TruthValue v = Evaluate(c, answers);
        acc = is_and ? std::min(acc, v) : std::max(acc, v);
      }
      return acc;
    }
  }
  return TruthValue::kUnknown;
}

bool Equivalent(const ExprTree& a, const ExprTree& b) {
  if (a.QuestionCount() != b.QuestionCount()) return false;
  const int n = std::max(a.MaxQuestionIndex(), b.MaxQuestionIndex()) + 1;
  return ComputeTruthTable(a, n) == ComputeTruthTable(b, n);
}

bool Identical(const ExprTree& a, const ExprTree& b) {
  return Serialize(a) == Serialize(b);
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

int LowestQuestion(const ExprTree& t) {
  return std::countr_zero(t.QuestionMask());
}

}  // namespace

ExprTree Canonicalize(const ExprTree& tree) {
  switch (tree.kind()) {
    case ExprTree::Kind::kLeaf:
      return tree;
    case ExprTree::Kind::kNot: {
      ExprTree inner = Canonicalize(tree.operand());
      if (inner.is_not()) return inner.operand();
      return ExprTree::Not(std::move(inner));
    }
    case ExprTree::Kind::kAnd:
    case ExprTree::Kind::kOr: {
      std::vector<ExprTree> flat;
      for (const ExprTree& c : tree.children()) {
        ExprTree cc = Canonicalize(c);
        if (cc.kind() == tree.kind()) {
          for (const ExprTree& g : cc.children()) flat.push_back(g);
        } else {
          flat.push_back(std::move(cc));
        }
      }
      std::stable_sort(flat.begin(), flat.end(),
                       [](const ExprTree& x, const ExprTree& y) {
                         return LowestQuestion(x) < LowestQuestion(y);
                       });
      return ExprTree::Nary(tree.kind(), std::move(flat));
    }
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Enumeration
//
// A canonical tree over a question set S is a leaf (|S| = 1) or an and/or
// node whose children partition S into >= 2 blocks, ordered by lowest
// question, where no child is an un-negated node of the parent's operator;
// any of these may be wrapped in a single "not".

namespace {

void ForEachPartition(uint32_t mask, std::vector<uint32_t>& blocks,
                      const std::function<void(const std::vector<uint32_t>&)>& f) {
  if (mask == 0) {
    f(blocks);
    return;
  }
  const uint32_t low = mask & (~mask + 1);
  const uint32_t rest = mask & ~low;
  // Every subset of rest joins the lowest element's block.
  uint32_t sub = rest;
  while (true) {
    blocks.push_back(low | sub);
    ForEachPartition(rest & ~sub, blocks, f);
    blocks.pop_back();
    if (sub == 0) break;
    sub = (sub - 1) & rest;
  }
}

void ForEachProperPartition(uint32_t mask,
                            const std::function<void(const std::vector<uint32_t>&)>& f) {
  std::vector<uint32_t> blocks;
  ForEachPartition(mask, blocks, [&](const std::vector<uint32_t>& p) {
    if (p.size() < 2) return;
    std::vector<uint32_t> sorted = p;
    std::sort(sorted.begin(), sorted.end(), [](uint32_t a, uint32_t b) {
      return std::countr_zero(a) < std::countr_zero(b);
    });
    f(sorted);
  });
}

using Visitor = std::function<void(const ExprTree&)>;

void GenerateAny(uint32_t mask, ExprTree::Kind excluded, const Visitor& f);

void GenerateChildren(const std::vector<uint32_t>& blocks, size_t i,
                      ExprTree::Kind op, std::vector<ExprTree>& acc,
                      const Visitor& f) {
  if (i == blocks.size()) {
    f(ExprTree::Nary(op, acc));
    return;
  }
  GenerateAny(blocks[i], op, [&](const ExprTree& child) {
    acc.push_back(child);
    GenerateChildren(blocks, i + 1, op, acc, f);
    acc.pop_back();
  });
}

void GenerateNary(uint32_t mask, ExprTree::Kind op, const Visitor& f) {
  ForEachProperPartition(mask, [&](const std::vector<uint32_t>& blocks) {
    std::vector<ExprTree> acc;
    GenerateChildren(blocks, 0, op, acc, f);
  });
}

// Trees over mask, skipping un-negated roots of kind `excluded`.
void GenerateAny(uint32_t mask, ExprTree::Kind excluded, const Visitor& f) {
  if (std::popcount(mask) == 1) {
    ExprTree leaf = ExprTree::Leaf(QuestionId(std::countr_zero(mask)));
    f(leaf);
    f(ExprTree::Not(leaf));
    return;
  }
  for (ExprTree::Kind op : {ExprTree::Kind::kAnd, ExprTree::Kind::kOr}) {
    GenerateNary(mask, op, [&](const ExprTree& t) {
      if (op != excluded) f(t);
      f(ExprTree::Not(t));
    });
  }
}

// NaryCount(k): canonical un-negated trees with a fixed root operator over k
// questions (the same for and and or).
const std::array<uint64_t, kMaxQuestions + 1>& NaryCounts() {
  static const std::array<uint64_t, kMaxQuestions + 1> counts = [] {
    std::array<uint64_t, kMaxQuestions + 1> c{};
    for (int k = 2; k <= kMaxQuestions; ++k) {
      uint64_t total = 0;
      ForEachProperPartition((1u << k) - 1, [&](const std::vector<uint32_t>& p) {
        uint64_t prod = 1;
        for (uint32_t b : p) {
          const int size = std::popcount(b);
          prod *= size == 1 ? 2 : 3 * c[size];
        }
        total += prod;
      });
      c[k] = total;
    }
    return c;
  }();
  return counts;
}

// Trees a block of `size` questions can contribute as a child of an and/or
// node: everything except un-negated nodes of the parent's operator.
uint64_t ChildCount(int size) {
  return size == 1 ? 2 : 3 * NaryCounts()[size];
}

uint64_t Draw(std::mt19937_64& rng, uint64_t bound) {
  return std::uniform_int_distribution<uint64_t>(0, bound - 1)(rng);
}

ExprTree SampleNary(uint32_t mask, ExprTree::Kind op, std::mt19937_64& rng);

ExprTree SampleAny(uint32_t mask, ExprTree::Kind excluded, std::mt19937_64& rng) {
  if (std::popcount(mask) == 1) {
    ExprTree leaf = ExprTree::Leaf(QuestionId(std::countr_zero(mask)));
    return Draw(rng, 2) == 0 ? leaf : ExprTree::Not(leaf);
  }
  // Options in order: and, not-and, or, not-or, minus the excluded bare op.
  std::vector<std::pair<ExprTree::Kind, bool>> options;
  for (ExprTree::Kind op : {ExprTree::Kind::kAnd, ExprTree::Kind::kOr}) {
    if (op != excluded) options.emplace_back(op, false);
    options.emplace_back(op, true);
  }
  const auto [op, negated] = options[Draw(rng, options.size())];
  ExprTree t = SampleNary(mask, op, rng);
  return negated ? ExprTree::Not(std::move(t)) : t;
}

ExprTree SampleNary(uint32_t mask, ExprTree::Kind op, std::mt19937_64& rng) {
  std::vector<std::vector<uint32_t>> partitions;
  std::vector<uint64_t> weights;
  uint64_t total = 0;
  ForEachProperPartition(mask, [&](const std::vector<uint32_t>& p) {
    uint64_t w = 1;
    for (uint32_t b : p) w *= ChildCount(std::popcount(b));
    partitions.push_back(p);
    weights.push_back(w);
    total += w;
  });
  uint64_t pick = Draw(rng, total);
  size_t chosen = 0;
  while (pick >= weights[chosen]) pick -= weights[chosen++];
  std::vector<ExprTree> children;
  for (uint32_t b : partitions[chosen]) children.push_back(SampleAny(b, op, rng));
  return ExprTree::Nary(op, std::move(children));
}

void CheckCount(int n, int max) {
  if (n < 1 || n > max) {
    throw Error("question count must be in [1, " + std::to_string(max) +
                "], got " + std::to_string(n));
  }
}

// Truth tables of up to six questions packed into 64 rows.
uint64_t ColumnBits(int k, int n) {
  uint64_t col = 0;
  for (int i = 0; i < (1 << n); ++i) {
    if (RowValue(i, k, n)) col |= uint64_t{1} << i;
  }
  return col;
}

std::vector<ExprTree> EquivalenceClasses(int n) {
  const uint64_t all_rows =
      n == 6 ? ~uint64_t{0} : (uint64_t{1} << (1 << n)) - 1;
  const uint32_t full = (1u << n) - 1;
  // classes[S]: function -> representative, insertion ordered.
  std::vector<std::vector<std::pair<uint64_t, ExprTree>>> classes(full + 1);
  std::vector<std::unordered_map<uint64_t, size_t>> index(full + 1);
  auto add = [&](uint32_t s, uint64_t f, auto&& make) {
    if (index[s].count(f)) return;
    index[s].emplace(f, classes[s].size());
    classes[s].emplace_back(f, Canonicalize(make()));
  };
  std::vector<uint32_t> masks;
  for (uint32_t s = 1; s <= full; ++s) masks.push_back(s);
  std::stable_sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  for (uint32_t s : masks) {
    if (std::popcount(s) == 1) {
      const int k = std::countr_zero(s);
      const uint64_t col = ColumnBits(k, n);
      ExprTree leaf = ExprTree::Leaf(QuestionId(k));
      add(s, col, [&] { return leaf; });
      add(s, ~col & all_rows, [&] { return ExprTree::Not(leaf); });
      continue;
    }
    const uint32_t low = s & (~s + 1);
    const uint32_t rest = s & ~low;
    // Binary splits suffice: n-ary and/or are nested binary ones.
    for (uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const uint32_t left = low | sub;
      const uint32_t right = s & ~left;
      if (right != 0) {
        for (const auto& [f, tf] : classes[left]) {
          for (const auto& [g, tg] : classes[right]) {
            add(s, f & g, [&] { return ExprTree::And({tf, tg}); });
            add(s, f | g, [&] { return ExprTree::Or({tf, tg}); });
            add(s, ~(f & g) & all_rows,
                [&] { return ExprTree::Not(ExprTree::And({tf, tg})); });
            add(s, ~(f | g) & all_rows,
                [&] { return ExprTree::Not(ExprTree::Or({tf, tg})); });
          }
        }
      }
      if (sub == 0) break;
    }
  }
  std::vector<std::pair<std::string, ExprTree>> keyed;
  for (auto& [f, t] : classes[full]) keyed.emplace_back(ToString(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ExprTree> out;
  for (auto& [key, t] : keyed) out.push_back(std::move(t));
  return out;
}

}  // namespace

uint64_t CountTrees(int n) {
  CheckCount(n, kMaxQuestions);
  if (n == 1) return 2;
  return 4 * NaryCounts()[n];
}

void ForEachTree(int n, const std::function<void(const ExprTree&)>& visit) {
  CheckCount(n, kMaxQuestions);
  GenerateAny((1u << n) - 1, ExprTree::Kind::kLeaf, visit);
}

std::vector<ExprTree> EnumerateTrees(int n, Dedup dedup) {
  CheckCount(n, 6);
  if (dedup == Dedup::kEquivalenceClass) return EquivalenceClasses(n);
  if (n > 5) {
    throw Error("syntactic enumeration for n = 6 yields " +
                std::to_string(CountTrees(6)) +
                " trees; use ForEachTree to stream them");
  }
  std::vector<ExprTree> out;
  out.reserve(CountTrees(n));
  ForEachTree(n, [&out](const ExprTree& t) { out.push_back(t); });
  return out;
}

ExprTree SampleUniformTree(int n, std::mt19937_64& rng) {
  CheckCount(n, 6);
  return SampleAny((1u << n) - 1, ExprTree::Kind::kLeaf, rng);
}

// ---------------------------------------------------------------------------
// Rewrites

namespace {

ExprTree Negate(const ExprTree& t) {
  return t.is_not() ? t.operand() : ExprTree::Not(t);
}

ExprTree::Kind Dual(ExprTree::Kind k) {
  return k == ExprTree::Kind::kAnd ? ExprTree::Kind::kOr : ExprTree::Kind::kAnd;
}

enum class Rewrite { kPush, kPull, kPermute, kRegroup, kFlatten };

struct Site {
  std::vector<int> path;
  Rewrite rewrite;
};

void CollectSites(const ExprTree& t, bool parent_is_not, std::vector<int>& path,
                  std::vector<Site>& out) {
  if (t.is_not() && t.operand().is_nary()) out.push_back({path, Rewrite::kPush});
  if (t.is_nary()) {
    if (!parent_is_not) out.push_back({path, Rewrite::kPull});
    out.push_back({path, Rewrite::kPermute});
    if (t.children().size() >= 3) out.push_back({path, Rewrite::kRegroup});
    for (const ExprTree& c : t.children()) {
      if (c.kind() == t.kind()) {
        out.push_back({path, Rewrite::kFlatten});
        break;
      }
    }
  }
  for (size_t i = 0; i < t.children().size(); ++i) {
    path.push_back(static_cast<int>(i));
    CollectSites(t.children()[i], t.is_not(), path, out);
    path.pop_back();
  }
}

ExprTree Permute(const ExprTree& t, std::mt19937_64& rng) {
  std::vector<ExprTree> children = t.children();
  // Children are pairwise distinct (disjoint questions), so any
  // non-identity permutation changes the order.
  std::vector<size_t> order(children.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  do {
    std::shuffle(order.begin(), order.end(), rng);
  } while (std::is_sorted(order.begin(), order.end()));
  std::vector<ExprTree> out;
  for (size_t i : order) out.push_back(children[i]);
  return ExprTree::Nary(t.kind(), std::move(out));
}

ExprTree Regroup(const ExprTree& t, std::mt19937_64& rng) {
  const auto& children = t.children();
  const size_t k = children.size();
  // A run of length 2..k-1 becomes a nested node of the same operator.
  const size_t len = 2 + Draw(rng, k - 2);
  const size_t start = Draw(rng, k - len + 1);
  std::vector<ExprTree> inner(children.begin() + start,
                              children.begin() + start + len);
  std::vector<ExprTree> out(children.begin(), children.begin() + start);
  out.push_back(ExprTree::Nary(t.kind(), std::move(inner)));
  out.insert(out.end(), children.begin() + start + len, children.end());
  return ExprTree::Nary(t.kind(), std::move(out));
}

ExprTree FlattenOnce(const ExprTree& t) {
  std::vector<ExprTree> out;
  for (const ExprTree& c : t.children()) {
    if (c.kind() == t.kind()) {
      out.insert(out.end(), c.children().begin(), c.children().end());
    } else {
      out.push_back(c);
    }
  }
  return ExprTree::Nary(t.kind(), std::move(out));
}

ExprTree ApplyAt(const ExprTree& t, const std::vector<int>& path, size_t depth,
                 const std::function<ExprTree(const ExprTree&)>& f) {
  if (depth == path.size()) return f(t);
  std::vector<ExprTree> children = t.children();
  children[path[depth]] = ApplyAt(children[path[depth]], path, depth + 1, f);
  if (t.is_not()) return ExprTree::Not(std::move(children[0]));
  return ExprTree::Nary(t.kind(), std::move(children));
}

ExprTree ApplySite(const ExprTree& t, const Site& site, std::mt19937_64& rng) {
  return ApplyAt(t, site.path, 0, [&](const ExprTree& node) -> ExprTree {
    switch (site.rewrite) {
      case Rewrite::kPush:
        return PushNegation(node);
      case Rewrite::kPull:
        return PullNegation(node);
      case Rewrite::kPermute:
        return Permute(node, rng);
      case Rewrite::kRegroup:
        return Regroup(node, rng);
      case Rewrite::kFlatten:
        return FlattenOnce(node);
    }
    return node;
  });
}

const ExprTree* FirstNary(const ExprTree& t, std::vector<int>& path) {
  if (t.is_nary()) return &t;
  for (size_t i = 0; i < t.children().size(); ++i) {
    path.push_back(static_cast<int>(i));
    if (const ExprTree* found = FirstNary(t.children()[i], path)) return found;
    path.pop_back();
  }
  return nullptr;
}

}  // namespace

ExprTree PushNegation(const ExprTree& tree) {
  if (!tree.is_not() || !tree.operand().is_nary()) {
    throw Error("PushNegation expects not over and/or");
  }
  const ExprTree& inner = tree.operand();
  std::vector<ExprTree> negated;
  for (const ExprTree& c : inner.children()) negated.push_back(Negate(c));
  return ExprTree::Nary(Dual(inner.kind()), std::move(negated));
}

ExprTree PullNegation(const ExprTree& tree) {
  if (!tree.is_nary()) throw Error("PullNegation expects and/or");
  std::vector<ExprTree> negated;
  for (const ExprTree& c : tree.children()) negated.push_back(Negate(c));
  return ExprTree::Not(ExprTree::Nary(Dual(tree.kind()), std::move(negated)));
}

ExprTree RewriteEquivalent(const ExprTree& tree, uint64_t seed) {
  std::vector<int> first_path;
  if (FirstNary(tree, first_path) == nullptr) {
    throw NoDistinctEquivalentError("'" + ToString(tree) +
                                    "' has no and/or node to rewrite");
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    ExprTree current = tree;
    const int steps = 1 + static_cast<int>(Draw(rng, 3));
    for (int s = 0; s < steps; ++s) {
      std::vector<Site> sites;
      std::vector<int> path;
      CollectSites(current, false, path, sites);
      current = ApplySite(current, sites[Draw(rng, sites.size())], rng);
    }
    if (!Identical(current, tree)) return current;
  }
  // The random chain kept cancelling out; a permutation always differs.
  return ApplySite(tree, Site{first_path, Rewrite::kPermute}, rng);
}

}  // namespace polich
