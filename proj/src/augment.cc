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


#include "polich/augment.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include "polich/default_tables.h"
#include "polich/logic.h"
#include "polich/patterns.h"
#include "polich/text_util.h"

namespace polich {

std::string StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kSplitQuestion: return "split_question";
    case Strategy::kEquivalentTree: return "equivalent_tree";
    case Strategy::kConditionalPhrase: return "conditional_phrase";
    case Strategy::kOmitBullet: return "omit_bullet";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : AllStrategies()) {
    if (StrategyName(s) == name) return s;
  }
  throw Error("unknown augmentation strategy '" + std::string(name) + "'");
}

std::vector<Strategy> AllStrategies() {
  return {Strategy::kSplitQuestion, Strategy::kEquivalentTree,
          Strategy::kConditionalPhrase, Strategy::kOmitBullet};
}

int AugmentConfig::cap(Strategy s) const {
  auto it = caps.find(s);
  return it == caps.end() ? 1 : it->second;
}

std::vector<PhraseEntry> ParsePhraseTable(std::string_view text) {
  std::vector<PhraseEntry> table;
  int line_no = 0;
  for (const std::string& line : SplitLines(text)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::vector<std::string> f = SplitTabs(TrimRight(line));
    const std::string where = "phrase table line " + std::to_string(line_no) + ": ";
    if (f.size() != 3) throw Error(where + "expected 3 tab-separated fields");
    PhraseEntry e{Trim(f[0]), Trim(f[1]), PhraseEntry::Transform::kNone};
    const std::string t = Trim(f[2]);
    if (t == "and_to_or") {
      e.transform = PhraseEntry::Transform::kAndToOr;
    } else if (t == "or_to_and") {
      e.transform = PhraseEntry::Transform::kOrToAnd;
    } else if (t == "negate_group") {
      e.transform = PhraseEntry::Transform::kNegateGroup;
    } else if (t != "none") {
      throw Error(where + "unknown transform '" + t + "'");
    }
    if (e.from.empty()) throw Error(where + "empty phrase");
    table.push_back(std::move(e));
  }
  return table;
}

std::vector<PhraseEntry> LoadPhraseTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open phrase table '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParsePhraseTable(buffer.str());
}

const std::vector<PhraseEntry>& DefaultPhraseTable() {
  static const std::vector<PhraseEntry> table =
      ParsePhraseTable(internal::kDefaultConditionalTable);
  return table;
}

NotSplittableError::NotSplittableError(QuestionId q, const std::string& why)
    : Error(q.ToString() + " is not splittable: " + why), question_(q) {}

// ---------------------------------------------------------------------------
// Tree surgery

namespace {

// Rebuilds tree with every leaf replaced by leaf_fn(q).
template <typename F>
ExprTree MapLeaves(const ExprTree& tree, F&& leaf_fn) {
  switch (tree.kind()) {
    case ExprTree::Kind::kLeaf:
      return leaf_fn(tree.question());
    case ExprTree::Kind::kNot:
      return ExprTree::Not(MapLeaves(tree.operand(), leaf_fn));
    default: {
      std::vector<ExprTree> children;
      for (const ExprTree& c : tree.children()) children.push_back(MapLeaves(c, leaf_fn));
      return ExprTree::Nary(tree.kind(), std::move(children));
    }
  }
}

ExprTree FlipOperators(const ExprTree& tree, ExprTree::Kind from, ExprTree::Kind to) {
  switch (tree.kind()) {
    case ExprTree::Kind::kLeaf:
      return tree;
    case ExprTree::Kind::kNot:
      return ExprTree::Not(FlipOperators(tree.operand(), from, to));
    default: {
      std::vector<ExprTree> children;
      for (const ExprTree& c : tree.children()) children.push_back(FlipOperators(c, from, to));
      return ExprTree::Nary(tree.kind() == from ? to : tree.kind(), std::move(children));
    }
  }
}

}  // namespace

std::optional<ExprTree> PruneQuestion(const ExprTree& tree, QuestionId q) {
  switch (tree.kind()) {
    case ExprTree::Kind::kLeaf:
      if (tree.question() == q) return std::nullopt;
      return tree;
    case ExprTree::Kind::kNot: {
      std::optional<ExprTree> inner = PruneQuestion(tree.operand(), q);
      if (!inner) return std::nullopt;
      if (inner->is_not() && !tree.operand().is_not()) return inner->operand();
      return ExprTree::Not(std::move(*inner));
    }
    default: {
      std::vector<ExprTree> children;
      for (const ExprTree& c : tree.children()) {
        std::optional<ExprTree> p = PruneQuestion(c, q);
        if (!p) continue;
        // A child that collapsed into this node's operator is spliced in.
        if (p->kind() == tree.kind() && c.kind() != tree.kind()) {
          children.insert(children.end(), p->children().begin(), p->children().end());
        } else {
          children.push_back(std::move(*p));
        }
      }
      if (children.empty()) return std::nullopt;
      if (children.size() == 1) return std::move(children.front());
      return ExprTree::Nary(tree.kind(), std::move(children));
    }
  }
}

ExprTree ReindexDense(const ExprTree& tree, std::vector<int>* old_to_new) {
  std::vector<int> mapping(kMaxQuestions, -1);
  const uint32_t mask = tree.QuestionMask();
  int next = 0;
  for (int i = 0; i < kMaxQuestions; ++i) {
    if (mask & (1u << i)) mapping[i] = next++;
  }
  if (old_to_new != nullptr) *old_to_new = mapping;
  return MapLeaves(tree, [&](QuestionId q) {
    return ExprTree::Leaf(QuestionId(mapping[q.index()]));
  });
}

std::optional<ExprTree> ApplyPhraseTransform(const ExprTree& tree,
                                             PhraseEntry::Transform transform) {
  switch (transform) {
    case PhraseEntry::Transform::kAndToOr:
      if (!tree.Contains(ExprTree::Kind::kAnd)) return std::nullopt;
      return FlipOperators(tree, ExprTree::Kind::kAnd, ExprTree::Kind::kOr);
    case PhraseEntry::Transform::kOrToAnd:
      if (!tree.Contains(ExprTree::Kind::kOr)) return std::nullopt;
      return FlipOperators(tree, ExprTree::Kind::kOr, ExprTree::Kind::kAnd);
    case PhraseEntry::Transform::kNegateGroup:
      if (tree.is_not()) return tree.operand();
      return ExprTree::Not(tree);
    case PhraseEntry::Transform::kNone:
      return tree;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Record transforms

namespace {

const ExprTree& RequireTree(const PolicyRecord& record) {
  if (!record.tree) throw Error("record '" + record.id + "' has no tree");
  return *record.tree;
}

// Openers carried over when a question is split, longest first.
constexpr const char* kOpeners[] = {
    "do you have", "do you",  "did you", "have you", "are you", "were you",
    "can you",     "will you", "is it",  "is there", "are there", "is your",
    "does your",   "has your",
};

size_t OpenerLength(const std::string& lower) {
  size_t best = 0;
  for (const char* o : kOpeners) {
    const std::string_view op(o);
    if (lower.compare(0, op.size(), op) == 0 &&
        (lower.size() == op.size() || !IsWordChar(lower[op.size()]))) {
      best = std::max(best, op.size());
    }
  }
  return best;
}

std::string Capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Position of the last " <word> " outside parentheses, or npos.
size_t LastTopLevelCoordinator(const std::string& lower, const std::string& word) {
  const std::string needle = " " + word + " ";
  size_t found = std::string::npos;
  int depth = 0;
  for (size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] == '(') ++depth;
    if (lower[i] == ')') depth = std::max(0, depth - 1);
    if (depth == 0 && lower.compare(i, needle.size(), needle) == 0) found = i;
  }
  return found;
}

std::pair<std::string, std::string> SplitText(const std::string& text, QuestionId q,
                                              ExprTree::Kind op) {
  std::string body = Trim(text);
  while (!body.empty() && (body.back() == '?' || body.back() == '.')) body.pop_back();
  body = TrimRight(body);
  const std::string lower = ToLower(body);
  const std::string word = op == ExprTree::Kind::kAnd ? "and" : "or";
  const size_t pos = LastTopLevelCoordinator(lower, word);
  if (pos == std::string::npos) throw NotSplittableError(q, "no top-level '" + word + "'");
  std::string left = Trim(body.substr(0, pos));
  std::string right = Trim(body.substr(pos + word.size() + 2));
  while (!left.empty() && left.back() == ',') left = TrimRight(left.substr(0, left.size() - 1));
  if (left.empty() || right.empty()) throw NotSplittableError(q, "empty half");
  const size_t opener = OpenerLength(lower);
  if (OpenerLength(ToLower(right)) == 0 && opener > 0 && opener < pos) {
    right = body.substr(0, opener) + " " + right;
  }
  return {Capitalized(left) + "?", Capitalized(right) + "?"};
}

}  // namespace

PolicyRecord SplitQuestion(const PolicyRecord& record, QuestionId q,
                           ExprTree::Kind op) {
  const ExprTree& tree = RequireTree(record);
  if (op != ExprTree::Kind::kAnd && op != ExprTree::Kind::kOr) {
    throw Error("split operator must be and/or");
  }
  if (q.index() >= record.question_count()) {
    throw NotSplittableError(q, "no such question");
  }
  if (record.question_count() >= kMaxQuestions) {
    throw NotSplittableError(q, "question limit reached");
  }
  auto [first, second] = SplitText(record.questions[q.index()], q, op);
  PolicyRecord out = record;
  out.questions[q.index()] = std::move(first);
  out.questions.insert(out.questions.begin() + q.index() + 1, std::move(second));
  out.tree = MapLeaves(tree, [&](QuestionId leaf) {
    if (leaf == q) {
      return ExprTree::Nary(op, {ExprTree::Leaf(q), ExprTree::Leaf(QuestionId(q.index() + 1))});
    }
    if (leaf.index() > q.index()) return ExprTree::Leaf(QuestionId(leaf.index() + 1));
    return ExprTree::Leaf(leaf);
  });
  out.scenarios.clear();
  ValidateRecord(out);
  return out;
}

PolicyRecord SubstituteEquivalentTree(const PolicyRecord& record, uint64_t seed) {
  PolicyRecord out = record;
  out.tree = RewriteEquivalent(RequireTree(record), seed);
  return out;
}

namespace {

// Replaces every word-bounded, case-insensitive occurrence of from. The
// replacement is capitalized when the match was.
std::string ReplacePhrase(const std::string& text, const std::string& from,
                          const std::string& to) {
  const std::string lower = ToLower(text);
  const std::string needle = ToLower(from);
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    const size_t end = i + needle.size();
    if (lower.compare(i, needle.size(), needle) == 0 &&
        (i == 0 || !IsWordChar(lower[i - 1])) &&
        (end == lower.size() || !IsWordChar(lower[end]))) {
      const bool upper = std::isupper(static_cast<unsigned char>(text[i]));
      out += upper ? Capitalized(to) : to;
      i = end;
    } else {
      out += text[i++];
    }
  }
  return out;
}

}  // namespace

std::vector<PolicyRecord> SubstituteConditional(const PolicyRecord& record,
                                                std::span<const PhraseEntry> table) {
  const ExprTree& tree = RequireTree(record);
  std::vector<PolicyRecord> out;
  for (const PhraseEntry& e : table) {
    bool present = ContainsPhrase(record.policy, e.from);
    for (const BulletBlock& b : record.bullets) present = present || ContainsPhrase(b.lead_in, e.from);
    if (!present) continue;
    std::optional<ExprTree> t = ApplyPhraseTransform(tree, e.transform);
    if (!t) continue;
    PolicyRecord r = record;
    r.policy = ReplacePhrase(record.policy, e.from, e.to);
    for (BulletBlock& b : r.bullets) b.lead_in = ReplacePhrase(b.lead_in, e.from, e.to);
    r.tree = std::move(*t);
    if (e.transform != PhraseEntry::Transform::kNone) r.scenarios.clear();
    ValidateRecord(r);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string StripBulletMarker(std::string_view line) {
  std::string s = Trim(line);
  if (s.rfind("\xE2\x80\xA2", 0) == 0) return Trim(s.substr(3));
  if (!s.empty() && (s[0] == '-' || s[0] == '*')) return Trim(s.substr(1));
  size_t digits = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
  if (digits > 0 && digits < s.size() && (s[digits] == '.' || s[digits] == ')')) {
    return Trim(s.substr(digits + 1));
  }
  return s;
}

// Drops the first line of text whose content is item.
std::string RemoveBulletLine(const std::string& text, const std::string& item) {
  const std::string target = Trim(item);
  std::vector<std::string> kept;
  bool removed = false;
  for (std::string& line : SplitLines(text)) {
    if (!removed && StripBulletMarker(line) == target) {
      removed = true;
    } else {
      kept.push_back(std::move(line));
    }
  }
  if (!removed) return text;
  std::string out;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i > 0) out += '\n';
    out += kept[i];
  }
  if (!text.empty() && text.back() == '\n') out += '\n';
  return out;
}

}  // namespace

PolicyRecord OmitBullet(const PolicyRecord& record, QuestionId q) {
  const ExprTree& tree = RequireTree(record);
  if (tree.QuestionCount() < 2) throw CannotPruneError("tree has a single question");
  int index = q.index();
  size_t block = 0;
  for (; block < record.bullets.size(); ++block) {
    const int size = static_cast<int>(record.bullets[block].items.size());
    if (index < size) break;
    index -= size;
  }
  if (block == record.bullets.size()) {
    throw CannotPruneError(q.ToString() + " is not a bullet question");
  }
  PolicyRecord out = record;
  const std::string item = record.bullets[block].items[index];
  auto& items = out.bullets[block].items;
  items.erase(items.begin() + index);
  if (items.empty()) out.bullets.erase(out.bullets.begin() + block);
  out.policy = RemoveBulletLine(record.policy, item);
  out.questions.erase(out.questions.begin() + q.index());
  std::optional<ExprTree> pruned = PruneQuestion(tree, q);
  if (!pruned) throw CannotPruneError("nothing left after removing " + q.ToString());
  out.tree = ReindexDense(*pruned);
  // Removing a question changes what the scenarios mean.
  out.scenarios.clear();
  ValidateRecord(out);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<PolicyRecord> AugmentCorpus(std::span<const PolicyRecord> corpus,
                                        const AugmentConfig& config) {
  std::vector<PolicyRecord> out;
  for (size_t r = 0; r < corpus.size(); ++r) {
    const PolicyRecord& record = corpus[r];
    if (!record.tree) continue;
    std::mt19937_64 rng(config.seed ^ (0x9E3779B97F4A7C15ull * (r + 1)));
    for (Strategy strategy : AllStrategies()) {
      const int cap = config.cap(strategy);
      if (!config.strategies.contains(strategy) || cap <= 0) {
        rng.discard(1);
        continue;
      }
      std::vector<PolicyRecord> variants;
      auto seen = [&](const PolicyRecord& v) {
        return std::any_of(variants.begin(), variants.end(),
                           [&](const PolicyRecord& w) { return w == v; });
      };
      switch (strategy) {
        case Strategy::kSplitQuestion: {
          std::vector<std::pair<int, ExprTree::Kind>> options;
          for (int q = 0; q < record.question_count(); ++q) {
            options.emplace_back(q, ExprTree::Kind::kAnd);
            options.emplace_back(q, ExprTree::Kind::kOr);
          }
          std::shuffle(options.begin(), options.end(), rng);
          for (const auto& [q, op] : options) {
            if (static_cast<int>(variants.size()) >= cap) break;
            try {
              variants.push_back(SplitQuestion(record, QuestionId(q), op));
            } catch (const NotSplittableError&) {
            }
          }
          break;
        }
        case Strategy::kEquivalentTree: {
          for (int attempt = 0; attempt < 4 * cap && static_cast<int>(variants.size()) < cap;
               ++attempt) {
            try {
              PolicyRecord v = SubstituteEquivalentTree(record, rng());
              if (!seen(v)) variants.push_back(std::move(v));
            } catch (const NoDistinctEquivalentError&) {
              break;
            }
          }
          break;
        }
        case Strategy::kConditionalPhrase: {
          for (PolicyRecord& v : SubstituteConditional(record, config.phrase_table)) {
            if (static_cast<int>(variants.size()) >= cap) break;
            if (!seen(v)) variants.push_back(std::move(v));
          }
          break;
        }
        case Strategy::kOmitBullet: {
          int bullet_items = 0;
          for (const BulletBlock& b : record.bullets) bullet_items += b.items.size();
          std::vector<int> qs;
          for (int q = 0; q < std::min(bullet_items, record.question_count()); ++q) qs.push_back(q);
          std::shuffle(qs.begin(), qs.end(), rng);
          for (int q : qs) {
            if (static_cast<int>(variants.size()) >= cap) break;
            try {
              variants.push_back(OmitBullet(record, QuestionId(q)));
            } catch (const CannotPruneError&) {
            }
          }
          break;
        }
      }
      for (size_t k = 0; k < variants.size(); ++k) {
        PolicyRecord& v = variants[k];
        v.id = record.id + "#" + StrategyName(strategy) + "-" + std::to_string(k);
        v.augmented_from = record.id;
        v.strategy = StrategyName(strategy);
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

}  // namespace polich
