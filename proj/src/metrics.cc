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


#include "polich/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "polich/text_util.h"

namespace polich {

namespace {

using Words = std::vector<std::string>;
using NgramCounts = std::map<Words, int>;

NgramCounts CountNgrams(const Words& words, int n) {
  NgramCounts counts;
  for (size_t i = 0; i + n <= words.size(); ++i) {
    ++counts[Words(words.begin() + i, words.begin() + i + n)];
  }
  return counts;
}

struct BleuStats {
  std::vector<long> matches;
  std::vector<long> totals;
  long candidate_length = 0;
  long reference_length = 0;

  explicit BleuStats(int max_n) : matches(max_n, 0), totals(max_n, 0) {}

  void Add(const std::string& candidate, const std::vector<std::string>& references) {
    const Words cand = NormalizedWords(candidate);
    std::vector<Words> refs;
    for (const std::string& r : references) refs.push_back(NormalizedWords(r));
    const int max_n = static_cast<int>(matches.size());
    for (int n = 1; n <= max_n; ++n) {
      NgramCounts max_ref;
      for (const Words& r : refs) {
        for (const auto& [gram, c] : CountNgrams(r, n)) {
          max_ref[gram] = std::max(max_ref[gram], c);
        }
      }
      for (const auto& [gram, c] : CountNgrams(cand, n)) {
        auto it = max_ref.find(gram);
        matches[n - 1] += std::min(c, it == max_ref.end() ? 0 : it->second);
        totals[n - 1] += c;
      }
    }
    candidate_length += cand.size();
    long closest = -1;
    for (const Words& r : refs) {
      const long len = r.size();
      const long c = cand.size();
      if (closest < 0 || std::abs(len - c) < std::abs(closest - c) ||
          (std::abs(len - c) == std::abs(closest - c) && len < closest)) {
        closest = len;
      }
    }
    reference_length += std::max(closest, 0L);
  }

  double Score() const {
    if (candidate_length == 0) return 0.0;
    double log_sum = 0.0;
    int orders = 0;
    for (size_t n = 0; n < matches.size(); ++n) {
      if (totals[n] == 0) break;  // candidate shorter than n + 1 words
      if (matches[n] == 0) return 0.0;
      log_sum += std::log(static_cast<double>(matches[n]) / totals[n]);
      ++orders;
    }
    const double c = candidate_length;
    const double r = reference_length;
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum / orders);
  }
};

void CheckOrder(int max_n) {
  if (max_n < 1) throw Error("BLEU order must be positive");
}

}  // namespace

double SentenceBleu(const std::string& candidate,
                    const std::vector<std::string>& references, int max_n) {
  CheckOrder(max_n);
  BleuStats stats(max_n);
  stats.Add(candidate, references);
  return stats.Score();
}

double CorpusBleu(const std::vector<std::string>& candidates,
                  const std::vector<std::vector<std::string>>& references,
                  int max_n) {
  CheckOrder(max_n);
  if (candidates.size() != references.size()) {
    throw Error("CorpusBleu: candidate and reference counts differ");
  }
  BleuStats stats(max_n);
  for (size_t i = 0; i < candidates.size(); ++i) stats.Add(candidates[i], references[i]);
  return stats.Score();
}

double RougeL(const std::string& candidate, const std::string& reference) {
  const Words c = NormalizedWords(candidate);
  const Words r = NormalizedWords(reference);
  if (c.empty() && r.empty()) return 1.0;
  if (c.empty() || r.empty()) return 0.0;
  std::vector<int> prev(r.size() + 1, 0);
  std::vector<int> cur(r.size() + 1, 0);
  for (size_t i = 1; i <= c.size(); ++i) {
    for (size_t j = 1; j <= r.size(); ++j) {
      cur[j] = c[i - 1] == r[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = prev[r.size()];
  if (lcs == 0) return 0.0;
  const double p = lcs / c.size();
  const double rec = lcs / r.size();
  return 2 * p * rec / (p + rec);
}

namespace {

double Jaccard(const std::string& a, const std::string& b) {
  const Words wa = NormalizedWords(a);
  const Words wb = NormalizedWords(b);
  const std::set<std::string> sa(wa.begin(), wa.end());
  const std::set<std::string> sb(wb.begin(), wb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  size_t common = 0;
  for (const std::string& w : sa) common += sb.count(w);
  return static_cast<double>(common) / (sa.size() + sb.size() - common);
}

class JaccardSimilarity : public SimilarityProvider {
 public:
  double Similarity(const std::string& a, const std::string& b) override {
    return Jaccard(a, b);
  }
  std::string name() const override { return "jaccard"; }
};

class ExternalSimilarity : public SimilarityProvider {
 public:
  explicit ExternalSimilarity(std::map<std::pair<std::string, std::string>, double> table)
      : table_(std::move(table)) {}

  double Similarity(const std::string& a, const std::string& b) override {
    if (a == b) return 1.0;
    auto it = table_.find(std::minmax(a, b));
    return it == table_.end() ? Jaccard(a, b) : it->second;
  }
  std::string name() const override { return "external"; }

 private:
  std::map<std::pair<std::string, std::string>, double> table_;
};

}  // namespace

std::unique_ptr<SimilarityProvider> MakeJaccardSimilarity() {
  return std::make_unique<JaccardSimilarity>();
}

std::unique_ptr<SimilarityProvider> LoadExternalSimilarity(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::map<std::pair<std::string, std::string>, double> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    const std::vector<std::string> f = SplitTabs(line);
    const std::string where = "similarity line " + std::to_string(line_no) + ": ";
    if (f.size() != 3) throw Error(where + "expected 3 tab-separated fields");
    char* end = nullptr;
    const double v = std::strtod(f[2].c_str(), &end);
    if (f[2].empty() || *end != '\0' || !(v >= 0.0 && v <= 1.0)) {
      throw Error(where + "score must be in [0, 1]");
    }
    table[std::minmax(f[0], f[1])] = v;
  }
  return std::make_unique<ExternalSimilarity>(std::move(table));
}

double MaxSimilarity(const std::string& question,
                     const std::vector<std::string>& gold,
                     SimilarityProvider& provider) {
  if (gold.empty()) throw Error("MaxSimilarity: no gold questions");
  double best = 0.0;
  for (const std::string& g : gold) best = std::max(best, provider.Similarity(question, g));
  return best;
}

std::map<int, int> AlignQuestions(const std::vector<std::string>& generated,
                                  const std::vector<std::string>& gold,
                                  SimilarityProvider& provider) {
  struct Pair {
    double sim;
    int gen;
    int gold;
  };
  std::vector<Pair> pairs;
  for (size_t i = 0; i < generated.size(); ++i) {
    for (size_t j = 0; j < gold.size(); ++j) {
      pairs.push_back({provider.Similarity(generated[i], gold[j]),
                       static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.gold < b.gold;
  });
  std::map<int, int> out;
  std::set<int> used_gold;
  for (const Pair& p : pairs) {
    if (out.contains(p.gen) || used_gold.contains(p.gold)) continue;
    out[p.gen] = p.gold;
    used_gold.insert(p.gold);
  }
  return out;
}

TreeMetrics ComputeTreeMetrics(std::span<const std::pair<ExprTree, ExprTree>> pairs) {
  TreeMetrics m;
  for (const auto& [predicted, gold] : pairs) {
    ++m.total;
    if (Identical(predicted, gold)) ++m.identical;
    if (Equivalent(predicted, gold)) ++m.equivalent;
  }
  if (m.total > 0) {
    m.identical_rate = static_cast<double>(m.identical) / m.total;
    m.equivalent_rate = static_cast<double>(m.equivalent) / m.total;
  }
  return m;
}

PcdReport PcdEvaluate(std::span<const PcdInstance> instances) {
  PcdReport r;
  std::map<TruthValue, int> correct_by_label;
  for (const PcdInstance& inst : instances) {
    const TruthValue predicted = Evaluate(inst.tree, inst.answers);
    ++r.total;
    ++r.per_label_count[inst.gold];
    if (predicted == TruthValue::kUnknown) ++r.unknown_count;
    if (predicted == inst.gold) {
      ++r.correct;
      ++correct_by_label[inst.gold];
    }
  }
  if (r.total == 0) return r;
  r.micro_accuracy = static_cast<double>(r.correct) / r.total;
  double sum = 0.0;
  for (const auto& [label, count] : r.per_label_count) {
    const double acc = static_cast<double>(correct_by_label[label]) / count;
    r.per_label_accuracy[label] = acc;
    sum += acc;
  }
  r.macro_accuracy = sum / r.per_label_count.size();
  return r;
}

CorpusStats ComputeTreeStats(std::span<const ExprTree> trees) {
  CorpusStats s;
  for (const ExprTree& t : trees) {
    ++s.trees;
    const bool has_and = t.Contains(ExprTree::Kind::kAnd);
    const bool has_or = t.Contains(ExprTree::Kind::kOr);
    const bool has_not = t.Contains(ExprTree::Kind::kNot);
    if (t.QuestionCount() == 1) ++s.single_question;
    if (has_and && has_or) ++s.both_operators;
    ++s.question_counts[t.QuestionCount()];
    ++s.operator_counts[t.OperatorCount()];
    ++s.unique_operator_counts[int{has_and} + int{has_or} + int{has_not}];
  }
  if (s.trees > 0) {
    s.single_question_fraction = static_cast<double>(s.single_question) / s.trees;
    s.both_operators_fraction = static_cast<double>(s.both_operators) / s.trees;
  }
  return s;
}

CorpusStats ComputeCorpusStats(std::span<const PolicyRecord> corpus) {
  std::vector<ExprTree> trees;
  for (const PolicyRecord& r : corpus) {
    if (r.tree) trees.push_back(*r.tree);
  }
  return ComputeTreeStats(trees);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

Report Histogram(const std::map<int, int>& h) {
  Report out = Report::object();
  for (const auto& [k, v] : h) out[std::to_string(k)] = v;
  return out;
}

void FlattenText(const Report& node, const std::string& prefix, std::string& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      FlattenText(value, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  out += prefix + ": ";
  out += node.is_string() ? node.get<std::string>() : node.dump();
  out += '\n';
}

}  // namespace

Report ToReport(const TreeMetrics& m) {
  Report r;
  r["pairs"] = m.total;
  r["identical"] = m.identical;
  r["equivalent"] = m.equivalent;
  r["identical_rate"] = m.identical_rate;
  r["equivalent_rate"] = m.equivalent_rate;
  return r;
}

Report ToReport(const PcdReport& p) {
  Report r;
  r["scenarios"] = p.total;
  r["correct"] = p.correct;
  r["micro_accuracy"] = p.micro_accuracy;
  r["macro_accuracy"] = p.macro_accuracy;
  r["macro_definition"] = "unweighted mean of per-gold-label accuracy";
  Report labels = Report::object();
  for (const auto& [label, acc] : p.per_label_accuracy) {
    labels[TruthValueName(label)] = {{"count", p.per_label_count.at(label)},
                                     {"accuracy", acc}};
  }
  r["per_label"] = labels;
  r["unknown_predictions"] = p.unknown_count;
  r["unknown_handling"] = "strong Kleene; unknown predictions are their own label";
  return r;
}

Report ToReport(const CorpusStats& s) {
  Report r;
  r["trees"] = s.trees;
  r["single_question"] = s.single_question;
  r["single_question_fraction"] = s.single_question_fraction;
  r["both_operators"] = s.both_operators;
  r["both_operators_fraction"] = s.both_operators_fraction;
  r["question_counts"] = Histogram(s.question_counts);
  r["operator_counts"] = Histogram(s.operator_counts);
  r["unique_operator_counts"] = Histogram(s.unique_operator_counts);
  return r;
}

std::string FormatReportText(const Report& report) {
  std::string out;
  FlattenText(report, "", out);
  return out;
}

std::string FormatReportJson(const Report& report) { return report.dump(2) + "\n"; }

namespace {

void Panel(std::ostringstream& svg, const std::map<int, int>& h, int x0,
           const std::string& title, const std::string& axis) {
  constexpr int kWidth = 360;
  constexpr int kHeight = 220;
  constexpr int kTop = 40;
  int max_count = 1;
  for (const auto& [k, v] : h) max_count = std::max(max_count, v);
  svg << "  <g transform=\"translate(" << x0 << ",0)\">\n";
  svg << "    <text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
      << "</text>\n";
  svg << "    <line x1=\"30\" y1=\"" << kTop + kHeight << "\" x2=\"" << kWidth << "\" y2=\""
      << kTop + kHeight << "\" stroke=\"black\"/>\n";
  const int bars = std::max<int>(1, h.size());
  const int slot = (kWidth - 40) / bars;
  int i = 0;
  for (const auto& [k, v] : h) {
    const int height = v * kHeight / max_count;
    const int x = 35 + i * slot;
    svg << "    <rect x=\"" << x << "\" y=\"" << kTop + kHeight - height << "\" width=\""
        << std::max(1, slot - 6) << "\" height=\"" << height
        << "\" fill=\"steelblue\"><title>" << k << ": " << v << "</title></rect>\n";
    svg << "    <text x=\"" << x + slot / 2 - 3 << "\" y=\"" << kTop + kHeight + 15
        << "\" text-anchor=\"middle\">" << k << "</text>\n";
    svg << "    <text x=\"" << x + slot / 2 - 3 << "\" y=\"" << kTop + kHeight - height - 4
        << "\" text-anchor=\"middle\">" << v << "</text>\n";
    ++i;
  }
  svg << "    <text x=\"" << kWidth / 2 << "\" y=\"" << kTop + kHeight + 35
      << "\" text-anchor=\"middle\">" << axis << "</text>\n";
  svg << "  </g>\n";
}

}  // namespace

std::string RenderStatsSvg(const CorpusStats& stats) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"310\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  Panel(svg, stats.question_counts, 0, "Trees by question count", "questions");
  Panel(svg, stats.unique_operator_counts, 390, "Trees by distinct operators",
        "distinct operator kinds");
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace polich
