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


#include "polich/cli.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "polich/augment.h"
#include "polich/corpus.h"
#include "polich/expr.h"
#include "polich/fsa.h"
#include "polich/inference.h"
#include "polich/logic.h"
#include "polich/metrics.h"
#include "polich/patterns.h"

#ifndef POLICH_VERSION
#define POLICH_VERSION "0.0.0"
#endif

namespace polich {

std::string Version() { return POLICH_VERSION; }

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string input;
  std::string output;
  std::string gold;
  std::string train;
  std::string scores;
  std::string similarity = "jaccard";
  std::string similarity_file;
  std::string format = "plain";
  std::string trace;
  std::optional<uint64_t> seed;
  bool strict_replay = false;
  bool json = false;

  // validate / equiv / decode
  std::string expr;
  std::string a;
  std::string b;
  int questions = 0;
  std::string scorer;
  std::string target;
  bool replay = false;
  bool allow_double_negation = false;
  int max_depth = 3;

  // enumerate
  std::string dedup = "syntactic";
  bool count_only = false;

  // infer / augment / pairs
  std::string strategy;
  std::vector<std::string> strategies;
  int cap = 1;
  std::string phrases;
  int negatives = 3;

  // questions
  std::string patterns;
};

// Command context: output sink and notice stream.
class Context {
 public:
  Context(const Options& opts, std::ostream& out, std::ostream& err)
      : opts_(opts), err_(err) {
    if (opts.output.empty()) {
      out_ = &out;
    } else {
      file_ = std::make_unique<std::ofstream>(opts.output, std::ios::binary | std::ios::trunc);
      if (!*file_) throw IoError("cannot write '" + opts.output + "'");
      out_ = file_.get();
    }
  }

  std::ostream& out() { return *out_; }
  std::ostream& err() { return err_; }
  const Options& opts() const { return opts_; }

  Spelling spelling() const {
    if (opts_.format == "plain") return Spelling::kPlain;
    if (opts_.format == "bracket") return Spelling::kBracket;
    throw UsageError("--format must be plain or bracket");
  }

  uint64_t RequireSeed() const {
    if (!opts_.seed) throw UsageError("this command requires --seed");
    return *opts_.seed;
  }

  const std::string& Require(const std::string& value, const char* flag) const {
    if (value.empty()) throw UsageError(std::string("missing ") + flag);
    return value;
  }

  void Notice(const std::string& record_id, const std::string& message) {
    err_ << "skip " << record_id << ": " << message << '\n';
  }

 private:
  const Options& opts_;
  std::ostream& err_;
  std::ostream* out_ = nullptr;
  std::unique_ptr<std::ofstream> file_;
};

DecodeConfig MakeDecodeConfig(const Options& o) {
  DecodeConfig config;
  config.strict_replay = o.strict_replay;
  config.allow_double_negation = o.allow_double_negation;
  config.max_nesting_depth = o.max_depth;
  config.Validate();
  return config;
}

std::unique_ptr<SimilarityProvider> MakeSimilarity(Context& ctx) {
  const Options& o = ctx.opts();
  if (o.similarity == "jaccard") return MakeJaccardSimilarity();
  if (o.similarity == "external") {
    return LoadExternalSimilarity(ctx.Require(o.similarity_file, "--similarity-file"));
  }
  throw UsageError("--similarity must be jaccard or external");
}

void EmitReport(Context& ctx, const Report& report) {
  ctx.out() << (ctx.opts().json ? FormatReportJson(report) : FormatReportText(report));
}

std::map<std::string, const PolicyRecord*> IndexById(const std::vector<PolicyRecord>& records) {
  std::map<std::string, const PolicyRecord*> index;
  for (const PolicyRecord& r : records) index[r.id] = &r;
  return index;
}

// ---------------------------------------------------------------------------

int CmdValidate(Context& ctx) {
  const Options& o = ctx.opts();
  if (!o.expr.empty()) {
    const bool ok = IsValid(o.expr);
    ctx.out() << (ok ? "valid" : "invalid") << '\n';
    return ok ? kExitOk : kExitFailure;
  }
  const std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(o.input, "--expr or --input"));
  ctx.out() << "records: " << corpus.size() << "\nvalid\n";
  return kExitOk;
}

int CmdEquiv(Context& ctx) {
  const Options& o = ctx.opts();
  const ExprTree a = ParseExpr(ctx.Require(o.a, "--a"));
  const ExprTree b = ParseExpr(ctx.Require(o.b, "--b"));
  const bool eq = Equivalent(a, b);
  ctx.out() << (eq ? "equivalent" : "not equivalent") << '\n';
  ctx.out() << "identical: " << (Identical(a, b) ? "yes" : "no") << '\n';
  return eq ? kExitOk : kExitFailure;
}

int CmdEnumerate(Context& ctx) {
  const Options& o = ctx.opts();
  if (o.questions < 1 || o.questions > 6) throw UsageError("-n must be in [1, 6]");
  Dedup dedup;
  if (o.dedup == "syntactic") {
    dedup = Dedup::kSyntactic;
  } else if (o.dedup == "class") {
    dedup = Dedup::kEquivalenceClass;
  } else {
    throw UsageError("--dedup must be syntactic or class");
  }
  if (o.count_only && dedup == Dedup::kSyntactic) {
    ctx.out() << CountTrees(o.questions) << '\n';
    return kExitOk;
  }
  if (dedup == Dedup::kSyntactic && o.questions == 6) {
    ForEachTree(6, [&](const ExprTree& t) { ctx.out() << ToString(t, ctx.spelling()) << '\n'; });
    return kExitOk;
  }
  const std::vector<ExprTree> trees = EnumerateTrees(o.questions, dedup);
  if (o.count_only) {
    ctx.out() << trees.size() << '\n';
  } else {
    for (const ExprTree& t : trees) ctx.out() << ToString(t, ctx.spelling()) << '\n';
  }
  return kExitOk;
}

// Opens the --trace destination; "-" means the notice stream.
std::ostream* OpenTrace(Context& ctx, std::unique_ptr<std::ofstream>& holder) {
  const std::string& path = ctx.opts().trace;
  if (path.empty()) return nullptr;
  if (path == "-") return &ctx.err();
  holder = std::make_unique<std::ofstream>(path, std::ios::trunc);
  if (!*holder) throw IoError("cannot write '" + path + "'");
  return holder.get();
}

int CmdDecode(Context& ctx) {
  const Options& o = ctx.opts();
  std::unique_ptr<std::ofstream> trace_file;
  std::ostream* trace = OpenTrace(ctx, trace_file);
  if (o.replay) {
    const std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(o.input, "--input"));
    DecodeConfig config = MakeDecodeConfig(o);
    config.strict_replay = true;
    int reproduced = 0;
    int total = 0;
    for (const PolicyRecord& r : corpus) {
      if (!r.tree) {
        ctx.Notice(r.id, "no gold tree");
        continue;
      }
      ++total;
      auto scorer = MakeReplayScorer(Serialize(*r.tree));
      const ExprTree decoded = Parse(Decode(*scorer, r.question_count(), config, trace));
      if (Canonicalize(decoded) == Canonicalize(*r.tree)) {
        ++reproduced;
      } else {
        ctx.err() << "mismatch " << r.id << ": gold '" << ToString(*r.tree) << "' decoded '"
                  << ToString(decoded) << "'\n";
      }
    }
    ctx.out() << "replayed: " << total << "\nreproduced: " << reproduced << '\n';
    return reproduced == total ? kExitOk : kExitFailure;
  }
  if (o.questions < 1 || o.questions > kMaxQuestions) {
    throw UsageError("-n must be in [1, 10]");
  }
  const DecodeConfig config = MakeDecodeConfig(o);
  std::unique_ptr<TokenScorer> scorer;
  const std::string kind = o.scorer.empty() ? (o.target.empty() ? "uniform" : "replay") : o.scorer;
  if (kind == "uniform") {
    scorer = MakeUniformScorer();
  } else if (kind == "random") {
    scorer = MakeRandomScorer(ctx.RequireSeed());
  } else if (kind == "replay") {
    scorer = MakeReplayScorer(Tokenize(ctx.Require(o.target, "--target")));
  } else {
    throw UsageError("--scorer must be uniform, random or replay");
  }
  const TokenSequence tokens = Decode(*scorer, o.questions, config, trace);
  ctx.out() << JoinTokens(tokens, ctx.spelling()) << '\n';
  return kExitOk;
}

// Sequence-table scorer over the scores entries of one record.
std::unique_ptr<TokenScorer> ScoresAsTokenScorer(const std::vector<ScoreEntry>& scores,
                                                 const std::string& record_id) {
  std::vector<std::pair<TokenSequence, double>> entries;
  for (const ScoreEntry& e : scores) {
    if (e.record_id == record_id) entries.emplace_back(Serialize(e.tree), e.score);
  }
  return MakeSequenceTableScorer(std::move(entries));
}

int CmdInfer(Context& ctx) {
  const Options& o = ctx.opts();
  const std::string& strategy = ctx.Require(o.strategy, "--strategy");
  std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(o.input, "--input"));
  std::vector<ScoreEntry> scores;
  if (!o.scores.empty()) scores = LoadScores(o.scores);

  std::vector<PolicyRecord> train;
  if (strategy == "scoring" || strategy == "most-common") {
    if (o.train.empty()) {
      ctx.err() << "note: no --train corpus, using --input as training data\n";
      train = corpus;
    } else {
      train = LoadCorpus(o.train);
    }
  } else if (strategy != "constrained" && strategy != "pattern" && strategy != "random") {
    throw UsageError("--strategy must be constrained, scoring, pattern, random or most-common");
  }

  std::unique_ptr<TreeScorer> tree_scorer;
  if (strategy == "scoring") {
    tree_scorer = scores.empty() ? MakeLexicalStubScorer() : MakePrecomputedScorer(scores);
    ctx.err() << "scorer: " << tree_scorer->name()
              << (scores.empty() ? " (stub, not a trained model)" : "") << '\n';
  }
  const TrainingStats stats = TrainingStats::FromCorpus(train);
  std::map<int, std::vector<ExprTree>> candidates;
  std::mt19937_64 rng(strategy == "random" ? ctx.RequireSeed() : 0);
  std::unique_ptr<std::ofstream> trace_file;
  std::ostream* trace = OpenTrace(ctx, trace_file);
  const DecodeConfig config = MakeDecodeConfig(o);

  for (PolicyRecord& r : corpus) {
    const int n = r.question_count();
    std::optional<ExprTree> gold = r.tree;
    r.tree.reset();
    if (n < 1) {
      ctx.Notice(r.id, "no questions");
      continue;
    }
    try {
      if (strategy == "constrained") {
        std::unique_ptr<TokenScorer> scorer;
        if (!scores.empty()) {
          scorer = ScoresAsTokenScorer(scores, r.id);
        } else if (o.scorer == "uniform" || !gold) {
          scorer = MakeUniformScorer();
        } else {
          scorer = MakeReplayScorer(Serialize(*gold));
        }
        r.tree = Parse(Decode(*scorer, n, config, trace));
      } else if (strategy == "scoring") {
        auto it = candidates.find(n);
        if (it == candidates.end()) it = candidates.emplace(n, CandidateSet(train, n)).first;
        r.tree = RankCandidates(MakeScoringInput(r), it->second, *tree_scorer);
      } else if (strategy == "pattern") {
        r.tree = InferTreeFromPatterns(r.policy_text(), n);
      } else if (strategy == "random") {
        r.tree = SampleTree(n, rng);
      } else {
        r.tree = MostCommonTree(stats, n);
      }
    } catch (const EmptyCandidatesError&) {
      ctx.Notice(r.id, "no training trees with " + std::to_string(n) + " questions");
    } catch (const NoTreesForCountError& e) {
      ctx.Notice(r.id, e.what());
    }
  }
  WriteCorpus(corpus, ctx.out());
  return kExitOk;
}

int CmdAugment(Context& ctx) {
  const Options& o = ctx.opts();
  const std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(o.input, "--input"));
  AugmentConfig config;
  config.seed = ctx.RequireSeed();
  if (o.cap < 0) throw UsageError("--cap must be non-negative");
  if (!o.strategies.empty()) {
    config.strategies.clear();
    for (const std::string& s : o.strategies) config.strategies.insert(ParseStrategy(s));
  }
  for (Strategy s : AllStrategies()) config.caps[s] = o.cap;
  if (!o.phrases.empty()) config.phrase_table = LoadPhraseTable(o.phrases);
  const std::vector<PolicyRecord> augmented = AugmentCorpus(corpus, config);
  WriteCorpus(augmented, ctx.out());
  std::map<std::string, int> per_strategy;
  for (const PolicyRecord& r : augmented) ++per_strategy[*r.strategy];
  ctx.err() << "augmented: " << augmented.size();
  for (const auto& [name, count] : per_strategy) ctx.err() << ' ' << name << '=' << count;
  ctx.err() << '\n';
  return kExitOk;
}

int CmdPairs(Context& ctx) {
  const Options& o = ctx.opts();
  const std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(o.input, "--input"));
  for (const TrainingPair& p : MakeTrainingPairs(corpus, o.negatives, ctx.RequireSeed())) {
    ctx.out() << p.record_id << '\t' << ToString(p.tree) << '\t' << p.label << '\n';
  }
  return kExitOk;
}

int CmdEvalTrees(Context& ctx) {
  const Options& o = ctx.opts();
  const std::vector<PolicyRecord> predicted = LoadCorpus(ctx.Require(o.input, "--input"));
  const std::vector<PolicyRecord> gold = LoadCorpus(ctx.Require(o.gold, "--gold"));
  const auto gold_index = IndexById(gold);
  std::vector<std::pair<ExprTree, ExprTree>> pairs;
  int skipped = 0;
  for (const PolicyRecord& p : predicted) {
    auto it = gold_index.find(p.id);
    if (it == gold_index.end() || !it->second->tree) {
      ctx.Notice(p.id, "no gold tree");
      ++skipped;
      continue;
    }
    if (!p.tree) {
      ctx.Notice(p.id, "no predicted tree");
      ++skipped;
      continue;
    }
    pairs.emplace_back(*p.tree, *it->second->tree);
  }
  const TreeMetrics m = ComputeTreeMetrics(pairs);
  Report report = ToReport(m);
  report["skipped"] = skipped;
  EmitReport(ctx, report);
  return kExitOk;
}

// Pattern-based question generation: every cue sentence and bullet item
// becomes one rephrased question. Trees and scenarios are dropped since
// they refer to the gold question list.
int CmdQuestions(Context& ctx) {
  const Options& o = ctx.opts();
  std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(o.input, "--input"));
  const std::vector<RephrasePattern> patterns =
      o.patterns.empty() ? PatternsFromEnvironment() : LoadPatternTable(o.patterns);
  for (PolicyRecord& r : corpus) {
    r.questions.clear();
    for (const std::string& span : ExtractSpans(r.policy_text())) {
      std::string q = RephraseSpan(span, patterns);
      if (std::find(r.questions.begin(), r.questions.end(), q) == r.questions.end()) {
        r.questions.push_back(std::move(q));
      }
    }
    if (r.questions.empty()) ctx.Notice(r.id, "no spans found");
    r.tree.reset();
    r.scenarios.clear();
  }
  WriteCorpus(corpus, ctx.out());
  return kExitOk;
}

int CmdEvalQuestions(Context& ctx) {
  const Options& o = ctx.opts();
  const std::vector<PolicyRecord> predicted = LoadCorpus(ctx.Require(o.input, "--input"));
  const std::vector<PolicyRecord> gold = LoadCorpus(ctx.Require(o.gold, "--gold"));
  const auto gold_index = IndexById(gold);
  auto provider = MakeSimilarity(ctx);
  std::vector<std::string> candidates;
  std::vector<std::vector<std::string>> references;
  double rouge_sum = 0.0;
  double sim_sum = 0.0;
  int suitable = 0;
  for (const PolicyRecord& p : predicted) {
    auto it = gold_index.find(p.id);
    if (it == gold_index.end() || it->second->questions.empty()) {
      ctx.Notice(p.id, "no gold questions");
      continue;
    }
    const std::vector<std::string>& refs = it->second->questions;
    for (const std::string& q : p.questions) {
      candidates.push_back(q);
      references.push_back(refs);
      double best_rouge = 0.0;
      for (const std::string& ref : refs) best_rouge = std::max(best_rouge, RougeL(q, ref));
      rouge_sum += best_rouge;
      const double sim = MaxSimilarity(q, refs, *provider);
      sim_sum += sim;
      if (sim >= kSuitabilityThreshold) ++suitable;
    }
  }
  const double count = candidates.empty() ? 1.0 : candidates.size();
  Report report;
  report["questions"] = candidates.size();
  report["bleu1"] = candidates.empty() ? 0.0 : CorpusBleu(candidates, references, 1);
  report["bleu4"] = candidates.empty() ? 0.0 : CorpusBleu(candidates, references, 4);
  report["rouge_l"] = rouge_sum / count;
  report["similarity"] = sim_sum / count;
  report["similarity_provider"] = provider->name();
  report["suitability_threshold"] = kSuitabilityThreshold;
  report["suitable_fraction"] = suitable / count;
  EmitReport(ctx, report);
  return kExitOk;
}

int CmdEvalPcd(Context& ctx) {
  const Options& o = ctx.opts();
  const std::vector<PolicyRecord> predicted = LoadCorpus(ctx.Require(o.input, "--input"));
  const std::vector<PolicyRecord> gold = LoadCorpus(ctx.Require(o.gold, "--gold"));
  const auto predicted_index = IndexById(predicted);
  auto provider = MakeSimilarity(ctx);
  std::vector<PcdInstance> instances;
  int skipped = 0;
  for (const PolicyRecord& g : gold) {
    auto it = predicted_index.find(g.id);
    if (it == predicted_index.end() || !it->second->tree) {
      ctx.Notice(g.id, "no predicted tree");
      skipped += g.scenarios.size();
      continue;
    }
    const PolicyRecord& p = *it->second;
    // Predicted question i takes the answer of its aligned gold question;
    // unaligned questions are unknown.
    const std::map<int, int> alignment = AlignQuestions(p.questions, g.questions, *provider);
    for (const Scenario& s : g.scenarios) {
      AnswerAssignment answers;
      for (int i = 0; i < p.question_count(); ++i) {
        TruthValue v = TruthValue::kUnknown;
        if (auto a = alignment.find(i); a != alignment.end()) {
          auto ans = s.answers.find(QuestionId(a->second));
          if (ans != s.answers.end()) v = ans->second;
        }
        answers[QuestionId(i)] = v;
      }
      instances.push_back({*p.tree, std::move(answers), s.label});
    }
  }
  Report report = ToReport(PcdEvaluate(instances));
  report["skipped_scenarios"] = skipped;
  report["similarity_provider"] = provider->name();
  EmitReport(ctx, report);
  return kExitOk;
}

int CmdStats(Context& ctx) {
  const std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(ctx.opts().input, "--input"));
  EmitReport(ctx, ToReport(ComputeCorpusStats(corpus)));
  return kExitOk;
}

int CmdPlot(Context& ctx) {
  const std::vector<PolicyRecord> corpus = LoadCorpus(ctx.Require(ctx.opts().input, "--input"));
  ctx.out() << RenderStatsSvg(ComputeCorpusStats(corpus));
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Expression-tree inference, validation and evaluation for policies", "polich"};
  app.set_version_flag("--version", Version());
  app.require_subcommand(1, 1);

  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Tree spelling: plain or bracket");
  };
  auto add_io = [&](CLI::App* c) {
    c->add_option("--input", o.input, "Input corpus (JSON Lines)");
    c->add_option("--output", o.output, "Output file (default: stdout)");
  };
  auto add_decoder = [&](CLI::App* c) {
    c->add_flag("--strict-replay", o.strict_replay, "Disable budget and nesting heuristics");
    c->add_flag("--allow-double-negation", o.allow_double_negation, "Allow 'not not'");
    c->add_option("--max-depth", o.max_depth, "Maximum parenthesis nesting");
    c->add_option("--trace", o.trace, "Write a per-step trace to this file ('-' for stderr)");
  };

  std::map<CLI::App*, std::function<int(Context&)>> commands;

  auto* validate = app.add_subcommand("validate", "Check an expression or a corpus");
  validate->add_option("--expr", o.expr, "Expression to check");
  add_io(validate);
  commands[validate] = CmdValidate;

  auto* decode = app.add_subcommand("decode", "Constrained greedy decoding");
  decode->add_option("-n,--questions", o.questions, "Number of questions");
  decode->add_option("--scorer", o.scorer, "uniform, random or replay");
  decode->add_option("--target", o.target, "Target expression for the replay scorer");
  decode->add_flag("--replay", o.replay, "Replay every gold tree of --input");
  decode->add_option("--seed", o.seed, "Seed for the random scorer");
  add_io(decode);
  add_format(decode);
  add_decoder(decode);
  commands[decode] = CmdDecode;

  auto* equiv = app.add_subcommand("equiv", "Compare two expressions by truth table");
  equiv->add_option("--a", o.a, "First expression");
  equiv->add_option("--b", o.b, "Second expression");
  equiv->add_option("--output", o.output, "Output file");
  commands[equiv] = CmdEquiv;

  auto* enumerate = app.add_subcommand("enumerate", "List canonical trees over n questions");
  enumerate->add_option("-n,--questions", o.questions, "Number of questions (1-6)")->required();
  enumerate->add_option("--dedup", o.dedup, "syntactic or class");
  enumerate->add_flag("--count", o.count_only, "Print only the number of trees");
  enumerate->add_option("--output", o.output, "Output file");
  add_format(enumerate);
  commands[enumerate] = CmdEnumerate;

  auto* infer = app.add_subcommand("infer", "Infer a tree for every record");
  infer->add_option("--strategy", o.strategy,
                    "constrained, scoring, pattern, random or most-common");
  infer->add_option("--train", o.train, "Training corpus for scoring and most-common");
  infer->add_option("--scores", o.scores, "Precomputed scores (id, tree, score)");
  infer->add_option("--scorer", o.scorer, "Constrained decoding scorer: replay or uniform");
  infer->add_option("--seed", o.seed, "Seed for the random strategy");
  add_io(infer);
  add_decoder(infer);
  commands[infer] = CmdInfer;

  auto* augment = app.add_subcommand("augment", "Generate augmented records");
  augment->add_option("--strategy", o.strategies,
                      "split_question, equivalent_tree, conditional_phrase, omit_bullet "
                      "(repeatable; default all)");
  augment->add_option("--cap", o.cap, "Maximum outputs per record and strategy");
  augment->add_option("--phrases", o.phrases, "Conditional phrase table");
  augment->add_option("--seed", o.seed, "Random seed");
  add_io(augment);
  commands[augment] = CmdAugment;

  auto* pairs = app.add_subcommand("pairs", "Emit gold and negative (record, tree) pairs");
  pairs->add_option("--negatives", o.negatives, "Negative trees per record");
  pairs->add_option("--seed", o.seed, "Random seed");
  add_io(pairs);
  commands[pairs] = CmdPairs;

  auto* questions = app.add_subcommand("questions", "Pattern-based question generation");
  questions->add_option("--patterns", o.patterns,
                        "Rephrase pattern table (default: $POLICH_PATTERNS or built-in)");
  add_io(questions);
  commands[questions] = CmdQuestions;

  auto add_eval = [&](CLI::App* c) {
    add_io(c);
    c->add_option("--gold", o.gold, "Gold corpus");
    c->add_flag("--json", o.json, "Emit JSON instead of key: value lines");
  };
  auto add_similarity = [&](CLI::App* c) {
    c->add_option("--similarity", o.similarity, "jaccard or external");
    c->add_option("--similarity-file", o.similarity_file, "Pair scores for --similarity external");
  };

  auto* eval_trees = app.add_subcommand("eval-trees", "Identical and equivalent rates");
  add_eval(eval_trees);
  commands[eval_trees] = CmdEvalTrees;

  auto* eval_questions = app.add_subcommand("eval-questions", "BLEU, ROUGE-L and similarity");
  add_eval(eval_questions);
  add_similarity(eval_questions);
  commands[eval_questions] = CmdEvalQuestions;

  auto* eval_pcd = app.add_subcommand("eval-pcd", "Compliance accuracy through predicted trees");
  add_eval(eval_pcd);
  add_similarity(eval_pcd);
  commands[eval_pcd] = CmdEvalPcd;

  auto* stats = app.add_subcommand("stats", "Corpus tree statistics");
  add_io(stats);
  stats->add_flag("--json", o.json, "Emit JSON");
  commands[stats] = CmdStats;

  auto* plot = app.add_subcommand("plot", "SVG histograms of tree complexity");
  add_io(plot);
  commands[plot] = CmdPlot;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    try {
      Context ctx(o, out, err);
      return run(ctx);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitUsage;
}

}  // namespace polich
