// Copyright 2026 The NRE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "engine.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "error.h"
#include "pretraining.h"
#include "random.h"
#include "rl_finetune.h"

namespace nre {

namespace {

std::string FormatDouble(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string InstructionText(const Instruction& ins,
                            const Tokenizer& tokenizer) {
  std::string out;
  if (ins.is_find()) {
    out = tokenizer.Join(ins.pattern) + " ";
  } else if (ins.action == Action::kAndOrdered) {
    out = std::to_string(ins.distance) + " ";
  }
  out += ActionName(ins.action);
  return out;
}

std::string PositionSet(const LabelSeq& seq) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : seq.MarkedPositions()) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

CompiledRule CompileRule(const RuleSource& source, const Tokenizer& tokenizer,
                         const LayoutConfig& layout) {
  try {
    CompiledRule out;
    out.rule = source;
    out.ast = ParseRule(source, tokenizer);
    out.program = Linearize(out.ast, layout);
    Validate(out.program);
    return out;
  } catch (const Error& e) {
    const std::string prefix = "rule " + source.id;
    if (std::string(e.what()).find(prefix) != std::string::npos) throw;
    throw e.WithContext(prefix);
  }
}

std::vector<CompiledRule> CompileRules(std::span<const RuleSource> sources,
                                       const Tokenizer& tokenizer,
                                       const LayoutConfig& layout) {
  std::set<std::string> seen;
  std::vector<CompiledRule> out;
  out.reserve(sources.size());
  for (const auto& src : sources) {
    if (!seen.insert(src.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate rule id '" + src.id + "'");
    }
    out.push_back(CompileRule(src, tokenizer, layout));
  }
  return out;
}

MatchResult MatchCase(const CompiledRule& rule,
                      std::span<const std::string> tokens,
                      const FindProvider& provider) {
  return Execute(rule.program, tokens, provider);
}

std::set<std::string> Classify(std::span<const CompiledRule> rules,
                               std::span<const std::string> tokens,
                               const FindProvider& provider) {
  std::set<std::string> labels;
  for (const auto& rule : rules) {
    if (MatchCase(rule, tokens, provider).matched) labels.insert(rule.rule.label);
  }
  return labels;
}

std::vector<std::set<std::string>> ClassifyAll(
    std::span<const CompiledRule> rules,
    std::span<const CorpusRecord> records, const FindProvider& provider,
    int threads) {
  std::vector<std::set<std::string>> out(records.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = Classify(rules, records[i].tokens, provider);
      } catch (const Error& e) {
        throw e.WithContext("case " + records[i].id);
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(threads, 1)), records.size());
  if (workers <= 1) {
    run(0, records.size());
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t block = (records.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(records.size(), w * block);
    const std::size_t end = std::min(records.size(), begin + block);
    pool.emplace_back([&, w, begin, end] {
      try {
        run(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

EvalReport ScorePredictions(std::span<const CorpusRecord> records,
                            std::span<const std::set<std::string>> predicted) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot evaluate an empty corpus");
  }
  if (records.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "prediction count differs from record count");
  }
  EvalReport report;
  report.case_count = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& gold = records[i].gold_labels;
    for (const auto& label : predicted[i]) {
      LabelCounts& c = report.per_label[label];
      if (gold.count(label)) {
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    for (const auto& label : gold) {
      LabelCounts& c = report.per_label[label];
      if (!predicted[i].count(label)) ++c.fn;
    }
  }
  for (const auto& [label, c] : report.per_label) {
    report.total.tp += c.tp;
    report.total.fp += c.fp;
    report.total.fn += c.fn;
  }
  const LabelCounts& t = report.total;
  report.precision = Ratio(t.tp, t.tp + t.fp);
  report.recall = Ratio(t.tp, t.tp + t.fn);
  const double sum = report.precision + report.recall;
  report.f1 = sum > 0 ? 2.0 * report.precision * report.recall / sum : 0.0;
  return report;
}

EvalReport Evaluate(std::span<const CompiledRule> rules,
                    std::span<const CorpusRecord> records,
                    const FindProvider& provider, int threads) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot evaluate an empty corpus");
  }
  const auto predicted = ClassifyAll(rules, records, provider, threads);
  return ScorePredictions(records, predicted);
}

std::string FormatReportTable(const EvalReport& report) {
  std::size_t width = 5;
  for (const auto& [label, c] : report.per_label) {
    width = std::max(width, label.size());
  }
  auto pad = [&](const std::string& s) {
    return s + std::string(width - std::min(width, s.size()) + 2, ' ');
  };
  auto row = [&](const std::string& label, const LabelCounts& c) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%8zu %8zu %8zu\n", c.tp, c.fp, c.fn);
    return pad(label) + buf;
  };
  std::string out = pad("label") + "      TP       FP       FN\n";
  for (const auto& [label, c] : report.per_label) out += row(label, c);
  out += row("total", report.total);
  out += "cases      " + std::to_string(report.case_count) + "\n";
  out += "precision  " + FormatDouble(report.precision, 4) + "\n";
  out += "recall     " + FormatDouble(report.recall, 4) + "\n";
  out += "f1         " + FormatDouble(report.f1, 4) + "\n";
  return out;
}

std::string FormatReportLines(const EvalReport& report) {
  std::string out;
  for (const auto& [label, c] : report.per_label) {
    out += label + "," + std::to_string(c.tp) + "," + std::to_string(c.fp) +
           "," + std::to_string(c.fn) + "\n";
  }
  const LabelCounts& t = report.total;
  out += "__all__," + std::to_string(t.tp) + "," + std::to_string(t.fp) + "," +
         std::to_string(t.fn) + "," + FormatDouble(report.precision, 6) + "," +
         FormatDouble(report.recall, 6) + "," + FormatDouble(report.f1, 6) +
         "\n";
  return out;
}

std::string Explain(const CompiledRule& rule,
                    std::span<const std::string> tokens,
                    const FindProvider& provider, const Tokenizer& tokenizer) {
  const MatchResult result = MatchCase(rule, tokens, provider);
  std::ostringstream out;
  out << "rule " << rule.rule.id << " [" << rule.rule.label
      << "]: " << PrintCanonical(rule.ast, tokenizer) << "\n";
  out << "case:";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out << " " << i << ":" << tokens[i];
  }
  out << "\n";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const TraceEntry& e = result.trace[k];
    out << "  " << k << ". " << InstructionText(e.instruction, tokenizer)
        << " -> " << PositionSet(e.output);
    if (e.instruction.is_find() && !e.output.probabilities.empty()) {
      out << " p=[";
      for (std::size_t i = 0; i < e.output.probabilities.size(); ++i) {
        if (i > 0) out << " ";
        out << FormatDouble(e.output.probabilities[i], 3);
      }
      out << "]";
    }
    if (e.guard_fired) out << " (guard: negative fired, positive annihilated)";
    out << "\n";
  }
  out << "verdict: " << (result.matched ? "matched" : "not matched") << "\n";
  return out.str();
}

void AppendLog(const std::string& path, int epoch, double value) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to '" + path + "'");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d,%.17g\n", epoch, value);
  out << buf;
}

Engine::Engine(EngineConfig config) : config_(std::move(config)) {}

void Engine::Invalidate() {
  tokenizer_.reset();
  compiled_.reset();
}

void Engine::SetOption(const std::string& key, const std::string& value) {
  config_.Set(key, value);
  Invalidate();
}

void Engine::LoadConfig(const std::string& path) {
  LoadConfigFile(path, &config_);
  Invalidate();
}

const Tokenizer& Engine::tokenizer() {
  if (!tokenizer_) {
    std::vector<std::string> lexicon;
    if (config_.tokenizer == TokenizerMode::kWord && !config_.lexicon.empty()) {
      lexicon = LoadLexicon(config_.lexicon);
    }
    tokenizer_.emplace(config_.tokenizer, std::move(lexicon));
  }
  return *tokenizer_;
}

void Engine::LoadRules(const std::string& path) {
  for (auto& src : LoadRuleFile(path)) AddRule(src);
}

void Engine::AddRule(const RuleSource& source) {
  for (const auto& s : sources_) {
    if (s.id == source.id) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate rule id '" + source.id + "'");
    }
  }
  CompileRule(source, tokenizer(), config_.layout);
  sources_.push_back(source);
  compiled_.reset();
}

void Engine::ClearRules() {
  sources_.clear();
  compiled_.reset();
}

const std::vector<CompiledRule>& Engine::rules() {
  if (!compiled_) compiled_ = CompileRules(sources_, tokenizer(), config_.layout);
  return *compiled_;
}

const CompiledRule& Engine::rule(const std::string& id) {
  for (const auto& r : rules()) {
    if (r.rule.id == id) return r;
  }
  throw Error(ErrorCode::kUnknownRule, "no rule with id '" + id + "'");
}

std::vector<CorpusRecord> Engine::LoadCorpus(const std::string& path) {
  return nre::LoadCorpus(path, tokenizer());
}

void Engine::LoadEmbeddings(const std::string& path) {
  SetEmbeddings(nre::LoadEmbeddings(path));
}

void Engine::SetEmbeddings(EmbeddingTable table) {
  if (positive_ && positive_->dimension() != table.dimension()) {
    positive_.reset();
    negative_.reset();
  }
  table_ = std::move(table);
}

const EmbeddingTable& Engine::embeddings() const {
  if (!table_) {
    throw Error(ErrorCode::kMissingScorer, "no embeddings loaded");
  }
  return *table_;
}

void Engine::SyncScorers() {
  const int d = embeddings().dimension();
  if (!positive_) {
    positive_ = BilinearScorer::NoisyIdentity(d, config_.windows_positive,
                                              config_.threshold,
                                              config_.init_noise, config_.seed);
  }
  if (!negative_) {
    negative_ = BilinearScorer::NoisyIdentity(
        d, config_.windows_negative, config_.threshold, config_.init_noise,
        config_.seed + 1);
  }
  positive_->threshold = config_.threshold;
  positive_->windows = config_.windows_positive;
  negative_->threshold = config_.threshold;
  negative_->windows = config_.windows_negative;
  positive_->CheckValid();
  negative_->CheckValid();
}

BilinearScorer& Engine::positive_scorer() {
  SyncScorers();
  return *positive_;
}

BilinearScorer& Engine::negative_scorer() {
  SyncScorers();
  return config_.shared_scorer ? *positive_ : *negative_;
}

void Engine::SetScorers(BilinearScorer positive, BilinearScorer negative) {
  positive.CheckValid();
  negative.CheckValid();
  if (table_ && (positive.dimension() != table_->dimension() ||
                 negative.dimension() != table_->dimension())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scorer dimension differs from the embedding table");
  }
  config_.threshold = positive.threshold;
  config_.windows_positive = positive.windows;
  config_.windows_negative = negative.windows;
  positive_ = std::move(positive);
  negative_ = std::move(negative);
}

void Engine::LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open checkpoint '" + path + "'");
  auto scorers = ReadCheckpoint(in, path);
  if (auto it = scorers.find("shared"); it != scorers.end()) {
    config_.shared_scorer = true;
    BilinearScorer shared = it->second;
    BilinearScorer negative = shared;
    negative.windows = config_.windows_negative;
    SetScorers(std::move(shared), std::move(negative));
    return;
  }
  auto pos = scorers.find("positive");
  auto neg = scorers.find("negative");
  if (pos == scorers.end() || neg == scorers.end()) {
    throw Error(ErrorCode::kBadCheckpoint,
                path + ": expected scorers 'positive' and 'negative'");
  }
  config_.shared_scorer = false;
  SetScorers(pos->second, neg->second);
}

void Engine::SaveCheckpoint(const std::string& path) {
  SyncScorers();
  std::map<std::string, BilinearScorer> scorers;
  if (config_.shared_scorer) {
    scorers["shared"] = *positive_;
  } else {
    scorers["positive"] = *positive_;
    scorers["negative"] = *negative_;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint '" + path + "'");
  WriteCheckpoint(out, scorers);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

std::unique_ptr<FindProvider> Engine::MakeProvider() {
  if (config_.matcher == MatchMode::kExact) {
    return std::make_unique<ExactFindProvider>();
  }
  if (!table_) {
    throw Error(ErrorCode::kMissingScorer,
                "soft matching needs an embedding table");
  }
  return std::make_unique<SoftFindProvider>(*table_, positive_scorer(),
                                            negative_scorer());
}

std::vector<std::set<std::string>> Engine::Match(
    std::span<const CorpusRecord> records) {
  const auto& compiled = rules();
  auto provider = MakeProvider();
  return ClassifyAll(compiled, records, *provider, config_.threads);
}

EvalReport Engine::Evaluate(std::span<const CorpusRecord> records) {
  const auto& compiled = rules();
  auto provider = MakeProvider();
  return nre::Evaluate(compiled, records, *provider, config_.threads);
}

std::string Engine::Explain(const std::string& rule_id,
                            std::span<const std::string> tokens) {
  const CompiledRule& r = rule(rule_id);
  auto provider = MakeProvider();
  return nre::Explain(r, tokens, *provider, tokenizer());
}

std::vector<double> Engine::TrainFind(std::span<const CorpusRecord> records) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(records.size());
  for (const auto& r : records) sentences.push_back(r.tokens);
  PretrainDataConfig data;
  data.ngram_lengths = config_.ngram_lengths;
  data.samples_per_sentence = config_.samples_per_sentence;
  data.negative_ratio = config_.negative_ratio;
  data.seed = config_.seed;
  const auto samples = GeneratePretrainingData(sentences, data);

  PretrainOptions opts;
  opts.epochs = config_.epochs;
  opts.learning_rate = config_.pretrain_lr;
  opts.seed = config_.seed;
  const auto& table = embeddings();
  std::vector<double> losses =
      Pretrain(&positive_scorer(), table, samples, opts);
  if (!config_.shared_scorer) {
    opts.seed = config_.seed + 1;
    const auto neg = Pretrain(&negative_scorer(), table, samples, opts);
    for (std::size_t e = 0; e < losses.size(); ++e) {
      losses[e] = 0.5 * (losses[e] + neg[e]);
    }
  }
  for (std::size_t e = 0; e < losses.size(); ++e) {
    AppendLog(config_.loss_log, static_cast<int>(e) + 1, losses[e]);
  }
  return losses;
}

std::vector<double> Engine::Finetune(
    std::span<const CorpusRecord> records, int epochs,
    const std::function<void(int, double)>& on_epoch) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot finetune on an empty corpus");
  }
  const auto& compiled = rules();
  std::vector<RuleProgram> programs;
  programs.reserve(compiled.size());
  for (const auto& r : compiled) programs.push_back({&r.program, r.rule.label});
  const auto& table = embeddings();
  BilinearScorer* pos = &positive_scorer();
  BilinearScorer* neg = &negative_scorer();

  Rng rng(config_.seed);
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> rewards;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    rng.Shuffle(order);
    double sum = 0.0;
    for (std::size_t i : order) {
      sum += RlFinetuneStep(programs, records[i].tokens,
                            records[i].gold_labels, pos, neg, table,
                            config_.finetune_lr, rng, config_.reward);
    }
    const double mean = sum / static_cast<double>(records.size());
    rewards.push_back(mean);
    AppendLog(config_.reward_log, epoch, mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return rewards;
}

double Engine::GradCheck() {
  Rng rng(config_.seed);
  std::optional<EmbeddingTable> synthetic;
  const EmbeddingTable* table = table_ ? &*table_ : nullptr;
  if (!table) {
    constexpr int kVocab = 24;
    const int d = config_.grad_check_dim;
    std::vector<std::string> tokens;
    EmbeddingTable::Matrix m(kVocab, d);
    for (int i = 0; i < kVocab; ++i) {
      tokens.push_back("t" + std::to_string(i));
      for (int j = 0; j < d; ++j) m(i, j) = rng.Normal() / std::sqrt(d);
    }
    synthetic.emplace(std::move(tokens), std::move(m));
    table = &*synthetic;
  }
  const auto& vocab = table->tokens();
  double worst = 0.0;
  for (int draw = 0; draw < config_.grad_check_draws; ++draw) {
    const auto scorer = BilinearScorer::NoisyIdentity(
        table->dimension(), config_.windows_positive, config_.threshold, 0.3,
        rng.NextU64());
    TrainSample sample;
    const std::size_t len = 3 + rng.Uniform(10);
    for (std::size_t i = 0; i < len; ++i) {
      sample.tokens.push_back(vocab[rng.Uniform(vocab.size())]);
    }
    const std::size_t n = 1 + rng.Uniform(3);
    const std::size_t start = rng.Uniform(len - n + 1);
    sample.pattern.assign(sample.tokens.begin() + start,
                          sample.tokens.begin() + start + n);
    const LabelSeq gold = FindExact(sample.tokens, sample.pattern);
    for (double v : gold.values) sample.gold.push_back(v >= 0.5 ? 1 : 0);
    worst = std::max(worst, nre::GradCheck(scorer, *table, sample,
                                           config_.grad_check_step,
                                           rng.NextU64()));
  }
  return worst;
}

}  // namespace nre
