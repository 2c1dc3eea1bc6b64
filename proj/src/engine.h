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

#ifndef NRE_ENGINE_H_
#define NRE_ENGINE_H_

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "config.h"
#include "corpus.h"
#include "embeddings.h"
#include "layout.h"
#include "rule_dialect.h"
#include "soft_find.h"
#include "tokenizer.h"

namespace nre {

struct CompiledRule {
  RuleSource rule;
  RuleAst ast;
  RpnProgram program;
};

// parse -> linearize -> validate. Errors carry the rule id.
CompiledRule CompileRule(const RuleSource& source, const Tokenizer& tokenizer,
                         const LayoutConfig& layout = {});

// Throws DuplicateId when two sources share an id.
std::vector<CompiledRule> CompileRules(std::span<const RuleSource> sources,
                                       const Tokenizer& tokenizer,
                                       const LayoutConfig& layout = {});

MatchResult MatchCase(const CompiledRule& rule,
                      std::span<const std::string> tokens,
                      const FindProvider& provider);

std::set<std::string> Classify(std::span<const CompiledRule> rules,
                               std::span<const std::string> tokens,
                               const FindProvider& provider);

// Predicted label sets in record order; `threads` > 1 splits the records
// into contiguous blocks.
std::vector<std::set<std::string>> ClassifyAll(
    std::span<const CompiledRule> rules,
    std::span<const CorpusRecord> records, const FindProvider& provider,
    int threads = 1);

struct LabelCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  bool operator==(const LabelCounts&) const = default;
};

struct EvalReport {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::map<std::string, LabelCounts> per_label;
  LabelCounts total;
  std::size_t case_count = 0;
  bool operator==(const EvalReport&) const = default;
};

// Micro-averaged over (case, label) pairs. P is 1 when TP = FP = 0 and R is
// 1 when TP = FN = 0.
EvalReport ScorePredictions(std::span<const CorpusRecord> records,
                            std::span<const std::set<std::string>> predicted);

EvalReport Evaluate(std::span<const CompiledRule> rules,
                    std::span<const CorpusRecord> records,
                    const FindProvider& provider, int threads = 1);

std::string FormatReportTable(const EvalReport& report);
// "label,TP,FP,FN" per label, then "__all__,TP,FP,FN,P,R,F1".
std::string FormatReportLines(const EvalReport& report);

std::string Explain(const CompiledRule& rule,
                    std::span<const std::string> tokens,
                    const FindProvider& provider, const Tokenizer& tokenizer);

// Owns configuration, rules, embeddings and scorers behind one object.
class Engine {
 public:
  explicit Engine(EngineConfig config = {});

  const EngineConfig& config() const { return config_; }
  void SetOption(const std::string& key, const std::string& value);
  void LoadConfig(const std::string& path);

  const Tokenizer& tokenizer();

  void LoadRules(const std::string& path);
  void AddRule(const RuleSource& source);
  void ClearRules();
  const std::vector<RuleSource>& rule_sources() const { return sources_; }
  const std::vector<CompiledRule>& rules();
  const CompiledRule& rule(const std::string& id);

  std::vector<CorpusRecord> LoadCorpus(const std::string& path);

  void LoadEmbeddings(const std::string& path);
  void SetEmbeddings(EmbeddingTable table);
  bool has_embeddings() const { return table_.has_value(); }
  const EmbeddingTable& embeddings() const;

  // Scorers are created on first use as identity plus noise.
  BilinearScorer& positive_scorer();
  BilinearScorer& negative_scorer();
  void SetScorers(BilinearScorer positive, BilinearScorer negative);
  void LoadCheckpoint(const std::string& path);
  void SaveCheckpoint(const std::string& path);

  // Exact or soft per the `matcher` option.
  std::unique_ptr<FindProvider> MakeProvider();

  std::vector<std::set<std::string>> Match(
      std::span<const CorpusRecord> records);
  EvalReport Evaluate(std::span<const CorpusRecord> records);
  std::string Explain(const std::string& rule_id,
                      std::span<const std::string> tokens);

  // Pretrains every scorer on n-grams sampled from `records`; returns the
  // mean loss per epoch and appends it to loss_log when set.
  std::vector<double> TrainFind(std::span<const CorpusRecord> records);

  // Policy-gradient epochs over `records`; returns the mean reward per epoch
  // and appends it to reward_log when set.
  std::vector<double> Finetune(
      std::span<const CorpusRecord> records, int epochs,
      const std::function<void(int, double)>& on_epoch = {});

  // Max relative error over grad_check_draws random scorer/sample draws.
  double GradCheck();

 private:
  void SyncScorers();
  void Invalidate();

  EngineConfig config_;
  std::optional<Tokenizer> tokenizer_;
  std::vector<RuleSource> sources_;
  std::optional<std::vector<CompiledRule>> compiled_;
  std::optional<EmbeddingTable> table_;
  std::optional<BilinearScorer> positive_;
  std::optional<BilinearScorer> negative_;
};

void AppendLog(const std::string& path, int epoch, double value);

}  // namespace nre

#endif  // NRE_ENGINE_H_
