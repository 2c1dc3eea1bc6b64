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

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nre/nre.h"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError {
  std::string message;
};

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::string rules;
  std::string rule_text;
  std::string corpus;
  std::string embeddings;
  std::string checkpoint;
  std::string out;
  std::string loss_log;
  std::string reward_log;
  std::string lines;
  std::string rule_id;
  std::string case_id;
  std::string matcher;
  std::string tokenizer;
  std::vector<double> ratios = {0.8, 0.1, 0.1};
  long long seed = -1;
  int epochs = 0;
  int threads = 0;
  bool split_rules = false;
};

class Session {
 public:
  struct Status {
    nre_status code;
  };

  Session() {
    if (nre_engine_create(&engine_) != NRE_OK) throw Status{NRE_E_INTERNAL};
  }
  ~Session() {
    if (corpus_) nre_corpus_destroy(corpus_);
    nre_engine_destroy(engine_);
  }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  nre_engine* get() { return engine_; }

  void Check(nre_status s) {
    if (s != NRE_OK) throw Status{s};
  }

  void Set(const std::string& key, const std::string& value) {
    Check(nre_engine_set_option(engine_, key.c_str(), value.c_str()));
  }

  std::string Get(const std::string& key) {
    char* v = nullptr;
    Check(nre_engine_get_option(engine_, key.c_str(), &v));
    std::string out = v;
    nre_free_string(v);
    return out;
  }

  // Flag value if given, else the config value; empty when neither is set.
  std::string Path(const std::string& flag, const std::string& key) {
    if (!flag.empty()) {
      Set(key, flag);
      return flag;
    }
    return Get(key);
  }

  std::string Need(const std::string& flag, const std::string& key,
                   const std::string& name) {
    std::string p = Path(flag, key);
    if (p.empty()) throw UsageError{"missing " + name + " (flag or '" + key + "' in config)"};
    return p;
  }

  void LoadRules(const Options& o) {
    if (!o.rule_text.empty()) {
      Check(nre_engine_add_rule(engine_, "rule/1", "rule", o.rule_text.c_str()));
      return;
    }
    Check(nre_engine_load_rules(engine_, Need(o.rules, "rules", "--rules").c_str()));
  }

  nre_corpus* LoadCorpus(const Options& o) {
    const std::string path = Need(o.corpus, "corpus", "--corpus");
    Check(nre_corpus_load(engine_, path.c_str(), &corpus_));
    return corpus_;
  }

  void LoadEmbeddings(const Options& o, bool required) {
    const std::string path =
        required ? Need(o.embeddings, "embeddings", "--embeddings")
                 : Path(o.embeddings, "embeddings");
    if (!path.empty()) Check(nre_engine_load_embeddings(engine_, path.c_str()));
  }

  static std::string Take(char* s) {
    std::string out = s ? s : "";
    nre_free_string(s);
    return out;
  }

 private:
  nre_engine* engine_ = nullptr;
  nre_corpus* corpus_ = nullptr;
};

void Configure(Session& s, const Options& o) {
  if (const char* env = std::getenv("NRE_CONFIG"); env && *env) {
    s.Check(nre_engine_load_config(s.get(), env));
  }
  if (!o.config.empty()) s.Check(nre_engine_load_config(s.get(), o.config.c_str()));
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError{"--set expects key=value, got '" + kv + "'"};
    s.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.tokenizer.empty()) s.Set("tokenizer", o.tokenizer);
  if (!o.matcher.empty()) s.Set("matcher", o.matcher);
  if (o.seed >= 0) s.Set("seed", std::to_string(o.seed));
  if (o.threads > 0) s.Set("threads", std::to_string(o.threads));
  if (o.epochs > 0) s.Set("epochs", std::to_string(o.epochs));
  if (!o.loss_log.empty()) s.Set("loss_log", o.loss_log);
  if (!o.reward_log.empty()) s.Set("reward_log", o.reward_log);
}

void Write(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
    throw Session::Status{NRE_E_IO};
  }
  std::fputs(text.c_str(), f);
  std::fclose(f);
}

void LoadSoftState(Session& s, const Options& o) {
  const bool soft = s.Get("matcher") == "soft";
  s.LoadEmbeddings(o, soft);
  const std::string ckpt = s.Path(o.checkpoint, "checkpoint");
  if (!ckpt.empty()) s.Check(nre_engine_load_checkpoint(s.get(), ckpt.c_str()));
}

int RunCompile(Session& s, const Options& o) {
  s.LoadRules(o);
  const std::size_t n = nre_engine_rule_count(s.get());
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    char* rpn = nullptr;
    s.Check(nre_engine_compile_text(s.get(), i, &rpn));
    out += Session::Take(rpn) + "\n";
  }
  Write(o.out, out);
  return 0;
}

int RunMatch(Session& s, const Options& o) {
  s.LoadRules(o);
  LoadSoftState(s, o);
  nre_corpus* corpus = s.LoadCorpus(o);
  char* lines = nullptr;
  s.Check(nre_engine_match(s.get(), corpus, &lines));
  Write(o.out, Session::Take(lines));
  return 0;
}

int RunEval(Session& s, const Options& o) {
  s.LoadRules(o);
  LoadSoftState(s, o);
  nre_corpus* corpus = s.LoadCorpus(o);
  char* table = nullptr;
  char* lines = nullptr;
  s.Check(nre_engine_evaluate(s.get(), corpus, &table, &lines, nullptr,
                              nullptr, nullptr));
  const std::string table_text = Session::Take(table);
  const std::string lines_text = Session::Take(lines);
  Write(o.out, table_text);
  if (!o.lines.empty()) Write(o.lines, lines_text);
  return 0;
}

int RunTrainFind(Session& s, const Options& o) {
  s.LoadEmbeddings(o, true);
  const std::string out = s.Need(o.checkpoint, "checkpoint", "--checkpoint");
  nre_corpus* corpus = s.LoadCorpus(o);
  double loss = 0.0;
  s.Check(nre_engine_train_find(s.get(), corpus, &loss));
  s.Check(nre_engine_save_checkpoint(s.get(), out.c_str()));
  std::printf("final_loss %.6f\n", loss);
  return 0;
}

int RunFinetune(Session& s, const Options& o) {
  s.LoadRules(o);
  s.LoadEmbeddings(o, true);
  const std::string ckpt = s.Path(o.checkpoint, "checkpoint");
  if (!ckpt.empty()) s.Check(nre_engine_load_checkpoint(s.get(), ckpt.c_str()));
  nre_corpus* corpus = s.LoadCorpus(o);
  const int epochs = std::stoi(s.Get("epochs"));
  double reward = 0.0;
  s.Check(nre_engine_finetune(s.get(), corpus, epochs, &reward));
  const std::string out = o.out.empty() ? ckpt : o.out;
  if (out.empty()) throw UsageError{"missing --out checkpoint path"};
  s.Check(nre_engine_save_checkpoint(s.get(), out.c_str()));
  std::printf("final_reward %.6f\n", reward);
  return 0;
}

int RunExplain(Session& s, const Options& o) {
  s.LoadRules(o);
  LoadSoftState(s, o);
  nre_corpus* corpus = s.LoadCorpus(o);
  const std::string rule_id = o.rule_id.empty() && !o.rule_text.empty()
                                  ? "rule/1"
                                  : o.rule_id;
  if (rule_id.empty()) throw UsageError{"missing --rule-id"};
  char* trace = nullptr;
  s.Check(nre_engine_explain(s.get(), rule_id.c_str(), corpus,
                             o.case_id.c_str(), &trace));
  Write(o.out, Session::Take(trace));
  return 0;
}

int RunGradCheck(Session& s, const Options& o) {
  s.LoadEmbeddings(o, false);
  double err = 0.0;
  s.Check(nre_engine_grad_check(s.get(), &err));
  std::printf("%.6e\n", err);
  return 0;
}

int RunSplit(Session& s, const Options& o) {
  if (o.ratios.size() != 3) throw UsageError{"--ratios expects three values"};
  if (o.out.empty()) throw UsageError{"missing --out prefix"};
  const std::string path = o.split_rules ? s.Need(o.rules, "rules", "--rules")
                                         : s.Need(o.corpus, "corpus", "--corpus");
  const auto seed = static_cast<uint64_t>(std::stoull(s.Get("seed")));
  size_t sizes[3] = {0, 0, 0};
  s.Check(nre_split_file(s.get(), path.c_str(), o.split_rules ? 1 : 0,
                         o.ratios[0], o.ratios[1], o.ratios[2], seed,
                         o.out.c_str(), sizes));
  std::printf("train %zu\nvalidation %zu\ntest %zu\n", sizes[0], sizes[1],
              sizes[2]);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural rule engine: compile, match and train rule programs."};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-c,--config", o.config, "key = value config file");
  app.add_option("--set", o.sets, "override a config entry (key=value)");
  app.add_option("--tokenizer", o.tokenizer, "char, word or whitespace");

  auto add_rules = [&](CLI::App* cmd) {
    cmd->add_option("-r,--rules", o.rules, "rule file (label<TAB>rule)");
    cmd->add_option("--rule", o.rule_text, "single inline rule");
  };
  auto add_soft = [&](CLI::App* cmd) {
    cmd->add_option("--matcher", o.matcher, "exact or soft");
    cmd->add_option("-e,--embeddings", o.embeddings, "word vector file");
    cmd->add_option("--checkpoint", o.checkpoint, "scorer checkpoint");
    cmd->add_option("-j,--threads", o.threads, "worker threads")->check(CLI::Range(1, 256));
  };

  auto* compile = app.add_subcommand("compile", "print the RPN program of each rule");
  add_rules(compile);
  compile->add_option("-o,--out", o.out, "output file");

  auto* match = app.add_subcommand("match", "predict labels per case");
  add_rules(match);
  add_soft(match);
  match->add_option("--corpus", o.corpus, "corpus file (id<TAB>labels<TAB>text)");
  match->add_option("-o,--out", o.out, "output file");

  auto* eval = app.add_subcommand("eval", "compare predictions with gold labels");
  add_rules(eval);
  add_soft(eval);
  eval->add_option("--corpus", o.corpus, "corpus file");
  eval->add_option("-o,--out", o.out, "report table file");
  eval->add_option("--lines", o.lines, "report lines file (label,TP,FP,FN)");

  auto* train = app.add_subcommand("train-find", "pretrain the soft Find scorers");
  train->add_option("--corpus", o.corpus, "sentences to sample patterns from");
  train->add_option("-e,--embeddings", o.embeddings, "word vector file");
  train->add_option("--checkpoint", o.checkpoint, "output checkpoint");
  train->add_option("--loss-log", o.loss_log, "append epoch,loss rows");
  train->add_option("--epochs", o.epochs, "epoch cap")->check(CLI::Range(1, 100000));
  train->add_option("--seed", o.seed, "random seed")->check(CLI::NonNegativeNumber);

  auto* finetune = app.add_subcommand("finetune", "policy-gradient finetuning against gold labels");
  add_rules(finetune);
  finetune->add_option("--corpus", o.corpus, "labeled corpus");
  finetune->add_option("-e,--embeddings", o.embeddings, "word vector file");
  finetune->add_option("--checkpoint", o.checkpoint, "starting checkpoint");
  finetune->add_option("-o,--out", o.out, "output checkpoint");
  finetune->add_option("--reward-log", o.reward_log, "append epoch,reward rows");
  finetune->add_option("--epochs", o.epochs, "epochs")->check(CLI::Range(1, 100000));
  finetune->add_option("--seed", o.seed, "random seed")->check(CLI::NonNegativeNumber);

  auto* explain = app.add_subcommand("explain", "trace one rule on one case");
  add_rules(explain);
  add_soft(explain);
  explain->add_option("--corpus", o.corpus, "corpus file");
  explain->add_option("--rule-id", o.rule_id, "rule id (label/k)");
  explain->add_option("--case-id", o.case_id, "case id")->required();
  explain->add_option("-o,--out", o.out, "output file");

  auto* grad = app.add_subcommand("grad-check", "finite-difference check of the scorer gradient");
  grad->add_option("-e,--embeddings", o.embeddings, "word vector file");
  grad->add_option("--seed", o.seed, "random seed")->check(CLI::NonNegativeNumber);

  auto* split = app.add_subcommand("split", "deterministic train/validation/test split");
  split->add_option("--corpus", o.corpus, "corpus file");
  split->add_option("-r,--rules", o.rules, "rule file");
  split->add_flag("--split-rules", o.split_rules, "split the rule file instead of the corpus");
  split->add_option("--ratios", o.ratios, "three ratios summing to 1")->delimiter(',')->expected(3);
  split->add_option("--seed", o.seed, "random seed")->check(CLI::NonNegativeNumber);
  split->add_option("-o,--out", o.out, "output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    Session s;
    Configure(s, o);
    if (*compile) return RunCompile(s, o);
    if (*match) return RunMatch(s, o);
    if (*eval) return RunEval(s, o);
    if (*train) return RunTrainFind(s, o);
    if (*finetune) return RunFinetune(s, o);
    if (*explain) return RunExplain(s, o);
    if (*grad) return RunGradCheck(s, o);
    if (*split) return RunSplit(s, o);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.message.c_str());
    return kUsageError;
  } catch (const Session::Status& st) {
    const char* kind = nre_last_error_kind();
    std::fprintf(stderr, "error [%s]: %s\n", *kind ? kind : "Error",
                 nre_last_error());
    return st.code == NRE_E_USAGE ? kUsageError : kDataError;
  }
  return kUsageError;
}
