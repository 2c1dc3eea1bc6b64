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

#include "nre/nre.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "corpus.h"
#include "engine.h"
#include "error.h"
#include "utf8.h"

struct nre_engine {
  nre::Engine engine;
};

struct nre_corpus {
  std::vector<nre::CorpusRecord> records;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;

nre_status StatusFor(nre::ErrorCode code) {
  using nre::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidUtf8:
    case ErrorCode::kEmptyPositive:
    case ErrorCode::kUnbalancedGroup:
    case ErrorCode::kDanglingGapOperator:
    case ErrorCode::kMalformedGap:
    case ErrorCode::kUnsupportedSyntax:
    case ErrorCode::kSecondSeparator:
    case ErrorCode::kEmptyBranch:
    case ErrorCode::kBareAlternation:
    case ErrorCode::kEmptyLabel:
      return NRE_E_SYNTAX;
    case ErrorCode::kStackUnderflow:
    case ErrorCode::kTrailingValues:
    case ErrorCode::kMisplacedOutput:
    case ErrorCode::kMixedPolarityOr:
    case ErrorCode::kMixedPolarityOrdered:
    case ErrorCode::kNegativeOutput:
    case ErrorCode::kInvalidDistance:
    case ErrorCode::kCaseEmpty:
    case ErrorCode::kMatcherFailure:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kPolarityMismatch:
      return NRE_E_LAYOUT;
    case ErrorCode::kNonFiniteLoss:
    case ErrorCode::kNonFiniteGradient:
      return NRE_E_NUMERIC;
    case ErrorCode::kIo:
      return NRE_E_IO;
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kRatioSum:
      return NRE_E_USAGE;
    default:
      return NRE_E_DATA;
  }
}

nre_status Fail(nre_status status, const std::string& kind,
                const std::string& message) {
  last_kind = kind;
  last_error = message;
  return status;
}

template <typename F>
nre_status Guarded(F&& body) {
  try {
    body();
    last_kind.clear();
    last_error.clear();
    return NRE_OK;
  } catch (const nre::Error& e) {
    return Fail(StatusFor(e.code()), std::string(nre::ErrorCodeName(e.code())),
                e.what());
  } catch (const std::bad_alloc&) {
    return Fail(NRE_E_INTERNAL, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return Fail(NRE_E_INTERNAL, "Internal", e.what());
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(const void* p, const char* what) {
  if (!p) {
    throw nre::Error(nre::ErrorCode::kInvalidArgument,
                     std::string(what) + " must not be NULL");
  }
}

std::string JoinLabels(const std::set<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ',';
    out += l;
  }
  return out;
}

const nre::CorpusRecord& FindCase(const nre_corpus* corpus,
                                  const std::string& id) {
  for (const auto& r : corpus->records) {
    if (r.id == id) return r;
  }
  throw nre::Error(nre::ErrorCode::kUnknownCase, "no case with id '" + id + "'");
}

}  // namespace

extern "C" {

const char* nre_version(void) { return "0.1.0"; }

const char* nre_last_error(void) { return last_error.c_str(); }

const char* nre_last_error_kind(void) { return last_kind.c_str(); }

void nre_free_string(char* s) { std::free(s); }

nre_status nre_engine_create(nre_engine** out) {
  return Guarded([&] {
    Require(out, "out");
    *out = new nre_engine();
  });
}

void nre_engine_destroy(nre_engine* engine) { delete engine; }

nre_status nre_engine_load_config(nre_engine* engine, const char* path) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    engine->engine.LoadConfig(path);
  });
}

nre_status nre_engine_set_option(nre_engine* engine, const char* key,
                                 const char* value) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(key, "key");
    Require(value, "value");
    engine->engine.SetOption(key, value);
  });
}

nre_status nre_engine_get_option(nre_engine* engine, const char* key,
                                 char** value) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(key, "key");
    Require(value, "value");
    *value = Dup(engine->engine.config().Get(key));
  });
}

nre_status nre_engine_load_rules(nre_engine* engine, const char* path) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    engine->engine.LoadRules(path);
  });
}

nre_status nre_engine_add_rule(nre_engine* engine, const char* id,
                               const char* label, const char* text) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(id, "id");
    Require(label, "label");
    Require(text, "text");
    engine->engine.AddRule({id, label, text});
  });
}

size_t nre_engine_rule_count(const nre_engine* engine) {
  return engine ? engine->engine.rule_sources().size() : 0;
}

const char* nre_engine_rule_id(const nre_engine* engine, size_t index) {
  if (!engine || index >= engine->engine.rule_sources().size()) return nullptr;
  return engine->engine.rule_sources()[index].id.c_str();
}

nre_status nre_engine_compile_text(nre_engine* engine, size_t index,
                                   char** rpn) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(rpn, "rpn");
    const auto& rules = engine->engine.rules();
    if (index >= rules.size()) {
      throw nre::Error(nre::ErrorCode::kUnknownRule,
                       "rule index " + std::to_string(index) + " out of range");
    }
    *rpn = Dup(nre::ToText(rules[index].program, engine->engine.tokenizer()));
  });
}

nre_status nre_engine_load_embeddings(nre_engine* engine, const char* path) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    engine->engine.LoadEmbeddings(path);
  });
}

nre_status nre_engine_load_checkpoint(nre_engine* engine, const char* path) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    engine->engine.LoadCheckpoint(path);
  });
}

nre_status nre_engine_save_checkpoint(nre_engine* engine, const char* path) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    engine->engine.SaveCheckpoint(path);
  });
}

nre_status nre_corpus_load(nre_engine* engine, const char* path,
                           nre_corpus** out) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    Require(out, "out");
    auto corpus = std::make_unique<nre_corpus>();
    corpus->records = engine->engine.LoadCorpus(path);
    *out = corpus.release();
  });
}

void nre_corpus_destroy(nre_corpus* corpus) { delete corpus; }

size_t nre_corpus_size(const nre_corpus* corpus) {
  return corpus ? corpus->records.size() : 0;
}

const char* nre_corpus_id(const nre_corpus* corpus, size_t index) {
  if (!corpus || index >= corpus->records.size()) return nullptr;
  return corpus->records[index].id.c_str();
}

nre_status nre_engine_match_text(nre_engine* engine, const char* text,
                                 char** labels) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(text, "text");
    Require(labels, "labels");
    const auto tokens = engine->engine.tokenizer().Tokenize(text);
    auto provider = engine->engine.MakeProvider();
    *labels = Dup(JoinLabels(
        nre::Classify(engine->engine.rules(), tokens, *provider)));
  });
}

nre_status nre_engine_match(nre_engine* engine, const nre_corpus* corpus,
                            char** lines) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(corpus, "corpus");
    Require(lines, "lines");
    const auto predicted = engine->engine.Match(corpus->records);
    std::string out;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      out += corpus->records[i].id + "\t" + JoinLabels(predicted[i]) + "\n";
    }
    *lines = Dup(out);
  });
}

nre_status nre_engine_evaluate(nre_engine* engine, const nre_corpus* corpus,
                               char** table, char** lines, double* precision,
                               double* recall, double* f1) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(corpus, "corpus");
    const nre::EvalReport report = engine->engine.Evaluate(corpus->records);
    std::unique_ptr<char, decltype(&std::free)> t(
        table ? Dup(nre::FormatReportTable(report)) : nullptr, &std::free);
    std::unique_ptr<char, decltype(&std::free)> l(
        lines ? Dup(nre::FormatReportLines(report)) : nullptr, &std::free);
    if (table) *table = t.release();
    if (lines) *lines = l.release();
    if (precision) *precision = report.precision;
    if (recall) *recall = report.recall;
    if (f1) *f1 = report.f1;
  });
}

nre_status nre_engine_explain(nre_engine* engine, const char* rule_id,
                              const nre_corpus* corpus, const char* case_id,
                              char** trace) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(rule_id, "rule_id");
    Require(corpus, "corpus");
    Require(case_id, "case_id");
    Require(trace, "trace");
    const auto& record = FindCase(corpus, case_id);
    *trace = Dup(engine->engine.Explain(rule_id, record.tokens));
  });
}

nre_status nre_engine_train_find(nre_engine* engine, const nre_corpus* corpus,
                                 double* final_loss) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(corpus, "corpus");
    const auto losses = engine->engine.TrainFind(corpus->records);
    if (final_loss) *final_loss = losses.empty() ? 0.0 : losses.back();
  });
}

nre_status nre_engine_finetune(nre_engine* engine, const nre_corpus* corpus,
                               int epochs, double* final_reward) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(corpus, "corpus");
    if (epochs < 1) {
      throw nre::Error(nre::ErrorCode::kInvalidArgument, "epochs must be >= 1");
    }
    const auto rewards = engine->engine.Finetune(corpus->records, epochs);
    if (final_reward) *final_reward = rewards.back();
  });
}

nre_status nre_engine_grad_check(nre_engine* engine,
                                 double* max_relative_error) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(max_relative_error, "max_relative_error");
    *max_relative_error = engine->engine.GradCheck();
  });
}

nre_status nre_split_file(nre_engine* engine, const char* path, int is_rules,
                          double train, double validation, double test,
                          uint64_t seed, const char* out_prefix,
                          size_t sizes[3]) {
  return Guarded([&] {
    Require(engine, "engine");
    Require(path, "path");
    Require(out_prefix, "out_prefix");
    if (is_rules) {
      nre::LoadRuleFile(path);
    } else {
      engine->engine.LoadCorpus(path);
    }
    std::ifstream in(path);
    if (!in) throw nre::Error(nre::ErrorCode::kIo, "cannot open '" + std::string(path) + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      std::size_t lead = 0;
      while (lead < line.size() && nre::utf8::IsAsciiSpace(line[lead])) ++lead;
      if (lead == line.size()) continue;
      if (is_rules && line[lead] == '#') continue;
      lines.push_back(line);
    }
    auto split = nre::SplitCorpus(std::move(lines), {train, validation, test}, seed);
    const std::string prefix = out_prefix;
    const std::pair<const char*, const std::vector<std::string>*> parts[] = {
        {".train", &split.train},
        {".validation", &split.validation},
        {".test", &split.test}};
    for (const auto& [suffix, part] : parts) {
      const std::string out_path = prefix + suffix;
      std::ofstream out(out_path);
      if (!out) throw nre::Error(nre::ErrorCode::kIo, "cannot write '" + out_path + "'");
      for (const auto& l : *part) out << l << '\n';
    }
    if (sizes) {
      sizes[0] = split.train.size();
      sizes[1] = split.validation.size();
      sizes[2] = split.test.size();
    }
  });
}

}  // extern "C"
