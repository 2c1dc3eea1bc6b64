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

#include "config.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.h"
#include "utf8.h"

namespace nre {

namespace {

std::string Trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && utf8::IsAsciiSpace(s[b])) ++b;
  while (e > b && utf8::IsAsciiSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void Bad(const std::string& key, const std::string& value,
                      const std::string& why) {
  throw Error(ErrorCode::kConfig,
              "bad value '" + value + "' for '" + key + "': " + why);
}

double ToDouble(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
    Bad(key, value, "expected a number");
  }
  return v;
}

long long ToInt(const std::string& key, const std::string& value) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    Bad(key, value, "expected an integer");
  }
  return v;
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  Bad(key, value, "expected true or false");
}

std::vector<int> ToIntList(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    const long long v = ToInt(key, item);
    if (v < 1 || v > 64) Bad(key, value, "entries must lie in [1, 64]");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) Bad(key, value, "list is empty");
  return out;
}

std::string FromIntList(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string FromDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void EngineConfig::Set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = Trim(raw_key);
  const std::string value = Trim(raw_value);
  if (key == "tokenizer") {
    tokenizer = ParseTokenizerMode(value);
  } else if (key == "lexicon") {
    lexicon = value;
  } else if (key == "decompose_literals") {
    layout.decompose_literals = ToBool(key, value);
  } else if (key == "max_find_ngram") {
    const auto v = ToInt(key, value);
    if (v < 1 || v > 64) Bad(key, value, "must lie in [1, 64]");
    layout.max_find_ngram = static_cast<int>(v);
  } else if (key == "matcher") {
    if (value == "exact") {
      matcher = MatchMode::kExact;
    } else if (value == "soft") {
      matcher = MatchMode::kSoft;
    } else {
      Bad(key, value, "expected exact or soft");
    }
  } else if (key == "windows_positive") {
    windows_positive = ToIntList(key, value);
  } else if (key == "windows_negative") {
    windows_negative = ToIntList(key, value);
  } else if (key == "threshold") {
    const double v = ToDouble(key, value);
    if (!(v > 0 && v < 1)) Bad(key, value, "must lie strictly in (0, 1)");
    threshold = v;
  } else if (key == "shared_scorer") {
    shared_scorer = ToBool(key, value);
  } else if (key == "init_noise") {
    const double v = ToDouble(key, value);
    if (v < 0) Bad(key, value, "must be >= 0");
    init_noise = v;
  } else if (key == "seed") {
    const auto v = ToInt(key, value);
    if (v < 0) Bad(key, value, "must be >= 0");
    seed = static_cast<std::uint64_t>(v);
  } else if (key == "pretrain_lr" || key == "finetune_lr") {
    const double v = ToDouble(key, value);
    if (!(v > 0)) Bad(key, value, "must be > 0");
    (key == "pretrain_lr" ? pretrain_lr : finetune_lr) = v;
  } else if (key == "epochs") {
    const auto v = ToInt(key, value);
    if (v < 1 || v > 100000) Bad(key, value, "must lie in [1, 100000]");
    epochs = static_cast<int>(v);
  } else if (key == "ngram_lengths") {
    ngram_lengths = ToIntList(key, value);
  } else if (key == "samples_per_sentence") {
    const auto v = ToInt(key, value);
    if (v < 1 || v > 10000) Bad(key, value, "must lie in [1, 10000]");
    samples_per_sentence = static_cast<int>(v);
  } else if (key == "negative_ratio") {
    const double v = ToDouble(key, value);
    if (v < 0 || v > 100) Bad(key, value, "must lie in [0, 100]");
    negative_ratio = v;
  } else if (key == "reward") {
    if (value == "case") {
      reward = RewardMode::kCase;
    } else if (value == "label") {
      reward = RewardMode::kLabel;
    } else {
      Bad(key, value, "expected case or label");
    }
  } else if (key == "grad_check_step") {
    const double v = ToDouble(key, value);
    if (!(v > 0)) Bad(key, value, "must be > 0");
    grad_check_step = v;
  } else if (key == "grad_check_draws") {
    const auto v = ToInt(key, value);
    if (v < 1 || v > 100000) Bad(key, value, "must lie in [1, 100000]");
    grad_check_draws = static_cast<int>(v);
  } else if (key == "grad_check_dim") {
    const auto v = ToInt(key, value);
    if (v < 1 || v > 1024) Bad(key, value, "must lie in [1, 1024]");
    grad_check_dim = static_cast<int>(v);
  } else if (key == "threads") {
    const auto v = ToInt(key, value);
    if (v < 1 || v > 256) Bad(key, value, "must lie in [1, 256]");
    threads = static_cast<int>(v);
  } else if (key == "rules") {
    rules = value;
  } else if (key == "corpus") {
    corpus = value;
  } else if (key == "embeddings") {
    embeddings = value;
  } else if (key == "checkpoint") {
    checkpoint = value;
  } else if (key == "loss_log") {
    loss_log = value;
  } else if (key == "reward_log") {
    reward_log = value;
  } else {
    throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
}

std::map<std::string, std::string> EngineConfig::Dump() const {
  return {
      {"tokenizer", std::string(TokenizerModeName(tokenizer))},
      {"lexicon", lexicon},
      {"decompose_literals", layout.decompose_literals ? "true" : "false"},
      {"max_find_ngram", std::to_string(layout.max_find_ngram)},
      {"matcher", matcher == MatchMode::kExact ? "exact" : "soft"},
      {"windows_positive", FromIntList(windows_positive)},
      {"windows_negative", FromIntList(windows_negative)},
      {"threshold", FromDouble(threshold)},
      {"shared_scorer", shared_scorer ? "true" : "false"},
      {"init_noise", FromDouble(init_noise)},
      {"seed", std::to_string(seed)},
      {"pretrain_lr", FromDouble(pretrain_lr)},
      {"finetune_lr", FromDouble(finetune_lr)},
      {"epochs", std::to_string(epochs)},
      {"ngram_lengths", FromIntList(ngram_lengths)},
      {"samples_per_sentence", std::to_string(samples_per_sentence)},
      {"negative_ratio", FromDouble(negative_ratio)},
      {"reward", reward == RewardMode::kCase ? "case" : "label"},
      {"grad_check_step", FromDouble(grad_check_step)},
      {"grad_check_draws", std::to_string(grad_check_draws)},
      {"grad_check_dim", std::to_string(grad_check_dim)},
      {"threads", std::to_string(threads)},
      {"rules", rules},
      {"corpus", corpus},
      {"embeddings", embeddings},
      {"checkpoint", checkpoint},
      {"loss_log", loss_log},
      {"reward_log", reward_log},
  };
}

std::string EngineConfig::Get(const std::string& key) const {
  const auto all = Dump();
  auto it = all.find(Trim(key));
  if (it == all.end()) {
    throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
  return it->second;
}

void ReadConfig(std::istream& in, EngineConfig* config,
                const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig,
                  name + ":" + std::to_string(line_no) +
                      ": expected 'key = value'",
                  line_no);
    }
    try {
      config->Set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig,
                  name + ":" + std::to_string(line_no) + ": " + e.what(),
                  line_no);
    }
  }
}

void LoadConfigFile(const std::string& path, EngineConfig* config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  ReadConfig(in, config, path);
}

}  // namespace nre
