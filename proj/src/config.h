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

#ifndef NRE_CONFIG_H_
#define NRE_CONFIG_H_

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "layout.h"
#include "rl_finetune.h"
#include "tokenizer.h"

namespace nre {

enum class MatchMode { kExact, kSoft };

struct EngineConfig {
  TokenizerMode tokenizer = TokenizerMode::kWhitespace;
  std::string lexicon;  // word list for TokenizerMode::kWord

  LayoutConfig layout;
  MatchMode matcher = MatchMode::kExact;

  std::vector<int> windows_positive = {1, 2, 3};
  std::vector<int> windows_negative = {1, 2};
  double threshold = 0.6;
  bool shared_scorer = false;
  double init_noise = 0.01;

  std::uint64_t seed = 13;
  double pretrain_lr = 0.01;
  double finetune_lr = 0.001;
  int epochs = 20;
  std::vector<int> ngram_lengths = {1, 2, 3};
  int samples_per_sentence = 2;
  double negative_ratio = 0.5;
  RewardMode reward = RewardMode::kCase;

  double grad_check_step = 1e-5;
  int grad_check_draws = 10;
  int grad_check_dim = 16;

  int threads = 1;

  std::string rules;
  std::string corpus;
  std::string embeddings;
  std::string checkpoint;
  std::string loss_log;
  std::string reward_log;

  // Sets one "key = value" entry; throws Error(kConfig) for unknown keys
  // and out-of-range values.
  void Set(const std::string& key, const std::string& value);
  std::string Get(const std::string& key) const;

  // Every key with its current value, in a stable order.
  std::map<std::string, std::string> Dump() const;
};

// Flat "key = value" lines; "#" starts a comment.
void ReadConfig(std::istream& in, EngineConfig* config,
                const std::string& name = "<config>");
void LoadConfigFile(const std::string& path, EngineConfig* config);

// Name of the optional environment variable holding a config path.
inline constexpr const char kConfigEnvVar[] = "NRE_CONFIG";

}  // namespace nre

#endif  // NRE_CONFIG_H_
