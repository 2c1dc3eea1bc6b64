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

#ifndef NRE_RL_FINETUNE_H_
#define NRE_RL_FINETUNE_H_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "layout.h"
#include "random.h"
#include "soft_find.h"

namespace nre {

enum class RewardMode {
  // +1 when the predicted label set equals the gold set, else -1, shared by
  // every Find decision of the case.
  kCase,
  // Each rule gets +1 when its label's prediction agrees with gold, else -1.
  kLabel,
};

struct RuleProgram {
  const RpnProgram* program;
  std::string label;
};

// One REINFORCE update on one case. Every Find instruction samples per-token
// Bernoulli labels from its scorer's probabilities, all rules run on the
// sampled labels, and each decision b_i adds
//   reward * d/dW log(b_i p_i + (1 - b_i)(1 - p_i))
// to its scorer's gradient; W then takes one ascent step. `negative` may
// point at the same scorer as `positive`. Returns the mean reward.
double RlFinetuneStep(std::span<const RuleProgram> rules,
                      std::span<const std::string> tokens,
                      const std::set<std::string>& gold,
                      BilinearScorer* positive, BilinearScorer* negative,
                      const EmbeddingTable& table, double learning_rate,
                      Rng& rng, RewardMode mode = RewardMode::kCase);

}  // namespace nre

#endif  // NRE_RL_FINETUNE_H_
