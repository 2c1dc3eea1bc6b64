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

#ifndef NRE_PRETRAINING_H_
#define NRE_PRETRAINING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "soft_find.h"

namespace nre {

struct PretrainDataConfig {
  std::vector<int> ngram_lengths = {1, 2, 3};
  int samples_per_sentence = 2;
  // Negatives generated per positive; the fractional part is a probability.
  double negative_ratio = 0.5;
  std::uint64_t seed = 13;
};

// Positives: a random n-gram of a sentence, gold = its exact-find labels in
// that sentence. Negatives: the same pattern paired with a sentence that
// does not contain it, gold all zeros. Deterministic under the seed.
std::vector<TrainSample> GeneratePretrainingData(
    std::span<const std::vector<std::string>> corpus,
    const PretrainDataConfig& config);

struct PretrainOptions {
  int epochs = 20;
  double learning_rate = 0.01;
  std::uint64_t seed = 13;
};

// Shuffled SGD epochs over `samples`. Returns the mean loss of each epoch;
// `on_epoch` (if set) sees (epoch, mean loss) as each one finishes.
std::vector<double> Pretrain(
    BilinearScorer* scorer, const EmbeddingTable& table,
    std::span<const TrainSample> samples, const PretrainOptions& options,
    const std::function<void(int, double)>& on_epoch = {});

}  // namespace nre

#endif  // NRE_PRETRAINING_H_
