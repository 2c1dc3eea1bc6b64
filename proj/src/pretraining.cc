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

#include "pretraining.h"

#include <algorithm>
#include <cmath>

#include "error.h"
#include "label_algebra.h"
#include "random.h"

namespace nre {

namespace {

std::vector<int> Decisions(const LabelSeq& seq) {
  std::vector<int> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq.values[i] >= 0.5;
  return out;
}

}  // namespace

std::vector<TrainSample> GeneratePretrainingData(
    std::span<const std::vector<std::string>> corpus,
    const PretrainDataConfig& config) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no sentences to sample from");
  }
  if (config.ngram_lengths.empty() || config.negative_ratio < 0 ||
      config.samples_per_sentence < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad pretraining data config");
  }
  for (int n : config.ngram_lengths) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n-gram length below 1");
  }
  Rng rng(config.seed);
  std::vector<TrainSample> samples;
  const double whole = std::floor(config.negative_ratio);
  const double fraction = config.negative_ratio - whole;
  constexpr int kNegativeAttempts = 8;

  for (const auto& sentence : corpus) {
    if (sentence.empty()) continue;
    for (int k = 0; k < config.samples_per_sentence; ++k) {
      auto n = static_cast<std::size_t>(
          config.ngram_lengths[rng.Uniform(config.ngram_lengths.size())]);
      n = std::min(n, sentence.size());
      const std::size_t start = rng.Uniform(sentence.size() - n + 1);
      TrainSample positive;
      positive.tokens = sentence;
      positive.pattern.assign(sentence.begin() + start,
                              sentence.begin() + start + n);
      positive.gold = Decisions(FindExact(sentence, positive.pattern));
      const std::vector<std::string> pattern = positive.pattern;
      samples.push_back(std::move(positive));

      int negatives = static_cast<int>(whole);
      if (fraction > 0 && rng.UniformReal() < fraction) ++negatives;
      for (int m = 0; m < negatives; ++m) {
        for (int attempt = 0; attempt < kNegativeAttempts; ++attempt) {
          const auto& other = corpus[rng.Uniform(corpus.size())];
          if (other.empty() || !FindExact(other, pattern).spans.empty()) {
            continue;
          }
          samples.push_back({other, pattern, std::vector<int>(other.size(), 0)});
          break;
        }
      }
    }
  }
  return samples;
}

std::vector<double> Pretrain(BilinearScorer* scorer,
                             const EmbeddingTable& table,
                             std::span<const TrainSample> samples,
                             const PretrainOptions& options,
                             const std::function<void(int, double)>& on_epoch) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no pretraining samples");
  }
  Rng rng(options.seed);
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> losses;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    rng.Shuffle(order);
    double total = 0.0;
    for (std::size_t i : order) {
      total += TrainStep(scorer, table, samples[i], options.learning_rate);
    }
    const double mean = total / static_cast<double>(samples.size());
    losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return losses;
}

}  // namespace nre
