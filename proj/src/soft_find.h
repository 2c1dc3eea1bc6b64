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

#ifndef NRE_SOFT_FIND_H_
#define NRE_SOFT_FIND_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "embeddings.h"
#include "label_algebra.h"
#include "layout.h"

namespace nre {

// Scores a context against a pattern as context^T * W * pattern and labels
// a token when sigmoid(best context score) >= threshold.
struct BilinearScorer {
  Eigen::MatrixXd weights;
  double threshold = 0.6;
  std::vector<int> windows = {1, 2, 3};

  int dimension() const { return static_cast<int>(weights.rows()); }

  // Throws InvalidArgument if W is not square and finite, the threshold is
  // outside (0, 1) or a window size is below 1.
  void CheckValid() const;

  static BilinearScorer Identity(int dimension, std::vector<int> windows,
                                 double threshold);
  // Identity plus N(0, sigma^2) noise on every entry.
  static BilinearScorer NoisyIdentity(int dimension, std::vector<int> windows,
                                      double threshold, double sigma,
                                      std::uint64_t seed);
};

// A context of token i: the half-open token range [begin, end).
struct ContextWindow {
  int window = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const ContextWindow&) const = default;
};

// Window 1 is the token itself; each window w >= 2 gives the left context
// (i-w+1 .. i) and the right context (i .. i+w-1), in that order. Windows
// that would cross a boundary are omitted. If nothing is left the token
// itself is used.
std::vector<ContextWindow> BuildContexts(std::size_t length, std::size_t index,
                                         std::span<const int> windows);

double Score(const Eigen::VectorXd& context, const Eigen::VectorXd& pattern,
             const Eigen::MatrixXd& weights);

double Sigmoid(double x);

// Per-token results of scoring one pattern against one case.
struct CaseScores {
  Eigen::VectorXd pattern_vector;
  // Encoded winning context of each token, one row per token.
  Eigen::MatrixXd best_contexts;
  std::vector<double> scores;
  std::vector<double> probabilities;
  // Index into BuildContexts() of the winning context; ties go to the
  // lowest index.
  std::vector<std::size_t> best_context;
};

// `projected`, when given, must equal W * Encode(pattern).
CaseScores ScoreCase(std::span<const std::string> tokens,
                     std::span<const std::string> pattern,
                     const BilinearScorer& scorer, const EmbeddingTable& table,
                     const Eigen::VectorXd* projected = nullptr);

// Soft Find: value_i = 1 iff p_i >= threshold. With keep_probabilities the
// returned sequence is non-binary and holds p_i in `values`.
LabelSeq LabelTokens(std::span<const std::string> tokens,
                     std::span<const std::string> pattern,
                     const BilinearScorer& scorer, const EmbeddingTable& table,
                     Polarity polarity, bool keep_probabilities = false);

// Find provider backed by one scorer per polarity (possibly the same one).
// Caches W * v_p per pattern, so the scorers must not change while the
// provider is alive.
class SoftFindProvider : public FindProvider {
 public:
  SoftFindProvider(const EmbeddingTable& table, const BilinearScorer& positive,
                   const BilinearScorer& negative);

  LabelSeq Find(std::span<const std::string> tokens,
                std::span<const std::string> pattern,
                Polarity polarity) const override;

 private:
  const EmbeddingTable& table_;
  const BilinearScorer& positive_;
  const BilinearScorer& negative_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, std::vector<std::string>>, Eigen::VectorXd>
      projected_;
};

struct TrainSample {
  std::vector<std::string> tokens;
  std::vector<std::string> pattern;
  std::vector<int> gold;
};

// Sum over tokens of binary cross-entropy between p_i and gold_i.
double SampleLoss(const BilinearScorer& scorer, const EmbeddingTable& table,
                  const TrainSample& sample);

// dL/dW; the max over contexts passes gradient only to the winning context.
Eigen::MatrixXd LossGradient(const BilinearScorer& scorer,
                             const EmbeddingTable& table,
                             const TrainSample& sample, double* loss);

// One gradient-descent step. Returns the loss before the update.
double TrainStep(BilinearScorer* scorer, const EmbeddingTable& table,
                 const TrainSample& sample, double learning_rate);

// Largest relative error between LossGradient and central differences with
// step h, over a random subset of at least 20 entries of W (all entries
// when W has fewer).
double GradCheck(const BilinearScorer& scorer, const EmbeddingTable& table,
                 const TrainSample& sample, double h, std::uint64_t seed,
                 std::size_t min_entries = 20);

// Checkpoint text format:
//   nre-scorer-checkpoint 1
//   scorer <name>
//   dimension <d>
//   threshold <theta>
//   windows <w1> <w2> ...
//   <d rows of W, row-major>
// repeated per scorer.
void WriteCheckpoint(std::ostream& out,
                     const std::map<std::string, BilinearScorer>& scorers);
std::map<std::string, BilinearScorer> ReadCheckpoint(
    std::istream& in, const std::string& name = "<checkpoint>");

}  // namespace nre

#endif  // NRE_SOFT_FIND_H_
