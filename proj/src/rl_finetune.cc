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

#include "rl_finetune.h"

#include <algorithm>
#include <map>

#include "error.h"

namespace nre {

namespace {

// Score-function term of one Find instruction: the gradient of the log
// probability of its sampled labels is (sum_i (b_i - p_i) c_i) v_p^T.
struct SampledFind {
  Polarity polarity;
  Eigen::VectorXd weighted_contexts;
  Eigen::VectorXd pattern_vector;
};

class SamplingFindProvider : public FindProvider {
 public:
  SamplingFindProvider(const EmbeddingTable& table,
                       const BilinearScorer& positive,
                       const BilinearScorer& negative, Rng* rng,
                       std::vector<SampledFind>* sink)
      : table_(table),
        positive_(positive),
        negative_(negative),
        rng_(rng),
        sink_(sink) {}

  LabelSeq Find(std::span<const std::string> tokens,
                std::span<const std::string> pattern,
                Polarity polarity) const override {
    const BilinearScorer& scorer =
        polarity == Polarity::kPositive ? positive_ : negative_;
    const CaseScores scores = ScoreCase(tokens, pattern, scorer, table_);
    std::vector<int> decisions(tokens.size());
    SampledFind sampled{polarity, Eigen::VectorXd::Zero(table_.dimension()),
                        scores.pattern_vector};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const double p = scores.probabilities[i];
      decisions[i] = rng_->Bernoulli(p) ? 1 : 0;
      sampled.weighted_contexts +=
          (decisions[i] - p) *
          scores.best_contexts.row(static_cast<Eigen::Index>(i)).transpose();
    }
    sink_->push_back(std::move(sampled));
    LabelSeq seq = LabelSeq::FromDecisions(decisions, polarity, pattern.size());
    seq.probabilities = scores.probabilities;
    return seq;
  }

 private:
  const EmbeddingTable& table_;
  const BilinearScorer& positive_;
  const BilinearScorer& negative_;
  Rng* rng_;
  std::vector<SampledFind>* sink_;
};

}  // namespace

double RlFinetuneStep(std::span<const RuleProgram> rules,
                      std::span<const std::string> tokens,
                      const std::set<std::string>& gold,
                      BilinearScorer* positive, BilinearScorer* negative,
                      const EmbeddingTable& table, double learning_rate,
                      Rng& rng, RewardMode mode) {
  if (rules.empty()) return 0.0;
  if (learning_rate < 0) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  }
  std::vector<std::vector<SampledFind>> per_rule(rules.size());
  std::vector<bool> fired(rules.size(), false);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    SamplingFindProvider provider(table, *positive, *negative, &rng,
                                  &per_rule[r]);
    fired[r] = Execute(*rules[r].program, tokens, provider).matched;
  }

  std::map<std::string, bool> predicted;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    predicted[rules[r].label] = predicted[rules[r].label] || fired[r];
  }
  std::set<std::string> predicted_set;
  for (const auto& [label, on] : predicted) {
    if (on) predicted_set.insert(label);
  }

  std::vector<double> rewards(rules.size());
  if (mode == RewardMode::kCase) {
    const double r = predicted_set == gold ? 1.0 : -1.0;
    std::fill(rewards.begin(), rewards.end(), r);
  } else {
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const bool want = gold.count(rules[r].label) > 0;
      rewards[r] = predicted[rules[r].label] == want ? 1.0 : -1.0;
    }
  }

  const int d = table.dimension();
  Eigen::MatrixXd grad_positive = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd grad_negative = Eigen::MatrixXd::Zero(d, d);
  const bool shared = positive == negative;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (const auto& find : per_rule[r]) {
      Eigen::MatrixXd& grad =
          (find.polarity == Polarity::kPositive || shared) ? grad_positive
                                                           : grad_negative;
      grad.noalias() +=
          rewards[r] * find.weighted_contexts * find.pattern_vector.transpose();
    }
  }
  if (!grad_positive.allFinite() || !grad_negative.allFinite()) {
    throw Error(ErrorCode::kNonFiniteGradient,
                "policy gradient is not finite");
  }
  positive->weights += learning_rate * grad_positive;
  if (!shared) negative->weights += learning_rate * grad_negative;

  double mean = 0.0;
  for (double r : rewards) mean += r;
  return mean / static_cast<double>(rewards.size());
}

}  // namespace nre
