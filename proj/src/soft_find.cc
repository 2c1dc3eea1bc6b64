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

#include "soft_find.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "error.h"
#include "random.h"

namespace nre {

void BilinearScorer::CheckValid() const {
  if (weights.rows() != weights.cols() || weights.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "W must be square and non-empty");
  }
  if (!weights.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "W has non-finite entries");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold must lie strictly between 0 and 1");
  }
  if (windows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no window sizes");
  }
  for (int w : windows) {
    if (w < 1) throw Error(ErrorCode::kInvalidArgument, "window size below 1");
  }
}

BilinearScorer BilinearScorer::Identity(int dimension,
                                        std::vector<int> windows,
                                        double threshold) {
  BilinearScorer scorer;
  scorer.weights = Eigen::MatrixXd::Identity(dimension, dimension);
  scorer.windows = std::move(windows);
  scorer.threshold = threshold;
  scorer.CheckValid();
  return scorer;
}

BilinearScorer BilinearScorer::NoisyIdentity(int dimension,
                                             std::vector<int> windows,
                                             double threshold, double sigma,
                                             std::uint64_t seed) {
  BilinearScorer scorer = Identity(dimension, std::move(windows), threshold);
  Rng rng(seed);
  for (Eigen::Index r = 0; r < scorer.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < scorer.weights.cols(); ++c) {
      scorer.weights(r, c) += sigma * rng.Normal();
    }
  }
  return scorer;
}

std::vector<ContextWindow> BuildContexts(std::size_t length, std::size_t index,
                                         std::span<const int> windows) {
  std::vector<ContextWindow> out;
  for (int w : windows) {
    if (w == 1) {
      out.push_back({1, index, index + 1});
      continue;
    }
    const auto span = static_cast<std::size_t>(w);
    if (index + 1 >= span) out.push_back({w, index + 1 - span, index + 1});
    if (index + span <= length) out.push_back({w, index, index + span});
  }
  if (out.empty()) out.push_back({1, index, index + 1});
  return out;
}

double Score(const Eigen::VectorXd& context, const Eigen::VectorXd& pattern,
             const Eigen::MatrixXd& weights) {
  if (weights.rows() != context.size() || weights.cols() != pattern.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "W is " + std::to_string(weights.rows()) + "x" +
                    std::to_string(weights.cols()) + ", vectors are " +
                    std::to_string(context.size()) + " and " +
                    std::to_string(pattern.size()));
  }
  return context.dot(weights * pattern);
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

CaseScores ScoreCase(std::span<const std::string> tokens,
                     std::span<const std::string> pattern,
                     const BilinearScorer& scorer, const EmbeddingTable& table,
                     const Eigen::VectorXd* projected) {
  if (pattern.empty()) {
    throw Error(ErrorCode::kEmptyPattern, "find pattern is empty");
  }
  if (scorer.dimension() != table.dimension()) {
    throw Error(ErrorCode::kShapeMismatch,
                "scorer dimension " + std::to_string(scorer.dimension()) +
                    " does not match embedding dimension " +
                    std::to_string(table.dimension()));
  }
  const std::size_t n = tokens.size();
  const int d = table.dimension();
  CaseScores out;
  out.pattern_vector = Encode(pattern, table);
  const Eigen::VectorXd u =
      projected != nullptr ? *projected
                           : Eigen::VectorXd(scorer.weights * out.pattern_vector);

  // Prefix sums of token vectors and of their projections onto u; a context
  // score is then a difference of two prefix values over its length.
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) + 1, d);
  std::vector<double> prefix_dot(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    prefix.row(row + 1) = prefix.row(row);
    double dot = 0.0;
    if (const double* v = table.Lookup(tokens[i])) {
      const Eigen::Map<const Eigen::RowVectorXd> vec(v, d);
      prefix.row(row + 1) += vec;
      dot = vec.dot(u);
    }
    prefix_dot[i + 1] = prefix_dot[i] + dot;
  }

  out.best_contexts.resize(static_cast<Eigen::Index>(n), d);
  out.scores.resize(n);
  out.probabilities.resize(n);
  out.best_context.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto contexts = BuildContexts(n, i, scorer.windows);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t j = 0; j < contexts.size(); ++j) {
      const auto& c = contexts[j];
      const double s = (prefix_dot[c.end] - prefix_dot[c.begin]) /
                       static_cast<double>(c.end - c.begin);
      if (s > best) {
        best = s;
        best_index = j;
      }
    }
    const auto& c = contexts[best_index];
    out.best_contexts.row(static_cast<Eigen::Index>(i)) =
        (prefix.row(static_cast<Eigen::Index>(c.end)) -
         prefix.row(static_cast<Eigen::Index>(c.begin))) /
        static_cast<double>(c.end - c.begin);
    out.scores[i] = best;
    out.probabilities[i] = Sigmoid(best);
    out.best_context[i] = best_index;
  }
  return out;
}

LabelSeq LabelTokens(std::span<const std::string> tokens,
                     std::span<const std::string> pattern,
                     const BilinearScorer& scorer, const EmbeddingTable& table,
                     Polarity polarity, bool keep_probabilities) {
  const CaseScores scores = ScoreCase(tokens, pattern, scorer, table);
  std::vector<int> decisions(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    decisions[i] = scores.probabilities[i] >= scorer.threshold ? 1 : 0;
  }
  LabelSeq seq = LabelSeq::FromDecisions(decisions, polarity, pattern.size());
  seq.probabilities = scores.probabilities;
  if (keep_probabilities) {
    seq.values = scores.probabilities;
    seq.binary = false;
  }
  return seq;
}

SoftFindProvider::SoftFindProvider(const EmbeddingTable& table,
                                   const BilinearScorer& positive,
                                   const BilinearScorer& negative)
    : table_(table), positive_(positive), negative_(negative) {
  positive_.CheckValid();
  negative_.CheckValid();
}

LabelSeq SoftFindProvider::Find(std::span<const std::string> tokens,
                                std::span<const std::string> pattern,
                                Polarity polarity) const {
  const BilinearScorer& scorer =
      polarity == Polarity::kPositive ? positive_ : negative_;
  Eigen::VectorXd projected;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(static_cast<int>(polarity),
                              std::vector<std::string>(pattern.begin(),
                                                       pattern.end()));
    auto it = projected_.find(key);
    if (it == projected_.end()) {
      it = projected_
               .emplace(std::move(key),
                        Eigen::VectorXd(scorer.weights * Encode(pattern, table_)))
               .first;
    }
    projected = it->second;
  }
  const CaseScores scores =
      ScoreCase(tokens, pattern, scorer, table_, &projected);
  std::vector<int> decisions(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    decisions[i] = scores.probabilities[i] >= scorer.threshold ? 1 : 0;
  }
  LabelSeq seq = LabelSeq::FromDecisions(decisions, polarity, pattern.size());
  seq.probabilities = scores.probabilities;
  return seq;
}

namespace {

void CheckSample(const TrainSample& sample) {
  if (sample.gold.size() != sample.tokens.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "gold labels do not match the case length");
  }
}

double LossFromScores(const CaseScores& scores, const TrainSample& sample) {
  double loss = 0.0;
  for (std::size_t i = 0; i < sample.tokens.size(); ++i) {
    loss += Softplus(scores.scores[i]) - sample.gold[i] * scores.scores[i];
  }
  return loss;
}

}  // namespace

double SampleLoss(const BilinearScorer& scorer, const EmbeddingTable& table,
                  const TrainSample& sample) {
  CheckSample(sample);
  return LossFromScores(
      ScoreCase(sample.tokens, sample.pattern, scorer, table), sample);
}

Eigen::MatrixXd LossGradient(const BilinearScorer& scorer,
                             const EmbeddingTable& table,
                             const TrainSample& sample, double* loss) {
  CheckSample(sample);
  const CaseScores scores =
      ScoreCase(sample.tokens, sample.pattern, scorer, table);
  // dL/ds_i = p_i - g_i and ds_i/dW = c_i v_p^T, so the gradient is the
  // rank-one product (sum_i (p_i - g_i) c_i) v_p^T.
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(table.dimension());
  for (std::size_t i = 0; i < sample.tokens.size(); ++i) {
    const double residual = scores.probabilities[i] - sample.gold[i];
    weighted +=
        residual * scores.best_contexts.row(static_cast<Eigen::Index>(i)).transpose();
  }
  if (loss != nullptr) *loss = LossFromScores(scores, sample);
  return weighted * scores.pattern_vector.transpose();
}

double TrainStep(BilinearScorer* scorer, const EmbeddingTable& table,
                 const TrainSample& sample, double learning_rate) {
  if (learning_rate < 0) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  }
  double loss = 0.0;
  const Eigen::MatrixXd grad = LossGradient(*scorer, table, sample, &loss);
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kNonFiniteLoss, "training loss is not finite");
  }
  if (!grad.allFinite()) {
    throw Error(ErrorCode::kNonFiniteGradient, "training gradient is not finite");
  }
  if (learning_rate > 0) scorer->weights -= learning_rate * grad;
  return loss;
}

double GradCheck(const BilinearScorer& scorer, const EmbeddingTable& table,
                 const TrainSample& sample, double h, std::uint64_t seed,
                 std::size_t min_entries) {
  if (!(h > 0)) throw Error(ErrorCode::kInvalidArgument, "step must be > 0");
  const Eigen::MatrixXd analytic = LossGradient(scorer, table, sample, nullptr);
  const auto d = static_cast<std::size_t>(scorer.dimension());
  std::vector<std::size_t> entries(d * d);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = k;
  Rng rng(seed);
  rng.Shuffle(entries);
  if (entries.size() > min_entries) entries.resize(min_entries);

  BilinearScorer probe = scorer;
  double worst = 0.0;
  for (std::size_t k : entries) {
    const auto r = static_cast<Eigen::Index>(k / d);
    const auto c = static_cast<Eigen::Index>(k % d);
    const double saved = probe.weights(r, c);
    probe.weights(r, c) = saved + h;
    const double up = SampleLoss(probe, table, sample);
    probe.weights(r, c) = saved - h;
    const double down = SampleLoss(probe, table, sample);
    probe.weights(r, c) = saved;
    const double numeric = (up - down) / (2 * h);
    const double a = analytic(r, c);
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

void WriteCheckpoint(std::ostream& out,
                     const std::map<std::string, BilinearScorer>& scorers) {
  char buf[32];
  out << "nre-scorer-checkpoint 1\n";
  for (const auto& [name, scorer] : scorers) {
    out << "scorer " << name << '\n';
    out << "dimension " << scorer.dimension() << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", scorer.threshold);
    out << "threshold " << buf << '\n';
    out << "windows";
    for (int w : scorer.windows) out << ' ' << w;
    out << '\n';
    for (Eigen::Index r = 0; r < scorer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < scorer.weights.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", scorer.weights(r, c));
        if (c > 0) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  }
}

std::map<std::string, BilinearScorer> ReadCheckpoint(std::istream& in,
                                                     const std::string& name) {
  // Non-blank lines with their 1-based line numbers.
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) {
      lines.emplace_back(no, line);
    }
  }
  std::size_t cursor = 0;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kBadCheckpoint,
                name + ":" + std::to_string(line_no) + ": " + what, line_no);
  };
  auto next = [&](const char* key) {
    if (cursor >= lines.size()) fail("unexpected end of file");
    line_no = lines[cursor].first;
    std::istringstream ls(lines[cursor++].second);
    if (key != nullptr) {
      std::string word;
      if (!(ls >> word) || word != key) fail(std::string("expected '") + key + "'");
    }
    return ls;
  };

  {
    auto ls = next("nre-scorer-checkpoint");
    int version = 0;
    if (!(ls >> version) || version != 1) fail("unsupported checkpoint version");
  }
  std::map<std::string, BilinearScorer> scorers;
  while (cursor < lines.size()) {
    std::string scorer_name;
    if (!(next("scorer") >> scorer_name)) fail("missing scorer name");
    BilinearScorer scorer;
    int dim = 0;
    if (!(next("dimension") >> dim) || dim <= 0) fail("bad dimension");
    if (!(next("threshold") >> scorer.threshold)) fail("bad threshold");
    auto ws = next("windows");
    scorer.windows.clear();
    for (int w; ws >> w;) scorer.windows.push_back(w);
    scorer.weights.resize(dim, dim);
    for (int r = 0; r < dim; ++r) {
      auto ls = next(nullptr);
      for (int c = 0; c < dim; ++c) {
        std::string field;
        if (!(ls >> field)) fail("short row");
        char* end = nullptr;
        scorer.weights(r, c) = std::strtod(field.c_str(), &end);
        if (end != field.c_str() + field.size()) fail("bad number '" + field + "'");
      }
      std::string extra;
      if (ls >> extra) fail("long row");
    }
    try {
      scorer.CheckValid();
    } catch (const Error& e) {
      fail(e.what());
    }
    scorers[scorer_name] = std::move(scorer);
  }
  if (scorers.empty()) fail("no scorers");
  return scorers;
}

}  // namespace nre
