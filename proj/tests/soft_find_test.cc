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
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "error.h"
#include "layout.h"
#include "pretraining.h"
#include "random.h"
#include "rl_finetune.h"
#include "rule_dialect.h"
#include "soft_find.h"

namespace nre {
namespace {

using Toks = std::vector<std::string>;

EmbeddingTable OneHot(const Toks& tokens) {
  const auto n = static_cast<Eigen::Index>(tokens.size());
  return EmbeddingTable(tokens, EmbeddingTable::Matrix::Identity(n, n));
}

EmbeddingTable RandomTable(int vocab, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Toks tokens;
  EmbeddingTable::Matrix m(vocab, dim);
  for (int i = 0; i < vocab; ++i) {
    tokens.push_back("t" + std::to_string(i));
    for (int j = 0; j < dim; ++j) m(i, j) = rng.Normal() / std::sqrt(dim);
  }
  return EmbeddingTable(tokens, m);
}

TEST(EmbeddingsTest, ReadsMinimalFile) {
  std::istringstream in("2 3\na 1 0 0\nb 0 1 0\n");
  const EmbeddingTable t = ReadEmbeddings(in);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dimension(), 3);
  EXPECT_EQ(t.Vector("b"), Eigen::Vector3d(0, 1, 0));
  EXPECT_EQ(t.Lookup("zzz"), nullptr);
}

TEST(EmbeddingsTest, Errors) {
  auto code = [](const std::string& text) {
    std::istringstream in(text);
    try {
      ReadEmbeddings(in);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code("2 3\na 1 0\nb 0 1 0\n"), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code("2 3\na 1 0 0 4\n"), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code("2 3\na 1 x 0\n"), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code("hello\n"), ErrorCode::kBadHeader);
  EXPECT_EQ(code("0 3\n"), ErrorCode::kEmptyTable);
}

TEST(EmbeddingsTest, DuplicateKeepsFirst) {
  std::istringstream in("2 2\na 1 0\na 0 1\n");
  const EmbeddingTable t = ReadEmbeddings(in);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.Vector("a"), Eigen::Vector2d(1, 0));
}

TEST(EmbeddingsTest, WriteReadIsBitExact) {
  const EmbeddingTable t = RandomTable(10, 7, 3);
  std::stringstream buf;
  WriteEmbeddings(t, buf);
  const EmbeddingTable back = ReadEmbeddings(buf);
  ASSERT_EQ(back.size(), 10u);
  for (const auto& tok : t.tokens()) {
    for (int j = 0; j < 7; ++j) {
      EXPECT_EQ(back.Lookup(tok)[j], t.Lookup(tok)[j]);
    }
  }
}

TEST(EncodeTest, MeanWithZeroOov) {
  std::istringstream in("2 2\na 1 0\nb 0 1\n");
  const EmbeddingTable t = ReadEmbeddings(in);
  EXPECT_EQ(Encode(Toks{"a"}, t), Eigen::Vector2d(1, 0));
  EXPECT_EQ(Encode(Toks{"a", "b"}, t), Eigen::Vector2d(0.5, 0.5));
  EXPECT_EQ(Encode(Toks{"oov"}, t), Eigen::Vector2d(0, 0));
  EXPECT_EQ(Encode(Toks{"a", "oov"}, t), Eigen::Vector2d(0.5, 0));
}

TEST(ScoreTest, Examples) {
  EXPECT_EQ(Score(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0),
                  Eigen::Matrix2d::Identity()),
            1.0);
  Eigen::Matrix2d w;
  w << 1, 0, 0, 2;
  EXPECT_EQ(Score(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1), w), 3.0);
  EXPECT_EQ(Score(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, -1), w), 0.0);
  EXPECT_THROW(Score(Eigen::Vector3d(1, 0, 0), Eigen::Vector2d(1, 0), w),
               Error);
}

TEST(ScoreTest, Bilinear) {
  Rng rng(5);
  Eigen::MatrixXd w(4, 4);
  Eigen::VectorXd u(4), v(4);
  for (int i = 0; i < 4; ++i) {
    u(i) = rng.Normal();
    v(i) = rng.Normal();
    for (int j = 0; j < 4; ++j) w(i, j) = rng.Normal();
  }
  const double a = 2.5;
  EXPECT_NEAR(Score(a * u, v, w), a * Score(u, v, w), 1e-12);
  EXPECT_NEAR(Score(u, a * v, w), a * Score(u, v, w), 1e-12);
}

TEST(ContextTest, WindowsAndBoundaries) {
  const std::vector<int> windows = {1, 2, 3};
  EXPECT_EQ(BuildContexts(5, 2, windows),
            (std::vector<ContextWindow>{{1, 2, 3}, {2, 1, 3}, {2, 2, 4},
                                        {3, 0, 3}, {3, 2, 5}}));
  EXPECT_EQ(BuildContexts(5, 0, windows),
            (std::vector<ContextWindow>{{1, 0, 1}, {2, 0, 2}, {3, 0, 3}}));
  const std::vector<int> wide = {4};
  EXPECT_EQ(BuildContexts(2, 1, wide),
            (std::vector<ContextWindow>{{1, 1, 2}}));
}

TEST(LabelTokensTest, DegeneratesToExactFind) {
  const Toks vocab = {"a", "b", "c", "d"};
  const EmbeddingTable t = OneHot(vocab);
  const BilinearScorer s = BilinearScorer::Identity(4, {1}, 0.7);
  const Toks c = {"a", "b", "a", "d", "c"};
  for (const auto& p : vocab) {
    const LabelSeq soft = LabelTokens(c, Toks{p}, s, t, Polarity::kPositive);
    const LabelSeq exact = FindExact(c, Toks{p});
    EXPECT_EQ(soft.values, exact.values) << p;
    EXPECT_EQ(soft.spans, exact.spans) << p;
  }
  const LabelSeq probs =
      LabelTokens(c, Toks{"a"}, s, t, Polarity::kPositive, true);
  EXPECT_FALSE(probs.binary);
  EXPECT_NEAR(probs.values[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_EQ(probs.values[1], 0.5);
}

TEST(LabelTokensTest, OovPatternGivesHalf) {
  const EmbeddingTable t = OneHot({"a", "b"});
  const BilinearScorer s = BilinearScorer::Identity(2, {1, 2}, 0.6);
  const Toks c = {"a", "b", "a"};
  const CaseScores sc = ScoreCase(c, Toks{"zz"}, s, t);
  for (double p : sc.probabilities) EXPECT_EQ(p, 0.5);
  EXPECT_EQ(LabelTokens(c, Toks{"zz"}, s, t, Polarity::kPositive).Sum(), 0.0);
}

TEST(LabelTokensTest, EmptyPatternThrows) {
  const EmbeddingTable t = OneHot({"a"});
  const BilinearScorer s = BilinearScorer::Identity(1, {1}, 0.6);
  try {
    LabelTokens(Toks{"a"}, Toks{}, s, t, Polarity::kPositive);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPattern);
  }
}

TEST(LabelTokensTest, TiesGoToLowestContext) {
  const EmbeddingTable t = OneHot({"a", "b"});
  const BilinearScorer s = BilinearScorer::Identity(2, {1, 2}, 0.6);
  const CaseScores sc = ScoreCase(Toks{"b", "b", "b"}, Toks{"a"}, s, t);
  for (std::size_t i : sc.best_context) EXPECT_EQ(i, 0u);
}

TEST(LabelTokensTest, HigherThresholdNeverAddsLabels) {
  const EmbeddingTable t = RandomTable(12, 6, 9);
  BilinearScorer s = BilinearScorer::NoisyIdentity(6, {1, 2, 3}, 0.55, 0.5, 1);
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    Toks c;
    for (int i = 0; i < 15; ++i) c.push_back(t.tokens()[rng.Uniform(12)]);
    const Toks p = {t.tokens()[rng.Uniform(12)]};
    s.threshold = 0.55;
    const LabelSeq low = LabelTokens(c, p, s, t, Polarity::kPositive);
    s.threshold = 0.65;
    const LabelSeq high = LabelTokens(c, p, s, t, Polarity::kPositive);
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_LE(high.values[i], low.values[i]);
    }
  }
}

TEST(TrainStepTest, ScalarGradientMatchesHandCalculus) {
  std::istringstream in("2 1\na 0.8\nb -0.5\n");
  const EmbeddingTable t = ReadEmbeddings(in);
  BilinearScorer s = BilinearScorer::Identity(1, {1}, 0.6);
  s.weights(0, 0) = 1.3;
  const TrainSample sample{{"a", "b"}, {"a"}, {1, 0}};
  // s_i = w * v_i * v_p; dL/dw = sum_i (p_i - g_i) v_i v_p.
  const double vp = 0.8;
  double expect = 0.0;
  double loss = 0.0;
  const double vs[] = {0.8, -0.5};
  const int gold[] = {1, 0};
  for (int i = 0; i < 2; ++i) {
    const double z = 1.3 * vs[i] * vp;
    const double p = 1.0 / (1.0 + std::exp(-z));
    expect += (p - gold[i]) * vs[i] * vp;
    loss += std::log1p(std::exp(z)) - gold[i] * z;
  }
  double got_loss = 0.0;
  const Eigen::MatrixXd g = LossGradient(s, t, sample, &got_loss);
  EXPECT_NEAR(g(0, 0), expect, 1e-12);
  EXPECT_NEAR(got_loss, loss, 1e-12);
  EXPECT_LE(GradCheck(s, t, sample, 1e-5, 1), 1e-6);

  const double before = TrainStep(&s, t, sample, 0.1);
  EXPECT_NEAR(before, loss, 1e-12);
  EXPECT_NEAR(s.weights(0, 0), 1.3 - 0.1 * expect, 1e-12);
}

TEST(TrainStepTest, ZeroLearningRateKeepsWeights) {
  const EmbeddingTable t = RandomTable(8, 5, 4);
  BilinearScorer s = BilinearScorer::NoisyIdentity(5, {1, 2, 3}, 0.6, 0.2, 3);
  const Eigen::MatrixXd before = s.weights;
  const TrainSample sample{{"t1", "t2", "t3"}, {"t2"}, {0, 1, 0}};
  TrainStep(&s, t, sample, 0.0);
  EXPECT_TRUE((s.weights.array() == before.array()).all());
  EXPECT_THROW(TrainStep(&s, t, sample, -1.0), Error);
}

TEST(TrainStepTest, SaturatedCorrectSampleHasTinyLoss) {
  const EmbeddingTable t = OneHot({"a", "b"});
  BilinearScorer s = BilinearScorer::Identity(2, {1}, 0.6);
  s.weights *= 40.0;
  s.weights(1, 0) = -40.0;
  const TrainSample sample{{"a", "b"}, {"a"}, {1, 0}};
  EXPECT_LT(SampleLoss(s, t, sample), 1e-12);
  EXPECT_LE(GradCheck(s, t, sample, 1e-5, 7), 1e-4);
}

TEST(TrainStepTest, DivergenceIsReported) {
  EmbeddingTable::Matrix m(2, 2);
  m << 1e200, 0, 0, 1;
  const EmbeddingTable t({"a", "b"}, m);
  BilinearScorer s = BilinearScorer::Identity(2, {1}, 0.6);
  const TrainSample sample{{"a", "b"}, {"a"}, {0, 0}};
  try {
    TrainStep(&s, t, sample, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLoss);
  }
}

TEST(TrainStepTest, TrainingLowersLoss) {
  const EmbeddingTable t = RandomTable(10, 6, 11);
  BilinearScorer s = BilinearScorer::NoisyIdentity(6, {1, 2}, 0.6, 0.01, 5);
  const TrainSample sample{{"t1", "t2", "t3", "t4"}, {"t3"}, {0, 0, 1, 0}};
  const double first = SampleLoss(s, t, sample);
  for (int i = 0; i < 50; ++i) TrainStep(&s, t, sample, 0.5);
  EXPECT_LT(SampleLoss(s, t, sample), first);
}

TEST(GradCheckTest, RandomDraws) {
  Rng rng(21);
  for (int draw = 0; draw < 20; ++draw) {
    const EmbeddingTable t = RandomTable(15, 8, rng.NextU64());
    const BilinearScorer s =
        BilinearScorer::NoisyIdentity(8, {1, 2, 3}, 0.6, 0.3, rng.NextU64());
    TrainSample sample;
    for (int i = 0; i < 9; ++i) sample.tokens.push_back(t.tokens()[rng.Uniform(15)]);
    sample.pattern = {sample.tokens[3], sample.tokens[4]};
    for (double v : FindExact(sample.tokens, sample.pattern).values) {
      sample.gold.push_back(v >= 0.5 ? 1 : 0);
    }
    EXPECT_LE(GradCheck(s, t, sample, 1e-5, rng.NextU64()), 1e-4);
  }
}

TEST(CheckpointTest, RoundTrip) {
  std::map<std::string, BilinearScorer> in;
  in["positive"] = BilinearScorer::NoisyIdentity(3, {1, 2, 3}, 0.6, 0.1, 1);
  in["negative"] = BilinearScorer::NoisyIdentity(3, {1, 2}, 0.65, 0.1, 2);
  std::stringstream buf;
  WriteCheckpoint(buf, in);
  const auto out = ReadCheckpoint(buf);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& [name, s] : in) {
    const BilinearScorer& back = out.at(name);
    EXPECT_EQ(back.threshold, s.threshold);
    EXPECT_EQ(back.windows, s.windows);
    EXPECT_TRUE((back.weights.array() == s.weights.array()).all());
  }
}

TEST(CheckpointTest, RejectsGarbage) {
  std::istringstream in("nre-scorer-checkpoint 1\nscorer p\ndimension 2\n");
  try {
    ReadCheckpoint(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadCheckpoint);
  }
}

TEST(PretrainingDataTest, PositiveMatchesOneOfTwoBigrams) {
  const std::vector<Toks> corpus = {{"a", "b", "c"}};
  PretrainDataConfig cfg;
  cfg.ngram_lengths = {2};
  cfg.samples_per_sentence = 1;
  cfg.negative_ratio = 0;
  const auto samples = GeneratePretrainingData(corpus, cfg);
  ASSERT_EQ(samples.size(), 1u);
  const auto& s = samples[0];
  const bool ab = s.pattern == Toks{"a", "b"} &&
                  s.gold == std::vector<int>{1, 1, 0};
  const bool bc = s.pattern == Toks{"b", "c"} &&
                  s.gold == std::vector<int>{0, 1, 1};
  EXPECT_TRUE(ab || bc);
}

TEST(PretrainingDataTest, DeterministicAndConsistent) {
  Rng rng(1);
  std::vector<Toks> corpus;
  for (int i = 0; i < 30; ++i) {
    Toks s;
    for (int j = 0; j < 12; ++j) s.push_back("w" + std::to_string(rng.Uniform(20)));
    corpus.push_back(s);
  }
  PretrainDataConfig cfg;
  cfg.negative_ratio = 0.7;
  const auto a = GeneratePretrainingData(corpus, cfg);
  const auto b = GeneratePretrainingData(corpus, cfg);
  ASSERT_EQ(a.size(), b.size());
  bool saw_negative = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].tokens, b[i].tokens);
    EXPECT_EQ(a[i].pattern, b[i].pattern);
    EXPECT_EQ(a[i].gold, b[i].gold);
    std::vector<int> exact;
    for (double v : FindExact(a[i].tokens, a[i].pattern).values) {
      exact.push_back(v >= 0.5 ? 1 : 0);
    }
    EXPECT_EQ(a[i].gold, exact);
    int sum = 0;
    for (int g : a[i].gold) sum += g;
    saw_negative = saw_negative || sum == 0;
  }
  EXPECT_TRUE(saw_negative);
  cfg.negative_ratio = 0;
  for (const auto& s : GeneratePretrainingData(corpus, cfg)) {
    int sum = 0;
    for (int g : s.gold) sum += g;
    EXPECT_GT(sum, 0);
  }
}

TEST(PretrainingDataTest, EmptyCorpusThrows) {
  EXPECT_THROW(GeneratePretrainingData({}, PretrainDataConfig{}), Error);
}

struct RlFixture {
  RlFixture() : table(OneHot({"a", "b", "c"})) {
    program = Linearize(
        ParseRule({"L/1", "L", "a"}, Tokenizer(TokenizerMode::kWhitespace)));
  }
  EmbeddingTable table;
  RpnProgram program;
};

TEST(RlFinetuneTest, PositiveRewardRaisesSampledProbabilities) {
  RlFixture f;
  BilinearScorer pos = BilinearScorer::Identity(3, {1}, 0.6);
  BilinearScorer neg = pos;
  const std::vector<RuleProgram> rules = {{&f.program, "L"}};
  const Toks c = {"a"};
  const double before = ScoreCase(c, Toks{"a"}, pos, f.table).probabilities[0];
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BilinearScorer trial = pos;
    Rng rng(seed);
    const double r = RlFinetuneStep(rules, c, {"L"}, &trial, &neg, f.table,
                                    0.1, rng, RewardMode::kCase);
    if (r > 0) {
      EXPECT_GT(ScoreCase(c, Toks{"a"}, trial, f.table).probabilities[0],
                before);
      return;
    }
  }
  FAIL() << "no rewarded sample";
}

TEST(RlFinetuneTest, DegenerateProbabilitiesGiveZeroGradient) {
  RlFixture f;
  BilinearScorer pos = BilinearScorer::Identity(3, {1}, 0.6);
  pos.weights *= 1e4;
  pos.weights(1, 0) = -1e4;
  pos.weights(2, 0) = -1e4;
  BilinearScorer neg = pos;
  const Eigen::MatrixXd before = pos.weights;
  const std::vector<RuleProgram> rules = {{&f.program, "L"}};
  Rng rng(3);
  RlFinetuneStep(rules, Toks{"a", "b", "c"}, {"L"}, &pos, &neg, f.table, 0.5,
                 rng, RewardMode::kCase);
  EXPECT_TRUE((pos.weights.array() == before.array()).all());
}

TEST(RlFinetuneTest, FalsePositivePunishesFiringTokens) {
  RlFixture f;
  BilinearScorer pos = BilinearScorer::Identity(3, {1}, 0.6);
  BilinearScorer neg = pos;
  const std::vector<RuleProgram> rules = {{&f.program, "L"}};
  const Toks c = {"a"};
  const double before = ScoreCase(c, Toks{"a"}, pos, f.table).probabilities[0];
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BilinearScorer trial = pos;
    Rng rng(seed);
    const double r = RlFinetuneStep(rules, c, {}, &trial, &neg, f.table, 0.1,
                                    rng, RewardMode::kCase);
    if (r < 0) {
      EXPECT_LT(ScoreCase(c, Toks{"a"}, trial, f.table).probabilities[0],
                before);
      return;
    }
  }
  FAIL() << "no punished sample";
}

}  // namespace
}  // namespace nre
