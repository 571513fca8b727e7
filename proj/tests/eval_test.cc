#include "plsv/eval.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "json.hpp"
#include "plsv/synthetic.h"
#include "test_util.h"

namespace plsv {
namespace {

using Labels = std::vector<std::string>;

TEST(KnnAccuracyTest, Examples) {
  const Matrix<double> three{{0, 0}, {0.1, 0}, {5, 5}};
  EXPECT_NEAR(KnnAccuracy(three, Labels{"A", "A", "B"}, 1), 2.0 / 3, 1e-12);

  const Matrix<double> clusters{{0, 0}, {0.1, 0.2}, {0.2, 0}, {9, 9}, {9.1, 9}, {9, 9.2}};
  EXPECT_EQ(KnnAccuracy(clusters, Labels{"x", "x", "x", "y", "y", "y"}, 1), 1.0);
  EXPECT_EQ(KnnAccuracy(clusters, Labels{"x", "x", "x", "y", "y", "y"}, 2), 1.0);
}

TEST(KnnAccuracyTest, IdenticalCoordinatesFollowTieRules) {
  // Every distance ties, so neighbors are taken in index order. With labels
  // A A B B and k = 3, each document sees two of the other label and one of
  // its own, so every prediction is wrong.
  const Matrix<double> same(4, 2, 1.5);
  EXPECT_EQ(KnnAccuracy(same, Labels{"A", "A", "B", "B"}, 3), 0.0);
  // k = 2: doc 0 sees {A, B} (tie, nearest is A): right; doc 1 sees {A, B}:
  // right; doc 2 sees {A, A}: wrong; doc 3 sees {A, A}: wrong.
  EXPECT_EQ(KnnAccuracy(same, Labels{"A", "A", "B", "B"}, 2), 0.5);
  EXPECT_EQ(MajorityClassRate(Labels{"A", "A", "B", "B"}), 0.5);
}

TEST(KnnAccuracyTest, MajorityTieGoesToNearestLabel) {
  const Matrix<double> pts{{0, 0}, {1, 0}, {-2, 0}, {10, 0}};
  // Doc 0 with k = 2: neighbors 1 (B) then 2 (C); tie, nearest is B.
  EXPECT_NEAR(KnnAccuracy(pts, Labels{"B", "B", "C", "C"}, 2), 0.5, 1e-12);
}

TEST(KnnAccuracyTest, RigidMotionInvariance) {
  Rng rng(1);
  const auto coords = testing::RandomMatrix<double>(60, 2, rng);
  Labels labels;
  for (size_t i = 0; i < 60; ++i) labels.push_back(coords(i, 0) > 0 ? "p" : "n");
  labels[3] = "p";
  const double a = rng.Uniform() * 2 * std::numbers::pi;
  Matrix<double> moved(60, 2);
  for (size_t i = 0; i < 60; ++i) {
    moved(i, 0) = std::cos(a) * coords(i, 0) - std::sin(a) * coords(i, 1) + 3.7;
    moved(i, 1) = std::sin(a) * coords(i, 0) + std::cos(a) * coords(i, 1) - 1.2;
  }
  const std::vector<size_t> ks = {1, 5, 10};
  const auto before = KnnAccuracies(coords, labels, ks);
  const auto after = KnnAccuracies(moved, labels, ks);
  for (size_t k : ks) {
    EXPECT_NEAR(before.at(k), after.at(k), 1e-9);
    EXPECT_NEAR(before.at(k), KnnAccuracy(coords, labels, k), 1e-15);
  }
}

TEST(KnnAccuracyTest, Errors) {
  const Matrix<double> pts(3, 2);
  EXPECT_THROW(KnnAccuracy(pts, Labels{"a", "b", "c"}, 3), std::invalid_argument);
  EXPECT_THROW(KnnAccuracy(pts, Labels{"a", "b", "c"}, 0), std::invalid_argument);
  EXPECT_THROW(KnnAccuracy(pts, Labels{"a", "b"}, 1), std::invalid_argument);
  EXPECT_THROW(MajorityClassRate(Labels{}), std::invalid_argument);
}

TEST(RandomProjectionTest, ShapeAndDeterminism) {
  Rng data(2);
  const SparseCounts c = testing::RandomCounts(10, 30, data);
  Rng a(3), b(3);
  const auto pa = RandomProjection(c, 2, a);
  EXPECT_EQ(pa.rows(), 10u);
  EXPECT_EQ(pa.cols(), 2u);
  EXPECT_TRUE(pa.BitwiseEqual(RandomProjection(c, 2, b)));
}

TEST(CoocStatsTest, WindowExamples) {
  const std::vector<TokenList> one = {{"a", "b"}};
  const auto s1 = CoocStats::Build(one, 2);
  EXPECT_EQ(s1.Unigram("a"), 1.0);
  EXPECT_EQ(s1.Joint("a", "b"), 1.0);

  const std::vector<TokenList> abc = {{"a", "b", "c"}};
  const auto s2 = CoocStats::Build(abc, 2);
  EXPECT_EQ(s2.total_windows(), 2u);
  EXPECT_EQ(s2.Unigram("b"), 1.0);
  EXPECT_EQ(s2.Unigram("a"), 0.5);
  EXPECT_EQ(s2.Unigram("c"), 0.5);
  EXPECT_EQ(s2.Joint("a", "c"), 0.0);
  EXPECT_EQ(s2.Joint("c", "b"), 0.5);

  const std::vector<TokenList> disjoint = {{"a", "b"}, {"c", "d"}};
  const auto s3 = CoocStats::Build(disjoint, 7);
  EXPECT_EQ(s3.Joint("a", "d"), 0.0);
  EXPECT_EQ(s3.Unigram("a"), 0.5);
  EXPECT_THROW(s3.Unigram("zz"), std::invalid_argument);
  EXPECT_THROW(CoocStats::Build(disjoint, 1), std::invalid_argument);
  EXPECT_THROW(CoocStats::Build(std::vector<TokenList>{{}}, 3), std::invalid_argument);
}

TEST(CoocStatsTest, PresenceNotMultiplicityAndKeepFilter) {
  const std::vector<TokenList> docs = {{"a", "a", "b", "a"}};
  const auto s = CoocStats::Build(docs, 3);
  EXPECT_EQ(s.total_windows(), 2u);
  EXPECT_EQ(s.Unigram("a"), 1.0);
  EXPECT_EQ(s.Joint("a", "b"), 1.0);
  const std::unordered_set<std::string> keep = {"b"};
  const auto k = CoocStats::Build(docs, 3, &keep);
  EXPECT_TRUE(k.Contains("b"));
  EXPECT_FALSE(k.Contains("a"));
}

TEST(CoocStatsTest, JointBoundedByMarginals) {
  SyntheticOptions o;
  o.docs = 50;
  o.vocab = 40;
  o.topics = 4;
  const auto syn = GenerateSynthetic(o);
  const auto s = CoocStats::Build(syn.tokens, 7);
  for (size_t i = 0; i < 40; i += 3) {
    for (size_t j = i + 1; j < 40; j += 5) {
      const auto& a = syn.corpus.vocab.word(i);
      const auto& b = syn.corpus.vocab.word(j);
      if (!s.Contains(a) || !s.Contains(b)) continue;
      EXPECT_LE(s.Joint(a, b), std::min(s.Unigram(a), s.Unigram(b)));
      EXPECT_EQ(s.Joint(a, b), s.Joint(b, a));
    }
  }
}

CoocStats Manual(uint64_t ci, uint64_t cj, uint64_t cij, uint64_t total = 100) {
  CoocStats s(7, total);
  s.AddWordCount("i", ci);
  s.AddWordCount("j", cj);
  if (cij > 0) s.AddPairCount("i", "j", cij);
  return s;
}

TEST(NpmiPairTest, Examples) {
  EXPECT_NEAR(NpmiPair(Manual(10, 10, 5), "i", "j"), 0.53724, 1e-5);
  EXPECT_NEAR(NpmiPair(Manual(10, 10, 5), "i", "j"), std::log(5.0) / std::log(20.0), 1e-12);
  EXPECT_NEAR(NpmiPair(Manual(20, 50, 10), "i", "j"), 0.0, 1e-12);
  EXPECT_NEAR(NpmiPair(Manual(30, 30, 30), "i", "j"), 1.0, 1e-12);
  EXPECT_EQ(NpmiPair(Manual(30, 30, 0), "i", "j"), -1.0);
  EXPECT_EQ(NpmiPair(Manual(100, 100, 100), "i", "j"), 1.0);
  const auto s = Manual(12, 40, 7);
  EXPECT_DOUBLE_EQ(NpmiPair(s, "i", "j"), NpmiPair(s, "j", "i"));
  EXPECT_THROW(NpmiPair(s, "i", "q"), std::invalid_argument);
}

TEST(TopicNpmiTest, TopWordsAndAggregation) {
  const Vocabulary vocab({"i", "j", "k"});
  const Matrix<double> beta{{0.5, 0.25, 0.25}, {0.2, 0.4, 0.4}};
  EXPECT_EQ(TopWordIds(beta.row(0), 2), (std::vector<uint32_t>{0, 1}));
  EXPECT_EQ(TopWordIds(beta.row(1), 2), (std::vector<uint32_t>{1, 2}));
  EXPECT_THROW(TopWordIds(beta.row(0), 4), std::invalid_argument);
  EXPECT_EQ(TopWords(beta, vocab, 1)[1], (std::vector<std::string>{"j"}));

  CoocStats s = Manual(10, 10, 5);
  s.AddWordCount("k", 10);
  EXPECT_DOUBLE_EQ(TopicNpmi(beta, 0, vocab, s, 2), NpmiPair(s, "i", "j"));
  const auto m = ModelNpmi(beta, vocab, s, 2);
  ASSERT_EQ(m.per_topic.size(), 2u);
  EXPECT_EQ(m.per_topic[1], -1.0);
  EXPECT_DOUBLE_EQ(m.mean, (m.per_topic[0] + m.per_topic[1]) / 2);
  EXPECT_EQ(ModelNpmi(beta, vocab, s, 2).per_topic, m.per_topic);
}

TEST(TopicNpmiTest, AlwaysCooccurringWordsScoreOne) {
  TokenList doc;
  for (int i = 0; i < 10; ++i) doc.push_back("w" + std::to_string(i));
  const std::vector<TokenList> docs(5, doc);
  const auto s = CoocStats::Build(docs, 10);
  EXPECT_NEAR(WordsNpmi(doc, s), 1.0, 1e-12);
}

TEST(TopicNpmiTest, AbsentWordsScoreMinusOne) {
  const auto s = Manual(10, 10, 5);
  const std::vector<std::string> words = {"i", "j", "ghost"};
  const double pair = NpmiPair(s, "i", "j");
  EXPECT_NEAR(WordsNpmi(words, s), (pair - 2) / 3, 1e-12);
}

TEST(EvalReportTest, Json) {
  EvalReport r;
  r.knn_accuracy = {{1, 0.5}, {10, 0.75}};
  r.npmi_per_topic = {0.1, -0.2};
  r.npmi_mean = -0.05;
  const auto j = nlohmann::json::parse(EvalReportToJson(r));
  EXPECT_EQ(j["knn_accuracy"]["10"], 0.75);
  EXPECT_EQ(j["npmi_per_topic"].size(), 2u);
  EXPECT_EQ(j["npmi_mean"], -0.05);
}

}  // namespace
}  // namespace plsv
