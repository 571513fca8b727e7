#include "plsv/synthetic.h"

#include <cmath>

#include <gtest/gtest.h>

#include "plsv/decoder.h"

namespace plsv {
namespace {

TEST(GenerateSyntheticTest, MatchesRequestedShape) {
  const auto s = GenerateSynthetic(SyntheticOptions{});
  EXPECT_EQ(s.corpus.num_docs(), 1000u);
  EXPECT_EQ(s.corpus.vocab_size(), 500u);
  EXPECT_EQ(s.support_size, 100u);
  EXPECT_EQ(s.tokens.size(), 1000u);
  for (size_t n = 0; n < 1000; n += 37) {
    EXPECT_EQ(s.corpus.counts.RowTotal(n), 50u);
    EXPECT_EQ(s.tokens[n].size(), 50u);
    EXPECT_EQ(s.corpus.labels[n], "t" + std::to_string(s.planted[n]));
  }
  for (size_t z = 0; z < 5; ++z) {
    EXPECT_NEAR(std::hypot(s.phi(z, 0), s.phi(z, 1)), 2.0, 1e-12);
    double in_block = 0, total = 0;
    for (size_t v = 0; v < 500; ++v) {
      total += s.beta(z, v);
      if (s.SupportOf(static_cast<uint32_t>(v)) == z) in_block += s.beta(z, v);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(in_block, 1.0, 1e-12);
  }
}

TEST(GenerateSyntheticTest, SeededAndValidated) {
  SyntheticOptions o;
  o.docs = 50;
  o.seed = 3;
  const auto a = GenerateSynthetic(o), b = GenerateSynthetic(o);
  EXPECT_EQ(a.corpus.counts, b.corpus.counts);
  EXPECT_EQ(a.tokens, b.tokens);
  o.seed = 4;
  EXPECT_NE(GenerateSynthetic(o).corpus.counts, a.corpus.counts);
  o.vocab = 3;
  EXPECT_THROW(GenerateSynthetic(o), std::invalid_argument);
}

TEST(PlantedTopicAgreementTest, TruthScoresHighAndPermutationInvariant) {
  const auto s = GenerateSynthetic(SyntheticOptions{});
  const auto theta = RbfTheta(s.x, s.phi, RbfKernel::kGaussian);
  const double truth = PlantedTopicAgreement(s.beta, theta, s);
  EXPECT_GT(truth, 0.85);

  Matrix<double> beta_p(5, 500), theta_p(1000, 5);
  for (size_t z = 0; z < 5; ++z) {
    const size_t to = (z + 2) % 5;
    for (size_t v = 0; v < 500; ++v) beta_p(to, v) = s.beta(z, v);
    for (size_t n = 0; n < 1000; ++n) theta_p(n, to) = theta(n, z);
  }
  EXPECT_DOUBLE_EQ(PlantedTopicAgreement(beta_p, theta_p, s), truth);
  EXPECT_THROW(PlantedTopicAgreement(Matrix<double>(5, 4), theta, s), std::invalid_argument);
}

}  // namespace
}  // namespace plsv
