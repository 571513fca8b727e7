#pragma once

#include <cstdint>
#include <vector>

#include "plsv/corpus.h"
#include "plsv/matrix.h"

namespace plsv {

// Corpus drawn from the generative model with planted structure: topic
// coordinates evenly spaced on a circle, topic z owning the disjoint word
// block [z V/Z, (z+1) V/Z), and each document placed near one topic.
struct SyntheticOptions {
  size_t topics = 5;
  size_t docs = 1000;
  size_t vocab = 500;
  size_t tokens_per_doc = 50;
  double radius = 2.0;
  double doc_spread = 0.5;  // std dev of a document around its topic
  uint64_t seed = 0;
};

struct SyntheticCorpus {
  BowCorpus corpus;               // labels are "t<z>" of the planted topic
  std::vector<TokenList> tokens;  // token sequences, for co-occurrence
  std::vector<size_t> planted;    // planted topic of each document
  Matrix<double> phi;             // Z x 2
  Matrix<double> x;               // N x 2
  Matrix<double> beta;            // Z x V
  size_t support_size = 0;

  size_t SupportOf(uint32_t word) const { return word / support_size; }
};

SyntheticCorpus GenerateSynthetic(const SyntheticOptions& options);

// Fraction of documents whose most probable learned topic corresponds to
// their planted topic. Learned topic z corresponds to the planted topic
// whose word block holds most of beta_z.
double PlantedTopicAgreement(const Matrix<double>& learned_beta,
                             const Matrix<double>& learned_theta,
                             const SyntheticCorpus& truth);

}  // namespace plsv
