#include "plsv/synthetic.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "plsv/decoder.h"
#include "plsv/rng.h"

namespace plsv {

namespace {

size_t SampleCategorical(std::span<const double> probs, Rng& rng) {
  double u = rng.Uniform();
  for (size_t i = 0; i < probs.size(); ++i) {
    u -= probs[i];
    if (u < 0) return i;
  }
  return probs.size() - 1;
}

}  // namespace

SyntheticCorpus GenerateSynthetic(const SyntheticOptions& o) {
  if (o.topics < 1 || o.docs < 1 || o.tokens_per_doc < 1)
    throw std::invalid_argument("GenerateSynthetic: sizes must be positive");
  if (o.vocab < o.topics)
    throw std::invalid_argument("GenerateSynthetic: vocab must be >= topics");
  const Rng root(o.seed);
  SyntheticCorpus s;
  s.support_size = o.vocab / o.topics;

  s.phi = Matrix<double>(o.topics, 2);
  for (size_t z = 0; z < o.topics; ++z) {
    const double a = 2 * std::numbers::pi * static_cast<double>(z) /
                     static_cast<double>(o.topics);
    s.phi(z, 0) = o.radius * std::cos(a);
    s.phi(z, 1) = o.radius * std::sin(a);
  }

  s.beta = Matrix<double>(o.topics, o.vocab);
  Rng beta_rng = root.Split(1);
  for (size_t z = 0; z < o.topics; ++z) {
    double total = 0;
    for (size_t j = 0; j < s.support_size; ++j) {
      const double w = -std::log(1.0 - beta_rng.Uniform());  // Exp(1)
      s.beta(z, z * s.support_size + j) = w;
      total += w;
    }
    for (double& b : s.beta.row(z)) b /= total;
  }

  std::vector<std::string> words(o.vocab);
  const size_t width = std::max<size_t>(3, std::to_string(o.vocab - 1).size());
  for (size_t v = 0; v < o.vocab; ++v) {
    const std::string digits = std::to_string(v);
    words[v] = "w" + std::string(width - digits.size(), '0') + digits;
  }
  s.corpus.vocab = Vocabulary(words);
  s.corpus.counts = SparseCounts(o.vocab);
  s.x = Matrix<double>(o.docs, 2);

  std::vector<double> theta(o.topics);
  std::vector<uint32_t> cols, counts;
  for (size_t n = 0; n < o.docs; ++n) {
    Rng rng = root.Split(2).Split(n);
    const size_t topic = static_cast<size_t>(rng.Uniform() * o.topics) % o.topics;
    s.planted.push_back(topic);
    s.corpus.labels.push_back("t" + std::to_string(topic));
    for (size_t i = 0; i < 2; ++i)
      s.x(n, i) = s.phi(topic, i) + o.doc_spread * rng.Normal();

    double mx = -INFINITY;
    for (size_t z = 0; z < o.topics; ++z) {
      double r2 = 0;
      for (size_t i = 0; i < 2; ++i) {
        const double d = s.x(n, i) - s.phi(z, i);
        r2 += d * d;
      }
      theta[z] = LogKernel(RbfKernel::kGaussian, r2);
      mx = std::max(mx, theta[z]);
    }
    double total = 0;
    for (double& t : theta) total += (t = std::exp(t - mx));
    for (double& t : theta) t /= total;

    std::map<uint32_t, uint32_t> bag;
    TokenList& toks = s.tokens.emplace_back();
    for (size_t k = 0; k < o.tokens_per_doc; ++k) {
      const size_t z = SampleCategorical(theta, rng);
      const auto v = static_cast<uint32_t>(SampleCategorical(s.beta.row(z), rng));
      ++bag[v];
      toks.push_back(words[v]);
    }
    cols.clear();
    counts.clear();
    for (const auto& [v, c] : bag) {
      cols.push_back(v);
      counts.push_back(c);
    }
    s.corpus.counts.AppendRow(cols, counts);
  }
  return s;
}

double PlantedTopicAgreement(const Matrix<double>& learned_beta,
                             const Matrix<double>& learned_theta,
                             const SyntheticCorpus& truth) {
  const size_t planted_topics = truth.phi.rows();
  if (learned_beta.cols() != truth.beta.cols())
    throw std::invalid_argument("PlantedTopicAgreement: vocabulary mismatch");
  if (learned_theta.rows() != truth.planted.size() ||
      learned_theta.cols() != learned_beta.rows())
    throw std::invalid_argument("PlantedTopicAgreement: theta shape mismatch");
  std::vector<size_t> match(learned_beta.rows());
  std::vector<double> mass(planted_topics);
  for (size_t z = 0; z < learned_beta.rows(); ++z) {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (size_t v = 0; v < learned_beta.cols(); ++v) {
      const size_t p = truth.SupportOf(static_cast<uint32_t>(v));
      if (p < planted_topics) mass[p] += learned_beta(z, v);
    }
    match[z] = static_cast<size_t>(
        std::max_element(mass.begin(), mass.end()) - mass.begin());
  }
  size_t agree = 0;
  for (size_t n = 0; n < learned_theta.rows(); ++n) {
    const auto row = learned_theta.row(n);
    const size_t z =
        static_cast<size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    if (match[z] == truth.planted[n]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(learned_theta.rows());
}

}  // namespace plsv
