#include "plsv/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "plsv/adam.h"
#include "plsv/elbo.h"

namespace plsv {

namespace {

// Stream ids under the root generator.
constexpr uint64_t kInitStream = 1;
constexpr uint64_t kShuffleStream = 2;
constexpr uint64_t kBatchStream = 3;

template <typename T>
void GlorotUniform(Matrix<T>& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<T>((2.0 * rng.Uniform() - 1.0) * limit);
}

template <typename T>
void GaussianFill(Matrix<T>& m, double variance, Rng& rng) {
  const double sd = std::sqrt(variance);
  for (size_t i = 0; i < m.size(); ++i) m[i] = static_cast<T>(sd * rng.Normal());
}

template <typename T>
struct TrainableSet {
  std::vector<Matrix<T>*> params;
  std::vector<const Matrix<T>*> grads;
  std::vector<std::string> names;
};

template <typename T>
TrainableSet<T> CollectTrainable(EncoderParams<T>& enc, DecoderParams<T>& dec,
                                 ModelGrads<T>& grads) {
  TrainableSet<T> set;
  auto take_param = [&](std::string_view name, Matrix<T>& t, bool trainable) {
    if (!trainable) return;
    set.params.push_back(&t);
    set.names.emplace_back(name);
  };
  auto take_grad = [&](std::string_view, Matrix<T>& t, bool trainable) {
    if (trainable) set.grads.push_back(&t);
  };
  enc.ForEachTensor(take_param);
  dec.ForEachTensor(take_param);
  grads.encoder.ForEachTensor(take_grad);
  grads.decoder.ForEachTensor(take_grad);
  return set;
}

template <typename T>
void ClipGlobalNorm(ModelGrads<T>& grads, double max_norm) {
  double sq = 0;
  auto accumulate = [&](std::string_view, Matrix<T>& t, bool trainable) {
    if (!trainable) return;
    for (T g : t.values()) sq += static_cast<double>(g) * g;
  };
  grads.encoder.ForEachTensor(accumulate);
  grads.decoder.ForEachTensor(accumulate);
  const double norm = std::sqrt(sq);
  if (!(norm > max_norm)) return;
  const T scale = static_cast<T>(max_norm / norm);
  auto rescale = [&](std::string_view, Matrix<T>& t, bool trainable) {
    if (!trainable) return;
    for (T& g : t.values()) g *= scale;
  };
  grads.encoder.ForEachTensor(rescale);
  grads.decoder.ForEachTensor(rescale);
}

}  // namespace

template <typename T>
std::pair<EncoderParams<T>, DecoderParams<T>> InitParams(
    const TrainConfig& config, size_t vocab_size, Rng& rng) {
  if (vocab_size < 2)
    throw std::invalid_argument("InitParams: vocabulary needs at least 2 words");
  auto enc = EncoderParams<T>::Zeros(vocab_size, config.hidden1,
                                     config.hidden2, config.dim);
  for (auto* bn : {&enc.bn_mu, &enc.bn_lv}) {
    bn->momentum = config.bn_momentum;
    bn->eps = config.bn_eps;
  }
  GlorotUniform(enc.w1, rng);
  GlorotUniform(enc.w2, rng);
  GlorotUniform(enc.w_mu, rng);
  GlorotUniform(enc.w_lv, rng);

  DecoderParams<T> dec;
  dec.kernel = config.kernel;
  dec.phi = Matrix<T>(config.topics, config.dim);
  dec.w = Matrix<T>(config.topics, vocab_size);
  GaussianFill(dec.phi, 0.1, rng);
  GaussianFill(dec.w, 0.01, rng);
  dec.use_batchnorm = config.decoder_batchnorm;
  if (dec.use_batchnorm) dec.bn = BatchNorm<T>(vocab_size, config.bn_momentum, config.bn_eps);
  return {std::move(enc), std::move(dec)};
}

std::vector<std::vector<size_t>> EpochBatches(size_t n, size_t batch_size,
                                              Rng& rng) {
  if (batch_size == 0) throw std::invalid_argument("EpochBatches: batch_size is 0");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  // Fisher-Yates with our own uniform draws, so the permutation does not
  // depend on the standard library's shuffle implementation.
  for (size_t i = n; i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.Uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < n; start += batch_size) {
    const size_t end = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  if (batches.size() >= 2 && batches.back().size() == 1) {
    batches[batches.size() - 2].push_back(batches.back().front());
    batches.pop_back();
  }
  return batches;
}

template <typename T>
TrainedModel<T> Train(const BowCorpus& corpus, const TrainConfig& config,
                      const EpochObserver<T>& observer) {
  config.Validate();
  const size_t n_docs = corpus.num_docs();
  if (n_docs == 0) throw std::invalid_argument("Train: empty corpus");
  if (config.epochs > 0 && n_docs < 2)
    throw std::invalid_argument(
        "Train: batch normalization needs at least 2 documents");

  const Rng root(config.seed);
  Rng init_rng = root.Split(kInitStream);
  auto [encoder, decoder] = InitParams<T>(config, corpus.vocab_size(), init_rng);

  TrainedModel<T> model;
  model.config = config;

  ElboOptions options;
  options.gamma = config.gamma;
  options.samples = config.samples;
  options.p_drop = config.DropProbability();
  options.corpus_size = n_docs;
  if (config.phi_l2)
    options.phi_prior_variance =
        static_cast<double>(n_docs) / static_cast<double>(config.topics);

  Adam<T> adam(AdamOptions{.lr = config.lr});
  ModelGrads<T> grads;
  std::vector<ParamBlock<T>> blocks;

  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    Rng shuffle_rng = root.Split(kShuffleStream).Split(epoch);
    const auto batches = EpochBatches(n_docs, config.batch_size, shuffle_rng);
    const Rng epoch_rng = root.Split(kBatchStream).Split(epoch);
    double sum_elbo = 0, sum_kl = 0, sum_recon = 0;
    for (size_t b = 0; b < batches.size(); ++b) {
      const SparseCounts batch = corpus.counts.Gather(batches[b]);
      Rng batch_rng = epoch_rng.Split(b);
      ElboBatchResult<T> res;
      try {
        res = ElboBatch(batch, encoder, decoder, options, batch_rng,
                        Mode::kTraining, &grads);
      } catch (const NonFiniteError& e) {
        throw NonFiniteError("epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(b) + ": " + e.what());
      }
      ApplyBatchNormUpdates(encoder, res.encoder_cache);
      ClipGlobalNorm(grads, config.clip_norm);

      const auto set = CollectTrainable(encoder, decoder, grads);
      blocks.clear();
      for (size_t k = 0; k < set.params.size(); ++k)
        blocks.push_back({set.names[k], set.params[k]->values(),
                          set.grads[k]->values()});
      try {
        adam.Step(blocks);
      } catch (const NonFiniteError& e) {
        throw NonFiniteError("epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(b) + ": " + e.what());
      }
      for (size_t n = 0; n < batch.rows(); ++n) {
        sum_elbo += res.terms.elbo[n];
        sum_kl += res.terms.kl[n];
        sum_recon += res.terms.recon[n];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n_docs);
    EpochStats stats{sum_elbo * inv_n, sum_kl * inv_n, sum_recon * inv_n};
    model.curve.push_back(stats);
    if (observer) {
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
      observer(EpochReport<T>{epoch, stats, seconds, encoder, decoder});
    }
  }

  model.doc_coords = InferCoords(encoder, corpus.counts);
  model.encoder = std::move(encoder);
  model.decoder = std::move(decoder);
  return model;
}

template <typename T>
Matrix<T> InferCoords(const EncoderParams<T>& encoder,
                      const SparseCounts& counts) {
  constexpr size_t kChunk = 1024;
  const size_t n = counts.rows();
  Matrix<T> coords(n, encoder.latent_dim());
  Rng unused(0);
  std::vector<size_t> rows;
  for (size_t start = 0; start < n; start += kChunk) {
    const size_t end = std::min(n, start + kChunk);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    const SparseCounts chunk = counts.Gather(rows);
    const auto lg = Encode(chunk, encoder, 0.0, unused, Mode::kInference);
    for (size_t i = 0; i < chunk.rows(); ++i)
      std::copy(lg.mu.row(i).begin(), lg.mu.row(i).end(),
                coords.row(start + i).begin());
  }
  if (!coords.AllFinite())
    throw NonFiniteError("InferCoords: non-finite document coordinates");
  return coords;
}

#define PLSV_INSTANTIATE(T)                                                 \
  template std::pair<EncoderParams<T>, DecoderParams<T>> InitParams(        \
      const TrainConfig&, size_t, Rng&);                                    \
  template TrainedModel<T> Train(const BowCorpus&, const TrainConfig&,      \
                                 const EpochObserver<T>&);                  \
  template Matrix<T> InferCoords(const EncoderParams<T>&, const SparseCounts&);

PLSV_INSTANTIATE(float)
PLSV_INSTANTIATE(double)

#undef PLSV_INSTANTIATE

}  // namespace plsv
