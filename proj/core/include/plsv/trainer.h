#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "plsv/config.h"
#include "plsv/corpus.h"
#include "plsv/decoder.h"
#include "plsv/encoder.h"
#include "plsv/matrix.h"
#include "plsv/rng.h"

namespace plsv {

// Per-document means over one epoch.
struct EpochStats {
  double elbo = 0;
  double kl = 0;
  double recon = 0;

  bool operator==(const EpochStats&) const = default;
};

template <typename T>
struct TrainedModel {
  EncoderParams<T> encoder;
  DecoderParams<T> decoder;
  TrainConfig config;
  std::vector<EpochStats> curve;
  // Row n is the inference-mode posterior mean of document n.
  Matrix<T> doc_coords;
};

template <typename T>
struct EpochReport {
  size_t epoch;
  EpochStats stats;
  double seconds;
  const EncoderParams<T>& encoder;
  const DecoderParams<T>& decoder;
};

template <typename T>
using EpochObserver = std::function<void(const EpochReport<T>&)>;

// Glorot-uniform encoder weights with zero biases; phi ~ N(0, 0.1 I);
// W ~ N(0, 0.01).
template <typename T>
std::pair<EncoderParams<T>, DecoderParams<T>> InitParams(
    const TrainConfig& config, size_t vocab_size, Rng& rng);

// Seeded permutation of [0, n) cut into batches of batch_size. A trailing
// batch of a single document is merged into the previous one.
std::vector<std::vector<size_t>> EpochBatches(size_t n, size_t batch_size,
                                              Rng& rng);

// Minibatch training with Adam on encoder weights, phi and W. Throws
// NonFiniteError identifying the epoch and batch if the loss diverges.
template <typename T>
TrainedModel<T> Train(const BowCorpus& corpus, const TrainConfig& config,
                      const EpochObserver<T>& observer = {});

// Inference-mode posterior means.
template <typename T>
Matrix<T> InferCoords(const EncoderParams<T>& encoder,
                      const SparseCounts& counts);

template <typename T>
Matrix<T> InferCoords(const TrainedModel<T>& model,
                      const SparseCounts& counts) {
  return InferCoords(model.encoder, counts);
}

}  // namespace plsv
