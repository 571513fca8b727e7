#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "plsv/decoder.h"

namespace plsv {

enum class Precision { kF32, kF64 };

std::string_view PrecisionName(Precision p);  // "f32" / "f64"
Precision ParsePrecision(std::string_view name);

// Hyperparameters of the variational trainer. Defaults follow the reference
// training protocol: H1 = H2 = 100, batch 256, one sample per document,
// learning rate 0.002, dropout 0.6, 1000 epochs.
struct TrainConfig {
  size_t topics = 50;
  size_t dim = 2;
  double gamma = 1.0;
  double lr = 0.002;
  size_t batch_size = 256;
  size_t epochs = 1000;
  size_t samples = 1;
  double dropout = 0.6;
  // When true, `dropout` is read as the keep probability instead.
  bool dropout_is_keep = false;
  size_t hidden1 = 100;
  size_t hidden2 = 100;
  RbfKernel kernel = RbfKernel::kGaussian;
  uint64_t seed = 0;
  Precision precision = Precision::kF32;
  bool deterministic = true;
  // Gaussian prior on topic coordinates with variance N / Z.
  bool phi_l2 = false;
  bool decoder_batchnorm = false;
  double clip_norm = 10.0;
  double bn_momentum = 0.99;
  double bn_eps = 1e-5;
  int threads = 1;

  double DropProbability() const {
    return dropout_is_keep ? 1.0 - dropout : dropout;
  }

  // Throws std::invalid_argument naming the first bad field.
  void Validate() const;

  bool operator==(const TrainConfig&) const = default;
};

// JSON round trip. Missing keys keep the values of `defaults`; unknown keys
// are rejected.
std::string TrainConfigToJson(const TrainConfig& config);
TrainConfig TrainConfigFromJson(std::string_view json,
                                const TrainConfig& defaults = {});

}  // namespace plsv
