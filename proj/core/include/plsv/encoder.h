#pragma once

#include <string_view>
#include <vector>

#include "plsv/layers.h"
#include "plsv/matrix.h"
#include "plsv/rng.h"
#include "plsv/sparse.h"

namespace plsv {

inline constexpr double kLogVarClamp = 20.0;

// Inference network: counts -> softplus(H1) -> softplus(H2) -> dropout ->
// two linear heads, each followed by its own batch normalization, giving the
// mean and log-variance of a diagonal Gaussian over document coordinates.
template <typename T>
struct EncoderParams {
  Matrix<T> w1, b1;      // V x H1, 1 x H1
  Matrix<T> w2, b2;      // H1 x H2, 1 x H2
  Matrix<T> w_mu, b_mu;  // H2 x d, 1 x d
  Matrix<T> w_lv, b_lv;  // H2 x d, 1 x d
  BatchNorm<T> bn_mu;
  BatchNorm<T> bn_lv;

  size_t vocab_size() const { return w1.rows(); }
  size_t hidden1() const { return w1.cols(); }
  size_t hidden2() const { return w2.cols(); }
  size_t latent_dim() const { return w_mu.cols(); }

  // Zero-filled parameters of the given shape; batchnorm gains are 1.
  static EncoderParams Zeros(size_t vocab, size_t h1, size_t h2, size_t dim);

  // Same shapes, every tensor zero. Used as a gradient container.
  EncoderParams ZerosLike() const;

  // Visits every tensor in checkpoint order as f(name, tensor, trainable).
  // Batchnorm running statistics are visited with trainable = false.
  template <typename F>
  void ForEachTensor(F&& f) {
    f("encoder.w1", w1, true);
    f("encoder.b1", b1, true);
    f("encoder.w2", w2, true);
    f("encoder.b2", b2, true);
    f("encoder.w_mu", w_mu, true);
    f("encoder.b_mu", b_mu, true);
    f("encoder.w_lv", w_lv, true);
    f("encoder.b_lv", b_lv, true);
    f("encoder.bn_mu.gain", bn_mu.gain, true);
    f("encoder.bn_mu.bias", bn_mu.bias, true);
    f("encoder.bn_mu.running_mean", bn_mu.running_mean, false);
    f("encoder.bn_mu.running_var", bn_mu.running_var, false);
    f("encoder.bn_lv.gain", bn_lv.gain, true);
    f("encoder.bn_lv.bias", bn_lv.bias, true);
    f("encoder.bn_lv.running_mean", bn_lv.running_mean, false);
    f("encoder.bn_lv.running_var", bn_lv.running_var, false);
  }
  template <typename F>
  void ForEachTensor(F&& f) const {
    const_cast<EncoderParams*>(this)->ForEachTensor(
        [&](std::string_view name, Matrix<T>& t, bool trainable) {
          f(name, static_cast<const Matrix<T>&>(t), trainable);
        });
  }
};

// Diagonal Gaussian per row: mean and log of the variances.
template <typename T>
struct LatentGaussian {
  Matrix<T> mu;
  Matrix<T> logvar;
};

template <typename T>
struct EncoderCache {
  Matrix<T> h1_pre, h1, h2_pre, h2, h2_dropped, dropout_mask;
  Matrix<T> mu_pre, lv_pre, lv_unclamped;
  BatchNormCache<T> bn_mu, bn_lv;
};

// Pure given params and rng: batch statistics for the running averages are
// left in the cache (see ApplyBatchNormUpdates).
template <typename T>
LatentGaussian<T> Encode(const SparseCounts& counts,
                         const EncoderParams<T>& params, double p_drop,
                         Rng& rng, Mode mode, EncoderCache<T>* cache = nullptr);

// Accumulates parameter gradients into grads given d(loss)/d(mu) and
// d(loss)/d(logvar). Gradients do not flow through clamped log-variances.
template <typename T>
void EncodeBackward(const SparseCounts& counts, const EncoderParams<T>& params,
                    const EncoderCache<T>& cache, const Matrix<T>& dmu,
                    const Matrix<T>& dlogvar, EncoderParams<T>& grads);

template <typename T>
void ApplyBatchNormUpdates(EncoderParams<T>& params,
                           const EncoderCache<T>& cache);

// Reparameterized draws x = mu + exp(logvar / 2) * eps, one B x d matrix per
// sample. The standard-normal eps are returned through `noise` when given.
template <typename T>
std::vector<Matrix<T>> SampleLatent(const LatentGaussian<T>& lg, Rng& rng,
                                    size_t samples,
                                    std::vector<Matrix<T>>* noise = nullptr);

}  // namespace plsv
