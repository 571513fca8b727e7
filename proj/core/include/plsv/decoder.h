#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plsv/layers.h"
#include "plsv/matrix.h"
#include "plsv/sparse.h"

namespace plsv {

// Radial basis functions of the Euclidean distance r:
//   Gaussian              exp(-r^2 / 2)
//   InverseQuadratic      1 / (1 + r^2)
//   InverseMultiquadric   1 / sqrt(1 + r^2)
enum class RbfKernel { kGaussian, kInverseQuadratic, kInverseMultiquadric };

std::string_view KernelName(RbfKernel kernel);
// Accepts "gaussian", "inverse-quadratic", "inverse-multiquadric".
RbfKernel ParseKernel(std::string_view name);

// log rho as a function of the squared distance, and its derivative.
double LogKernel(RbfKernel kernel, double r2);
double LogKernelSlope(RbfKernel kernel, double r2);

// Topic coordinates and unnormalized topic-word weights, shared by all
// documents. beta = softmax_rows(W), optionally after batch normalization of
// W over its topic rows.
template <typename T>
struct DecoderParams {
  Matrix<T> phi;  // Z x d
  Matrix<T> w;    // Z x V
  RbfKernel kernel = RbfKernel::kGaussian;
  bool use_batchnorm = false;
  BatchNorm<T> bn;  // V features; present only when use_batchnorm

  size_t topics() const { return phi.rows(); }
  size_t latent_dim() const { return phi.cols(); }
  size_t vocab_size() const { return w.cols(); }

  // Visits every tensor in checkpoint order as f(name, tensor, trainable).
  template <typename F>
  void ForEachTensor(F&& f) {
    f("decoder.phi", phi, true);
    f("decoder.w", w, true);
    if (use_batchnorm) {
      f("decoder.bn.gain", bn.gain, true);
      f("decoder.bn.bias", bn.bias, true);
    }
  }
  template <typename F>
  void ForEachTensor(F&& f) const {
    const_cast<DecoderParams*>(this)->ForEachTensor(
        [&](std::string_view name, Matrix<T>& t, bool trainable) {
          f(name, static_cast<const Matrix<T>&>(t), trainable);
        });
  }

  // Same shapes, all zeros. Used as a gradient container.
  DecoderParams ZerosLike() const;
};

// theta_nz = rho(|x_n - phi_z|) / sum_z' rho(|x_n - phi_z'|), computed as a
// softmax over log rho.
template <typename T>
Matrix<T> RbfTheta(const Matrix<T>& x, const Matrix<T>& phi, RbfKernel kernel);

// Accumulates into dx (B x d) and dphi (Z x d).
template <typename T>
void RbfThetaBackward(const Matrix<T>& x, const Matrix<T>& phi,
                      RbfKernel kernel, const Matrix<T>& theta,
                      const Matrix<T>& dtheta, Matrix<T>& dx, Matrix<T>& dphi);

template <typename T>
struct BetaCache {
  Matrix<T> logits;  // W, or BN(W) when enabled
  BatchNormCache<T> bn;
};

template <typename T>
Matrix<T> Beta(const DecoderParams<T>& params, BetaCache<T>* cache = nullptr);

// Accumulates gradients for W (and BN gain/bias) into grads.
template <typename T>
void BetaBackward(const DecoderParams<T>& params, const BetaCache<T>& cache,
                  const Matrix<T>& beta, const Matrix<T>& dbeta,
                  DecoderParams<T>& grads);

inline constexpr double kProbabilityFloor = 1e-10;

// log p(w_n | theta_n, beta) = sum_v c_nv log((theta_n beta)_v + floor).
// Only observed words are visited.
template <typename T>
std::vector<double> ReconstructLogProb(const Matrix<T>& theta,
                                       const Matrix<T>& beta,
                                       const SparseCounts& counts);

// Given upstream weights d(loss)/d(logp_n), accumulates dtheta (B x Z) and
// dbeta (Z x V).
template <typename T>
void ReconstructBackward(const Matrix<T>& theta, const Matrix<T>& beta,
                         const SparseCounts& counts,
                         std::span<const double> dlogp, Matrix<T>& dtheta,
                         Matrix<T>& dbeta);

}  // namespace plsv
