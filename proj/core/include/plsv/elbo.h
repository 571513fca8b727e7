#pragma once

#include <span>
#include <vector>

#include "plsv/decoder.h"
#include "plsv/encoder.h"
#include "plsv/matrix.h"
#include "plsv/rng.h"
#include "plsv/sparse.h"

namespace plsv {

// KL(N(mu, diag(exp(logvar))) || N(0, gamma I)) per row:
//   1/2 sum_i [exp(lv_i)/gamma + mu_i^2/gamma - 1 + ln gamma - lv_i]
template <typename T>
std::vector<double> KlGaussian(const Matrix<T>& mu, const Matrix<T>& logvar,
                               double gamma);

// Accumulates dmu and dlogvar given upstream weights d(loss)/d(kl_n).
template <typename T>
void KlGaussianBackward(const Matrix<T>& mu, const Matrix<T>& logvar,
                        double gamma, std::span<const double> dkl,
                        Matrix<T>& dmu, Matrix<T>& dlogvar);

struct ElboTerms {
  std::vector<double> kl;     // >= 0
  std::vector<double> recon;  // <= 0, averaged over samples
  std::vector<double> elbo;   // recon - kl
};

struct ElboOptions {
  double gamma = 1.0;
  size_t samples = 1;
  double p_drop = 0.6;
  // Gaussian prior variance on topic coordinates; 0 disables the penalty.
  double phi_prior_variance = 0.0;
  // Number of documents in the full corpus; scales the phi penalty so that
  // the minibatch loss is the per-document share of the corpus objective.
  size_t corpus_size = 0;
};

template <typename T>
struct ModelGrads {
  EncoderParams<T> encoder;
  DecoderParams<T> decoder;
};

template <typename T>
struct ElboBatchResult {
  double mean_elbo = 0;
  // Minimized objective: -mean_elbo plus the optional phi penalty.
  double loss = 0;
  ElboTerms terms;
  EncoderCache<T> encoder_cache;
};

// One minibatch of the variational objective: encode, draw `samples`
// reparameterized coordinates, decode through the normalized RBF network and
// the softmax topic-word weights, subtract the closed-form KL. When grads is
// non-null, it receives d(loss)/d(params) (overwritten, not accumulated).
template <typename T>
ElboBatchResult<T> ElboBatch(const SparseCounts& counts,
                             const EncoderParams<T>& encoder,
                             const DecoderParams<T>& decoder,
                             const ElboOptions& options, Rng& rng, Mode mode,
                             ModelGrads<T>* grads = nullptr);

}  // namespace plsv
