#include "plsv/elbo.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "plsv/adam.h"

namespace plsv {

namespace {

void RequireFinite(std::span<const double> values, const char* term) {
  for (size_t n = 0; n < values.size(); ++n) {
    if (!std::isfinite(values[n]))
      throw NonFiniteError(std::string("ELBO: non-finite ") + term +
                           " for batch row " + std::to_string(n));
  }
}

template <typename T>
void RequireFinite(const Matrix<T>& m, const char* term) {
  if (!m.AllFinite())
    throw NonFiniteError(std::string("ELBO: non-finite ") + term);
}

}  // namespace

template <typename T>
std::vector<double> KlGaussian(const Matrix<T>& mu, const Matrix<T>& logvar,
                               double gamma) {
  if (!(gamma > 0))
    throw std::invalid_argument("KlGaussian: prior variance must be positive");
  RequireShape(logvar, mu.rows(), mu.cols(), "KlGaussian logvar");
  const double log_gamma = std::log(gamma);
  std::vector<double> kl(mu.rows(), 0.0);
  for (size_t n = 0; n < mu.rows(); ++n) {
    double acc = 0;
    for (size_t i = 0; i < mu.cols(); ++i) {
      const double m = mu(n, i), lv = logvar(n, i);
      acc += std::exp(lv) / gamma + m * m / gamma - 1.0 + log_gamma - lv;
    }
    kl[n] = 0.5 * acc;
  }
  return kl;
}

template <typename T>
void KlGaussianBackward(const Matrix<T>& mu, const Matrix<T>& logvar,
                        double gamma, std::span<const double> dkl,
                        Matrix<T>& dmu, Matrix<T>& dlogvar) {
  for (size_t n = 0; n < mu.rows(); ++n) {
    for (size_t i = 0; i < mu.cols(); ++i) {
      dmu(n, i) += static_cast<T>(dkl[n] * mu(n, i) / gamma);
      dlogvar(n, i) += static_cast<T>(
          dkl[n] * 0.5 * (std::exp(static_cast<double>(logvar(n, i))) / gamma - 1.0));
    }
  }
}

template <typename T>
ElboBatchResult<T> ElboBatch(const SparseCounts& counts,
                             const EncoderParams<T>& encoder,
                             const DecoderParams<T>& decoder,
                             const ElboOptions& options, Rng& rng, Mode mode,
                             ModelGrads<T>* grads) {
  if (options.samples == 0)
    throw std::invalid_argument("ElboBatch: need at least one sample");
  if (counts.cols() != decoder.vocab_size())
    throw std::invalid_argument("ElboBatch: counts/decoder vocabulary mismatch");
  const size_t batch = counts.rows();
  if (batch == 0) throw std::invalid_argument("ElboBatch: empty batch");

  ElboBatchResult<T> result;
  const LatentGaussian<T> lg =
      Encode(counts, encoder, options.p_drop, rng, mode, &result.encoder_cache);
  RequireFinite(lg.mu, "encoder mean");
  RequireFinite(lg.logvar, "encoder log-variance");

  BetaCache<T> beta_cache;
  const Matrix<T> beta = Beta(decoder, &beta_cache);
  RequireFinite(beta, "topic-word distribution");

  ElboTerms& terms = result.terms;
  terms.kl = KlGaussian(lg.mu, lg.logvar, options.gamma);
  RequireFinite(terms.kl, "KL term");

  std::vector<Matrix<T>> noise;
  const std::vector<Matrix<T>> xs =
      SampleLatent(lg, rng, options.samples, &noise);
  std::vector<Matrix<T>> thetas;
  thetas.reserve(options.samples);
  terms.recon.assign(batch, 0.0);
  const double inv_samples = 1.0 / static_cast<double>(options.samples);
  for (const auto& x : xs) {
    thetas.push_back(RbfTheta(x, decoder.phi, decoder.kernel));
    RequireFinite(thetas.back(), "topic proportions");
    const std::vector<double> lp =
        ReconstructLogProb(thetas.back(), beta, counts);
    for (size_t n = 0; n < batch; ++n) terms.recon[n] += lp[n] * inv_samples;
  }
  RequireFinite(terms.recon, "reconstruction term");

  terms.elbo.resize(batch);
  double sum = 0;
  for (size_t n = 0; n < batch; ++n) {
    terms.elbo[n] = terms.recon[n] - terms.kl[n];
    sum += terms.elbo[n];
  }
  result.mean_elbo = sum / static_cast<double>(batch);
  result.loss = -result.mean_elbo;

  const bool phi_prior = options.phi_prior_variance > 0;
  double phi_scale = 0;
  if (phi_prior) {
    if (options.corpus_size == 0)
      throw std::invalid_argument("ElboBatch: phi prior needs corpus_size");
    phi_scale = 1.0 / (options.phi_prior_variance *
                       static_cast<double>(options.corpus_size));
    double sq = 0;
    for (size_t i = 0; i < decoder.phi.size(); ++i)
      sq += static_cast<double>(decoder.phi[i]) * decoder.phi[i];
    result.loss += 0.5 * phi_scale * sq;
  }
  if (!std::isfinite(result.loss))
    throw NonFiniteError("ELBO: non-finite batch loss");

  if (grads == nullptr) return result;

  grads->encoder = encoder.ZerosLike();
  grads->decoder = decoder.ZerosLike();
  const size_t d = lg.mu.cols();
  Matrix<T> dmu(batch, d), dlv(batch, d);
  Matrix<T> dbeta(decoder.topics(), decoder.vocab_size());
  const std::vector<double> dlogp(
      batch, -inv_samples / static_cast<double>(batch));
  for (size_t l = 0; l < xs.size(); ++l) {
    Matrix<T> dtheta(batch, decoder.topics());
    ReconstructBackward(thetas[l], beta, counts, dlogp, dtheta, dbeta);
    Matrix<T> dx(batch, d);
    RbfThetaBackward(xs[l], decoder.phi, decoder.kernel, thetas[l], dtheta, dx,
                     grads->decoder.phi);
    for (size_t i = 0; i < dx.size(); ++i) {
      dmu[i] += dx[i];
      dlv[i] += dx[i] * noise[l][i] * T(0.5) * std::exp(lg.logvar[i] / T(2));
    }
  }
  const std::vector<double> dkl(batch, 1.0 / static_cast<double>(batch));
  KlGaussianBackward(lg.mu, lg.logvar, options.gamma, dkl, dmu, dlv);
  BetaBackward(decoder, beta_cache, beta, dbeta, grads->decoder);
  if (phi_prior) {
    for (size_t i = 0; i < decoder.phi.size(); ++i)
      grads->decoder.phi[i] += static_cast<T>(phi_scale * decoder.phi[i]);
  }
  EncodeBackward(counts, encoder, result.encoder_cache, dmu, dlv,
                 grads->encoder);
  return result;
}

#define PLSV_INSTANTIATE(T)                                                   \
  template std::vector<double> KlGaussian(const Matrix<T>&, const Matrix<T>&, \
                                          double);                            \
  template void KlGaussianBackward(const Matrix<T>&, const Matrix<T>&,        \
                                   double, std::span<const double>,           \
                                   Matrix<T>&, Matrix<T>&);                   \
  template ElboBatchResult<T> ElboBatch(                                      \
      const SparseCounts&, const EncoderParams<T>&, const DecoderParams<T>&,  \
      const ElboOptions&, Rng&, Mode, ModelGrads<T>*);

PLSV_INSTANTIATE(float)
PLSV_INSTANTIATE(double)

#undef PLSV_INSTANTIATE

}  // namespace plsv
