#include "plsv/encoder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plsv {

namespace {

template <typename T>
void AddInto(Matrix<T>& dst, const Matrix<T>& src) {
  RequireShape(src, dst.rows(), dst.cols(), "gradient accumulation");
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

template <typename T>
EncoderParams<T> EncoderParams<T>::Zeros(size_t vocab, size_t h1, size_t h2,
                                         size_t dim) {
  EncoderParams p;
  p.w1 = Matrix<T>(vocab, h1);
  p.b1 = Matrix<T>(1, h1);
  p.w2 = Matrix<T>(h1, h2);
  p.b2 = Matrix<T>(1, h2);
  p.w_mu = Matrix<T>(h2, dim);
  p.b_mu = Matrix<T>(1, dim);
  p.w_lv = Matrix<T>(h2, dim);
  p.b_lv = Matrix<T>(1, dim);
  p.bn_mu = BatchNorm<T>(dim);
  p.bn_lv = BatchNorm<T>(dim);
  return p;
}

template <typename T>
EncoderParams<T> EncoderParams<T>::ZerosLike() const {
  EncoderParams z = *this;
  z.ForEachTensor([](std::string_view, Matrix<T>& t, bool) { t.Fill(T(0)); });
  return z;
}

template <typename T>
LatentGaussian<T> Encode(const SparseCounts& counts,
                         const EncoderParams<T>& params, double p_drop,
                         Rng& rng, Mode mode, EncoderCache<T>* cache) {
  if (counts.cols() != params.vocab_size())
    throw std::invalid_argument(
        "Encode: counts have " + std::to_string(counts.cols()) +
        " words but the encoder expects " +
        std::to_string(params.vocab_size()));
  EncoderCache<T> local;
  EncoderCache<T>& c = cache != nullptr ? *cache : local;

  c.h1_pre = SparseLinear(counts, params.w1, params.b1);
  c.h1 = Softplus(c.h1_pre);
  c.h2_pre = Linear(c.h1, params.w2, params.b2);
  c.h2 = Softplus(c.h2_pre);
  c.h2_dropped = Dropout(c.h2, p_drop, rng, mode, &c.dropout_mask);
  c.mu_pre = Linear(c.h2_dropped, params.w_mu, params.b_mu);
  c.lv_pre = Linear(c.h2_dropped, params.w_lv, params.b_lv);

  LatentGaussian<T> out;
  out.mu = params.bn_mu.Forward(c.mu_pre, mode, &c.bn_mu);
  c.lv_unclamped = params.bn_lv.Forward(c.lv_pre, mode, &c.bn_lv);
  out.logvar = c.lv_unclamped;
  const T lim = static_cast<T>(kLogVarClamp);
  for (size_t i = 0; i < out.logvar.size(); ++i)
    out.logvar[i] = std::clamp(out.logvar[i], -lim, lim);
  return out;
}

template <typename T>
void EncodeBackward(const SparseCounts& counts, const EncoderParams<T>& params,
                    const EncoderCache<T>& c, const Matrix<T>& dmu,
                    const Matrix<T>& dlogvar, EncoderParams<T>& grads) {
  const T lim = static_cast<T>(kLogVarClamp);
  Matrix<T> dlv = dlogvar;
  for (size_t i = 0; i < dlv.size(); ++i) {
    if (c.lv_unclamped[i] < -lim || c.lv_unclamped[i] > lim) dlv[i] = T(0);
  }

  Matrix<T> dgain, dbias;
  const Matrix<T> dmu_pre = params.bn_mu.Backward(c.bn_mu, dmu, dgain, dbias);
  AddInto(grads.bn_mu.gain, dgain);
  AddInto(grads.bn_mu.bias, dbias);
  const Matrix<T> dlv_pre = params.bn_lv.Backward(c.bn_lv, dlv, dgain, dbias);
  AddInto(grads.bn_lv.gain, dgain);
  AddInto(grads.bn_lv.bias, dbias);

  Matrix<T> dh2d_mu, dh2d_lv, dw, db;
  LinearBackward(c.h2_dropped, params.w_mu, dmu_pre, &dh2d_mu, dw, db);
  AddInto(grads.w_mu, dw);
  AddInto(grads.b_mu, db);
  LinearBackward(c.h2_dropped, params.w_lv, dlv_pre, &dh2d_lv, dw, db);
  AddInto(grads.w_lv, dw);
  AddInto(grads.b_lv, db);

  Matrix<T> dh2(dh2d_mu.rows(), dh2d_mu.cols());
  for (size_t i = 0; i < dh2.size(); ++i)
    dh2[i] = (dh2d_mu[i] + dh2d_lv[i]) * c.dropout_mask[i];
  const Matrix<T> dh2_pre = SoftplusBackward(c.h2_pre, dh2);

  Matrix<T> dh1;
  LinearBackward(c.h1, params.w2, dh2_pre, &dh1, dw, db);
  AddInto(grads.w2, dw);
  AddInto(grads.b2, db);
  const Matrix<T> dh1_pre = SoftplusBackward(c.h1_pre, dh1);

  SparseLinearBackward(counts, dh1_pre, dw, db);
  AddInto(grads.w1, dw);
  AddInto(grads.b1, db);
}

template <typename T>
void ApplyBatchNormUpdates(EncoderParams<T>& params,
                           const EncoderCache<T>& cache) {
  params.bn_mu.UpdateRunningStats(cache.bn_mu);
  params.bn_lv.UpdateRunningStats(cache.bn_lv);
}

template <typename T>
std::vector<Matrix<T>> SampleLatent(const LatentGaussian<T>& lg, Rng& rng,
                                    size_t samples,
                                    std::vector<Matrix<T>>* noise) {
  if (samples == 0) throw std::invalid_argument("SampleLatent: need L >= 1");
  const size_t b = lg.mu.rows(), d = lg.mu.cols();
  RequireShape(lg.logvar, b, d, "SampleLatent logvar");
  std::vector<Matrix<T>> out;
  if (noise != nullptr) noise->clear();
  for (size_t l = 0; l < samples; ++l) {
    Matrix<T> eps(b, d);
    for (size_t i = 0; i < eps.size(); ++i) eps[i] = static_cast<T>(rng.Normal());
    Matrix<T> x(b, d);
    for (size_t i = 0; i < x.size(); ++i)
      x[i] = lg.mu[i] + std::exp(lg.logvar[i] / T(2)) * eps[i];
    out.push_back(std::move(x));
    if (noise != nullptr) noise->push_back(std::move(eps));
  }
  return out;
}

#define PLSV_INSTANTIATE(T)                                                  \
  template struct EncoderParams<T>;                                          \
  template LatentGaussian<T> Encode(const SparseCounts&,                     \
                                    const EncoderParams<T>&, double, Rng&,   \
                                    Mode, EncoderCache<T>*);                 \
  template void EncodeBackward(const SparseCounts&, const EncoderParams<T>&, \
                               const EncoderCache<T>&, const Matrix<T>&,     \
                               const Matrix<T>&, EncoderParams<T>&);         \
  template void ApplyBatchNormUpdates(EncoderParams<T>&,                     \
                                      const EncoderCache<T>&);               \
  template std::vector<Matrix<T>> SampleLatent(                              \
      const LatentGaussian<T>&, Rng&, size_t, std::vector<Matrix<T>>*);

PLSV_INSTANTIATE(float)
PLSV_INSTANTIATE(double)

#undef PLSV_INSTANTIATE

}  // namespace plsv
