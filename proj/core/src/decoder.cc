#include "plsv/decoder.h"

#include <cmath>
#include <stdexcept>

namespace plsv {

std::string_view KernelName(RbfKernel kernel) {
  switch (kernel) {
    case RbfKernel::kGaussian:
      return "gaussian";
    case RbfKernel::kInverseQuadratic:
      return "inverse-quadratic";
    case RbfKernel::kInverseMultiquadric:
      return "inverse-multiquadric";
  }
  return "unknown";
}

RbfKernel ParseKernel(std::string_view name) {
  if (name == "gaussian") return RbfKernel::kGaussian;
  if (name == "inverse-quadratic") return RbfKernel::kInverseQuadratic;
  if (name == "inverse-multiquadric") return RbfKernel::kInverseMultiquadric;
  throw std::invalid_argument("unknown RBF kernel '" + std::string(name) +
                              "' (expected gaussian, inverse-quadratic or "
                              "inverse-multiquadric)");
}

double LogKernel(RbfKernel kernel, double r2) {
  switch (kernel) {
    case RbfKernel::kGaussian:
      return -0.5 * r2;
    case RbfKernel::kInverseQuadratic:
      return -std::log1p(r2);
    case RbfKernel::kInverseMultiquadric:
      return -0.5 * std::log1p(r2);
  }
  return 0.0;
}

double LogKernelSlope(RbfKernel kernel, double r2) {
  switch (kernel) {
    case RbfKernel::kGaussian:
      return -0.5;
    case RbfKernel::kInverseQuadratic:
      return -1.0 / (1.0 + r2);
    case RbfKernel::kInverseMultiquadric:
      return -0.5 / (1.0 + r2);
  }
  return 0.0;
}

template <typename T>
DecoderParams<T> DecoderParams<T>::ZerosLike() const {
  DecoderParams<T> z;
  z.phi = Matrix<T>(phi.rows(), phi.cols());
  z.w = Matrix<T>(w.rows(), w.cols());
  z.kernel = kernel;
  z.use_batchnorm = use_batchnorm;
  if (use_batchnorm) {
    z.bn = bn;
    z.bn.gain.Fill(T(0));
    z.bn.bias.Fill(T(0));
  }
  return z;
}

template <typename T>
Matrix<T> RbfTheta(const Matrix<T>& x, const Matrix<T>& phi, RbfKernel kernel) {
  if (x.cols() != phi.cols())
    throw std::invalid_argument("RbfTheta: x is " + x.ShapeString() +
                                " but phi is " + phi.ShapeString());
  if (phi.rows() == 0) throw std::invalid_argument("RbfTheta: no topics");
  const size_t b = x.rows(), z = phi.rows(), d = x.cols();
  Matrix<T> logits(b, z);
  for (size_t n = 0; n < b; ++n) {
    for (size_t k = 0; k < z; ++k) {
      double r2 = 0;
      for (size_t j = 0; j < d; ++j) {
        const double diff = static_cast<double>(x(n, j)) - phi(k, j);
        r2 += diff * diff;
      }
      logits(n, k) = static_cast<T>(LogKernel(kernel, r2));
    }
  }
  return SoftmaxRows(logits);
}

template <typename T>
void RbfThetaBackward(const Matrix<T>& x, const Matrix<T>& phi,
                      RbfKernel kernel, const Matrix<T>& theta,
                      const Matrix<T>& dtheta, Matrix<T>& dx, Matrix<T>& dphi) {
  const size_t b = x.rows(), z = phi.rows(), d = x.cols();
  RequireShape(dx, b, d, "RbfThetaBackward dx");
  RequireShape(dphi, z, d, "RbfThetaBackward dphi");
  const Matrix<T> dlogits = SoftmaxRowsBackward(theta, dtheta);
  for (size_t n = 0; n < b; ++n) {
    for (size_t k = 0; k < z; ++k) {
      double r2 = 0;
      for (size_t j = 0; j < d; ++j) {
        const double diff = static_cast<double>(x(n, j)) - phi(k, j);
        r2 += diff * diff;
      }
      const T dr2 = static_cast<T>(dlogits(n, k) * LogKernelSlope(kernel, r2));
      for (size_t j = 0; j < d; ++j) {
        const T g = T(2) * dr2 * (x(n, j) - phi(k, j));
        dx(n, j) += g;
        dphi(k, j) -= g;
      }
    }
  }
}

template <typename T>
Matrix<T> Beta(const DecoderParams<T>& params, BetaCache<T>* cache) {
  BetaCache<T> local;
  BetaCache<T>& c = cache != nullptr ? *cache : local;
  if (params.use_batchnorm) {
    c.logits = params.bn.Forward(params.w, Mode::kTraining, &c.bn);
  } else {
    c.logits = params.w;
  }
  return SoftmaxRows(c.logits);
}

template <typename T>
void BetaBackward(const DecoderParams<T>& params, const BetaCache<T>& cache,
                  const Matrix<T>& beta, const Matrix<T>& dbeta,
                  DecoderParams<T>& grads) {
  Matrix<T> dlogits = SoftmaxRowsBackward(beta, dbeta);
  if (params.use_batchnorm) {
    Matrix<T> dgain, dbias;
    dlogits = params.bn.Backward(cache.bn, dlogits, dgain, dbias);
    for (size_t j = 0; j < dgain.size(); ++j) {
      grads.bn.gain[j] += dgain[j];
      grads.bn.bias[j] += dbias[j];
    }
  }
  for (size_t i = 0; i < dlogits.size(); ++i) grads.w[i] += dlogits[i];
}

template <typename T>
std::vector<double> ReconstructLogProb(const Matrix<T>& theta,
                                       const Matrix<T>& beta,
                                       const SparseCounts& counts) {
  const size_t b = theta.rows(), z = theta.cols();
  RequireShape(beta, z, counts.cols(), "ReconstructLogProb beta");
  if (counts.rows() != b)
    throw std::invalid_argument("ReconstructLogProb: theta/counts row mismatch");
  const Matrix<T> beta_t = beta.Transposed();
  std::vector<double> logp(b, 0.0);
  for (size_t n = 0; n < b; ++n) {
    const T* th = theta.row(n).data();
    double acc = 0;
    for (size_t k = counts.row_begin(n); k < counts.row_end(n); ++k) {
      const T* bt = beta_t.row(counts.col_at(k)).data();
      T mix = 0;
      for (size_t t = 0; t < z; ++t) mix += th[t] * bt[t];
      acc += counts.count_at(k) *
             std::log(static_cast<double>(mix) + kProbabilityFloor);
    }
    logp[n] = acc;
  }
  return logp;
}

template <typename T>
void ReconstructBackward(const Matrix<T>& theta, const Matrix<T>& beta,
                         const SparseCounts& counts,
                         std::span<const double> dlogp, Matrix<T>& dtheta,
                         Matrix<T>& dbeta) {
  const size_t b = theta.rows(), z = theta.cols(), v = beta.cols();
  RequireShape(dtheta, b, z, "ReconstructBackward dtheta");
  RequireShape(dbeta, z, v, "ReconstructBackward dbeta");
  const Matrix<T> beta_t = beta.Transposed();
  Matrix<T> dbeta_t(v, z);
  for (size_t n = 0; n < b; ++n) {
    const T* th = theta.row(n).data();
    T* dth = dtheta.row(n).data();
    for (size_t k = counts.row_begin(n); k < counts.row_end(n); ++k) {
      const size_t word = counts.col_at(k);
      const T* bt = beta_t.row(word).data();
      T mix = 0;
      for (size_t t = 0; t < z; ++t) mix += th[t] * bt[t];
      const T g = static_cast<T>(dlogp[n] * counts.count_at(k) /
                                 (static_cast<double>(mix) + kProbabilityFloor));
      T* dbt = dbeta_t.row(word).data();
      for (size_t t = 0; t < z; ++t) {
        dth[t] += g * bt[t];
        dbt[t] += g * th[t];
      }
    }
  }
  for (size_t t = 0; t < z; ++t)
    for (size_t w = 0; w < v; ++w) dbeta(t, w) += dbeta_t(w, t);
}

#define PLSV_INSTANTIATE(T)                                                   \
  template struct DecoderParams<T>;                                           \
  template Matrix<T> RbfTheta(const Matrix<T>&, const Matrix<T>&, RbfKernel); \
  template void RbfThetaBackward(const Matrix<T>&, const Matrix<T>&,          \
                                 RbfKernel, const Matrix<T>&,                 \
                                 const Matrix<T>&, Matrix<T>&, Matrix<T>&);   \
  template Matrix<T> Beta(const DecoderParams<T>&, BetaCache<T>*);            \
  template void BetaBackward(const DecoderParams<T>&, const BetaCache<T>&,    \
                             const Matrix<T>&, const Matrix<T>&,              \
                             DecoderParams<T>&);                              \
  template std::vector<double> ReconstructLogProb(                            \
      const Matrix<T>&, const Matrix<T>&, const SparseCounts&);               \
  template void ReconstructBackward(const Matrix<T>&, const Matrix<T>&,       \
                                    const SparseCounts&,                      \
                                    std::span<const double>, Matrix<T>&,      \
                                    Matrix<T>&);

PLSV_INSTANTIATE(float)
PLSV_INSTANTIATE(double)

#undef PLSV_INSTANTIATE

}  // namespace plsv
