#pragma once

// Neural-layer primitives with hand-written backward passes. Forward
// functions are pure; backward functions take the forward inputs (or a
// cache) plus the upstream gradient.

#include <cmath>
#include <stdexcept>
#include <string>

#include "plsv/matrix.h"
#include "plsv/rng.h"
#include "plsv/sparse.h"

namespace plsv {

enum class Mode { kTraining, kInference };

// y = x W + b, with b broadcast over rows. b is 1 x O.
template <typename T>
Matrix<T> Linear(const Matrix<T>& x, const Matrix<T>& w, const Matrix<T>& b) {
  if (x.cols() != w.rows())
    throw std::invalid_argument("Linear: x is " + x.ShapeString() +
                                " but W is " + w.ShapeString());
  RequireShape(b, 1, w.cols(), "Linear bias");
  const size_t out = w.cols();
  Matrix<T> y(x.rows(), out);
  for (size_t i = 0; i < x.rows(); ++i) {
    T* yr = y.row(i).data();
    for (size_t o = 0; o < out; ++o) yr[o] = b[o];
    for (size_t k = 0; k < x.cols(); ++k) {
      const T a = x(i, k);
      if (a == T(0)) continue;
      const T* wr = w.row(k).data();
      for (size_t o = 0; o < out; ++o) yr[o] += a * wr[o];
    }
  }
  return y;
}

// dW = x^T dy, db = colsum(dy); dx = dy W^T when requested.
template <typename T>
void LinearBackward(const Matrix<T>& x, const Matrix<T>& w,
                    const Matrix<T>& dy, Matrix<T>* dx, Matrix<T>& dw,
                    Matrix<T>& db) {
  RequireShape(dy, x.rows(), w.cols(), "LinearBackward dy");
  const size_t out = w.cols();
  dw = Matrix<T>(w.rows(), out);
  db = Matrix<T>(1, out);
  for (size_t i = 0; i < x.rows(); ++i) {
    const T* dyr = dy.row(i).data();
    for (size_t o = 0; o < out; ++o) db[o] += dyr[o];
    for (size_t k = 0; k < x.cols(); ++k) {
      const T a = x(i, k);
      if (a == T(0)) continue;
      T* dwr = dw.row(k).data();
      for (size_t o = 0; o < out; ++o) dwr[o] += a * dyr[o];
    }
  }
  if (dx != nullptr) {
    const size_t in = x.cols();
    Matrix<T> wt(out, in);
    for (size_t k = 0; k < in; ++k)
      for (size_t o = 0; o < out; ++o) wt(o, k) = w(k, o);
    *dx = Matrix<T>(x.rows(), in);
    for (size_t i = 0; i < x.rows(); ++i) {
      const T* dyr = dy.row(i).data();
      T* dxr = dx->row(i).data();
      for (size_t o = 0; o < out; ++o) {
        const T a = dyr[o];
        if (a == T(0)) continue;
        const T* wr = wt.row(o).data();
        for (size_t k = 0; k < in; ++k) dxr[k] += a * wr[k];
      }
    }
  }
}

// Linear layer whose input is a sparse count matrix.
template <typename T>
Matrix<T> SparseLinear(const SparseCounts& x, const Matrix<T>& w,
                       const Matrix<T>& b) {
  if (x.cols() != w.rows())
    throw std::invalid_argument(
        "SparseLinear: input has " + std::to_string(x.cols()) +
        " columns but W is " + w.ShapeString());
  RequireShape(b, 1, w.cols(), "SparseLinear bias");
  const size_t out = w.cols();
  Matrix<T> y(x.rows(), out);
  for (size_t i = 0; i < x.rows(); ++i) {
    T* yr = y.row(i).data();
    for (size_t o = 0; o < out; ++o) yr[o] = b[o];
    for (size_t k = x.row_begin(i); k < x.row_end(i); ++k) {
      const T a = static_cast<T>(x.count_at(k));
      const T* wr = w.row(x.col_at(k)).data();
      for (size_t o = 0; o < out; ++o) yr[o] += a * wr[o];
    }
  }
  return y;
}

template <typename T>
void SparseLinearBackward(const SparseCounts& x, const Matrix<T>& dy,
                          Matrix<T>& dw, Matrix<T>& db) {
  const size_t out = dy.cols();
  dw = Matrix<T>(x.cols(), out);
  db = Matrix<T>(1, out);
  for (size_t i = 0; i < x.rows(); ++i) {
    const T* dyr = dy.row(i).data();
    for (size_t o = 0; o < out; ++o) db[o] += dyr[o];
    for (size_t k = x.row_begin(i); k < x.row_end(i); ++k) {
      const T a = static_cast<T>(x.count_at(k));
      T* dwr = dw.row(x.col_at(k)).data();
      for (size_t o = 0; o < out; ++o) dwr[o] += a * dyr[o];
    }
  }
}

template <typename T>
T Softplus(T x) {
  return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}

template <typename T>
T Sigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
Matrix<T> Softplus(const Matrix<T>& x) {
  Matrix<T> y(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) y[i] = Softplus(x[i]);
  return y;
}

template <typename T>
Matrix<T> SoftplusBackward(const Matrix<T>& x, const Matrix<T>& dy) {
  Matrix<T> dx(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) dx[i] = dy[i] * Sigmoid(x[i]);
  return dx;
}

// Row-wise softmax with max subtraction.
template <typename T>
Matrix<T> SoftmaxRows(const Matrix<T>& x) {
  Matrix<T> y(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i) {
    auto in = x.row(i);
    auto out = y.row(i);
    T mx = in[0];
    for (T v : in) mx = std::max(mx, v);
    T sum = 0;
    for (size_t j = 0; j < in.size(); ++j) {
      out[j] = std::exp(in[j] - mx);
      sum += out[j];
    }
    for (T& v : out) v /= sum;
  }
  return y;
}

// dx_j = y_j (dy_j - sum_k y_k dy_k), row by row.
template <typename T>
Matrix<T> SoftmaxRowsBackward(const Matrix<T>& y, const Matrix<T>& dy) {
  Matrix<T> dx(y.rows(), y.cols());
  for (size_t i = 0; i < y.rows(); ++i) {
    auto yr = y.row(i);
    auto dyr = dy.row(i);
    T dot = 0;
    for (size_t j = 0; j < yr.size(); ++j) dot += yr[j] * dyr[j];
    for (size_t j = 0; j < yr.size(); ++j) dx(i, j) = yr[j] * (dyr[j] - dot);
  }
  return dx;
}

template <typename T>
struct BatchNormCache {
  Mode mode = Mode::kTraining;
  Matrix<T> xhat;
  Matrix<T> inv_std;     // 1 x F
  Matrix<T> batch_mean;  // 1 x F, training mode only
  Matrix<T> batch_var;   // 1 x F, biased, training mode only
};

// Per-feature batch normalization. Running statistics follow
// running = momentum * running + (1 - momentum) * batch.
template <typename T>
struct BatchNorm {
  Matrix<T> gain;
  Matrix<T> bias;
  Matrix<T> running_mean;
  Matrix<T> running_var;
  double momentum = 0.99;
  double eps = 1e-5;

  BatchNorm() = default;
  explicit BatchNorm(size_t features, double momentum_ = 0.99,
                     double eps_ = 1e-5)
      : gain(1, features, T(1)),
        bias(1, features, T(0)),
        running_mean(1, features, T(0)),
        running_var(1, features, T(1)),
        momentum(momentum_),
        eps(eps_) {}

  size_t features() const { return gain.cols(); }

  Matrix<T> Forward(const Matrix<T>& x, Mode mode,
                    BatchNormCache<T>* cache) const {
    const size_t n = x.rows(), f = x.cols();
    RequireShape(gain, 1, f, "BatchNorm gain");
    BatchNormCache<T> local;
    BatchNormCache<T>& c = cache != nullptr ? *cache : local;
    c.mode = mode;
    c.inv_std = Matrix<T>(1, f);
    c.xhat = Matrix<T>(n, f);
    if (mode == Mode::kTraining) {
      if (n < 2)
        throw std::invalid_argument(
            "BatchNorm: training mode needs a batch of at least 2 rows");
      c.batch_mean = Matrix<T>(1, f);
      c.batch_var = Matrix<T>(1, f);
      for (size_t j = 0; j < f; ++j) {
        double mean = 0;
        for (size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0;
        for (size_t i = 0; i < n; ++i) {
          const double d = x(i, j) - mean;
          var += d * d;
        }
        var /= static_cast<double>(n);
        c.batch_mean[j] = static_cast<T>(mean);
        c.batch_var[j] = static_cast<T>(var);
        c.inv_std[j] = static_cast<T>(1.0 / std::sqrt(var + eps));
      }
    } else {
      for (size_t j = 0; j < f; ++j)
        c.inv_std[j] = static_cast<T>(1.0 / std::sqrt(running_var[j] + eps));
    }
    const Matrix<T>& center =
        mode == Mode::kTraining ? c.batch_mean : running_mean;
    Matrix<T> y(n, f);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < f; ++j) {
        const T xh = (x(i, j) - center[j]) * c.inv_std[j];
        c.xhat(i, j) = xh;
        y(i, j) = gain[j] * xh + bias[j];
      }
    }
    return y;
  }

  // Returns dx; writes dgain and dbias (1 x F).
  Matrix<T> Backward(const BatchNormCache<T>& c, const Matrix<T>& dy,
                     Matrix<T>& dgain, Matrix<T>& dbias) const {
    const size_t n = dy.rows(), f = dy.cols();
    dgain = Matrix<T>(1, f);
    dbias = Matrix<T>(1, f);
    Matrix<T> dx(n, f);
    for (size_t j = 0; j < f; ++j) {
      T sum_dy = 0, sum_dy_xhat = 0;
      for (size_t i = 0; i < n; ++i) {
        sum_dy += dy(i, j);
        sum_dy_xhat += dy(i, j) * c.xhat(i, j);
      }
      dgain[j] = sum_dy_xhat;
      dbias[j] = sum_dy;
      if (c.mode == Mode::kTraining) {
        const T scale = gain[j] * c.inv_std[j] / static_cast<T>(n);
        for (size_t i = 0; i < n; ++i) {
          dx(i, j) = scale * (static_cast<T>(n) * dy(i, j) - sum_dy -
                              c.xhat(i, j) * sum_dy_xhat);
        }
      } else {
        for (size_t i = 0; i < n; ++i)
          dx(i, j) = dy(i, j) * gain[j] * c.inv_std[j];
      }
    }
    return dx;
  }

  void UpdateRunningStats(const BatchNormCache<T>& c) {
    if (c.mode != Mode::kTraining) return;
    const T m = static_cast<T>(momentum);
    for (size_t j = 0; j < features(); ++j) {
      running_mean[j] = m * running_mean[j] + (T(1) - m) * c.batch_mean[j];
      running_var[j] = m * running_var[j] + (T(1) - m) * c.batch_var[j];
    }
  }
};

// Inverted dropout. The returned mask holds 0 or 1/(1-p) per entry; the
// backward pass is dy * mask.
template <typename T>
Matrix<T> Dropout(const Matrix<T>& x, double p_drop, Rng& rng, Mode mode,
                  Matrix<T>* mask) {
  if (!(p_drop >= 0.0 && p_drop < 1.0))
    throw std::invalid_argument("Dropout: drop probability must be in [0,1), got " +
                                std::to_string(p_drop));
  Matrix<T> m(x.rows(), x.cols(), T(1));
  if (mode == Mode::kTraining && p_drop > 0.0) {
    const T keep_scale = static_cast<T>(1.0 / (1.0 - p_drop));
    for (size_t i = 0; i < m.size(); ++i)
      m[i] = rng.Uniform() < p_drop ? T(0) : keep_scale;
  }
  Matrix<T> y(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * m[i];
  if (mask != nullptr) *mask = std::move(m);
  return y;
}

}  // namespace plsv
