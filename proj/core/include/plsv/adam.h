#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plsv {

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamOptions {
  double lr = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct ParamBlock {
  std::string_view name;
  std::span<T> value;
  std::span<const T> grad;
};

// Adam with bias correction. Minimizes: value -= lr * mhat / (sqrt(vhat)+eps).
// Moment buffers are created on the first step; later steps must present the
// same blocks in the same order.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  void Step(std::span<const ParamBlock<T>> blocks) {
    for (const auto& b : blocks) {
      if (b.value.size() != b.grad.size())
        throw std::invalid_argument("Adam: gradient shape mismatch for '" +
                                    std::string(b.name) + "'");
      for (T g : b.grad) {
        if (!std::isfinite(g))
          throw NonFiniteError("Adam: non-finite gradient in parameter block '" +
                               std::string(b.name) + "'");
      }
    }
    if (m_.empty()) {
      for (const auto& b : blocks) {
        m_.emplace_back(b.value.size(), T(0));
        v_.emplace_back(b.value.size(), T(0));
      }
    }
    if (m_.size() != blocks.size())
      throw std::invalid_argument("Adam: parameter block count changed");
    ++t_;
    const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
    const T b1 = static_cast<T>(options_.beta1);
    const T b2 = static_cast<T>(options_.beta2);
    const T step = static_cast<T>(options_.lr / c1);
    const T inv_c2 = static_cast<T>(1.0 / c2);
    const T eps = static_cast<T>(options_.eps);
    for (size_t k = 0; k < blocks.size(); ++k) {
      const auto& b = blocks[k];
      if (m_[k].size() != b.value.size())
        throw std::invalid_argument("Adam: size changed for '" +
                                    std::string(b.name) + "'");
      T* m = m_[k].data();
      T* v = v_[k].data();
      for (size_t i = 0; i < b.value.size(); ++i) {
        const T g = b.grad[i];
        m[i] = b1 * m[i] + (T(1) - b1) * g;
        v[i] = b2 * v[i] + (T(1) - b2) * g * g;
        b.value[i] -= step * m[i] / (std::sqrt(v[i] * inv_c2) + eps);
      }
    }
  }

  long long t() const { return t_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<std::vector<T>>& first_moments() const { return m_; }
  const std::vector<std::vector<T>>& second_moments() const { return v_; }

 private:
  AdamOptions options_;
  long long t_ = 0;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
};

}  // namespace plsv
