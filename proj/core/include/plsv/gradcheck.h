#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>

namespace plsv {

// Compares an analytic gradient against central differences
// (f(x+h) - f(x-h)) / 2h, coordinate by coordinate. `params` is perturbed in
// place and restored; `f` must read the current values of `params`. Returns
// max_i |a_i - n_i| / max(1, |a_i|, |n_i|).
template <typename T>
double FiniteDiffCheck(const std::function<double()>& f, std::span<T> params,
                       std::span<const T> analytic, double h) {
  if (params.size() != analytic.size())
    throw std::invalid_argument("FiniteDiffCheck: gradient length mismatch");
  double worst = 0.0;
  for (size_t i = 0; i < params.size(); ++i) {
    const T saved = params[i];
    const T plus = static_cast<T>(saved + h);
    const T minus = static_cast<T>(saved - h);
    params[i] = plus;
    const double f_plus = f();
    params[i] = minus;
    const double f_minus = f();
    params[i] = saved;
    const double numeric = (f_plus - f_minus) /
                           (static_cast<double>(plus) - static_cast<double>(minus));
    const double a = analytic[i];
    const double err = std::abs(a - numeric) /
                       std::max({1.0, std::abs(a), std::abs(numeric)});
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace plsv
