#pragma once

#include <string>
#include <vector>

#include "plsv/matrix.h"
#include "plsv/rng.h"
#include "plsv/sparse.h"

namespace plsv::testing {

// Random count matrix with every row non-empty.
inline SparseCounts RandomCounts(size_t rows, size_t cols, Rng& rng,
                                 double density = 0.3, uint32_t max_count = 4) {
  SparseCounts out(cols);
  std::vector<uint32_t> c, v;
  for (size_t r = 0; r < rows; ++r) {
    c.clear();
    v.clear();
    for (size_t j = 0; j < cols; ++j) {
      if (rng.Uniform() < density || (j + 1 == cols && c.empty())) {
        c.push_back(static_cast<uint32_t>(j));
        v.push_back(1 + static_cast<uint32_t>(rng.Uniform() * max_count));
      }
    }
    out.AppendRow(c, v);
  }
  return out;
}

template <typename T>
Matrix<T> RandomMatrix(size_t rows, size_t cols, Rng& rng, double scale = 1.0) {
  Matrix<T> m(rows, cols);
  for (T& v : m.values()) v = static_cast<T>(scale * rng.Normal());
  return m;
}

}  // namespace plsv::testing
