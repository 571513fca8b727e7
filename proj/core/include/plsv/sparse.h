#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "plsv/matrix.h"

namespace plsv {

// Compressed sparse rows of non-negative integer counts (documents x words).
// Column indices within a row are strictly ascending.
class SparseCounts {
 public:
  SparseCounts() : row_ptr_{0} {}
  explicit SparseCounts(size_t cols) : cols_(cols), row_ptr_{0} {}

  // Appends a row given (column, count) pairs sorted by column. Zero counts
  // are skipped.
  void AppendRow(std::span<const uint32_t> cols,
                 std::span<const uint32_t> counts) {
    if (cols.size() != counts.size())
      throw std::invalid_argument("SparseCounts: cols/counts length mismatch");
    for (size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] >= cols_)
        throw std::out_of_range("SparseCounts: column " +
                                std::to_string(cols[i]) + " >= " +
                                std::to_string(cols_));
      if (i > 0 && cols[i] <= cols[i - 1])
        throw std::invalid_argument("SparseCounts: columns not ascending");
      if (counts[i] == 0) continue;
      col_.push_back(cols[i]);
      val_.push_back(counts[i]);
    }
    row_ptr_.push_back(col_.size());
  }

  size_t rows() const { return row_ptr_.size() - 1; }
  size_t cols() const { return cols_; }
  size_t nnz() const { return col_.size(); }

  size_t row_begin(size_t r) const { return row_ptr_[r]; }
  size_t row_end(size_t r) const { return row_ptr_[r + 1]; }
  std::span<const uint32_t> row_cols(size_t r) const {
    return {col_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const uint32_t> row_counts(size_t r) const {
    return {val_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  uint32_t col_at(size_t k) const { return col_[k]; }
  uint32_t count_at(size_t k) const { return val_[k]; }

  uint64_t RowTotal(size_t r) const {
    uint64_t total = 0;
    for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) total += val_[k];
    return total;
  }

  SparseCounts Gather(std::span<const size_t> rows) const {
    SparseCounts out(cols_);
    for (size_t r : rows) out.AppendRow(row_cols(r), row_counts(r));
    return out;
  }

  template <typename T>
  Matrix<T> ToDense() const {
    Matrix<T> m(rows(), cols_);
    for (size_t r = 0; r < rows(); ++r)
      for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        m(r, col_[k]) = static_cast<T>(val_[k]);
    return m;
  }

  template <typename T>
  static SparseCounts FromDense(const Matrix<T>& m) {
    SparseCounts out(m.cols());
    std::vector<uint32_t> cols, counts;
    for (size_t r = 0; r < m.rows(); ++r) {
      cols.clear();
      counts.clear();
      for (size_t c = 0; c < m.cols(); ++c) {
        if (m(r, c) < 0)
          throw std::invalid_argument("SparseCounts: negative count");
        if (m(r, c) > 0) {
          cols.push_back(static_cast<uint32_t>(c));
          counts.push_back(static_cast<uint32_t>(m(r, c)));
        }
      }
      out.AppendRow(cols, counts);
    }
    return out;
  }

  bool operator==(const SparseCounts&) const = default;

 private:
  size_t cols_ = 0;
  std::vector<size_t> row_ptr_;
  std::vector<uint32_t> col_;
  std::vector<uint32_t> val_;
};

}  // namespace plsv
