#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plsv {

// Row-major dense matrix. Vectors are stored as 1xN matrices.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(size_t rows, size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(size_t rows, size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("Matrix: data length " +
                                  std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows_) +
                                  "x" + std::to_string(cols_));
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool SameShape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool AllFinite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](T v) { return std::isfinite(v); });
  }

  // Byte-level equality; distinguishes -0.0 from 0.0 and compares NaN payloads.
  bool BitwiseEqual(const Matrix& other) const {
    return SameShape(other) &&
           std::memcmp(data_.data(), other.data_.data(),
                       data_.size() * sizeof(T)) == 0;
  }

  Matrix Transposed() const {
    Matrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
      for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  std::string ShapeString() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
void RequireShape(const Matrix<T>& m, size_t rows, size_t cols,
                  const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw std::invalid_argument(std::string(what) + ": expected shape " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols) + ", got " +
                                m.ShapeString());
  }
}

template <typename To, typename From>
Matrix<To> Cast(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (size_t i = 0; i < m.size(); ++i) out[i] = static_cast<To>(m[i]);
  return out;
}

}  // namespace plsv
