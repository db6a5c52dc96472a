#ifndef RD2D_GRID_HPP
#define RD2D_GRID_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rd2d {

// Dense row-major 2-D array.
template<typename T>
class grid2 {
public:
  grid2() = default;
  grid2(std::size_t rows, std::size_t cols, T init = T{})
    : rows_(rows), cols_(cols), data_(rows * cols, init) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  T& at(std::size_t r, std::size_t c)
  {
    check(r, c);
    return data_[r * cols_ + c];
  }
  const T& at(std::size_t r, std::size_t c) const
  {
    check(r, c);
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<T> column(std::size_t c) const
  {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      out[r] = (*this)(r, c);
    return out;
  }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool operator==(const grid2&) const = default;

private:
  void check(std::size_t r, std::size_t c) const
  {
    if (r >= rows_ || c >= cols_)
      throw std::out_of_range("grid2 index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Dense 3-D array, last index fastest.
template<typename T>
class grid3 {
public:
  grid3() = default;
  grid3(std::size_t d0, std::size_t d1, std::size_t d2, T init = T{})
    : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, init) {}

  std::size_t dim0() const { return d0_; }
  std::size_t dim1() const { return d1_; }
  std::size_t dim2() const { return d2_; }

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * d1_ + j) * d2_ + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * d1_ + j) * d2_ + k]; }

  std::span<T> row(std::size_t i, std::size_t j) { return {data_.data() + (i * d1_ + j) * d2_, d2_}; }
  std::span<const T> row(std::size_t i, std::size_t j) const { return {data_.data() + (i * d1_ + j) * d2_, d2_}; }

  const std::vector<T>& data() const { return data_; }

  bool operator==(const grid3&) const = default;

private:
  std::size_t d0_ = 0;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::vector<T> data_;
};

} // namespace rd2d

#endif
