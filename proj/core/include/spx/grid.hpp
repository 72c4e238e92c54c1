#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spx/error.hpp"

namespace spx {

/// Dense row-major 2-D array. Cell (r, c) lives at r * cols + c.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw SizeError("grid data does not match its dimensions");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(data_).subspan(r * cols_, cols_);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using BinaryGrid = Grid<std::uint8_t>;
using Image = Grid<double>;

inline void require_same_shape(std::size_t r0, std::size_t c0, std::size_t r1,
                               std::size_t c1, const char* what) {
  if (r0 != r1 || c0 != c1) {
    throw SizeError(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace spx
