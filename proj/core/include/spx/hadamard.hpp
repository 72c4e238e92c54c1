#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spx/grid.hpp"

namespace spx {

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

/// log2 of a power of two; throws SizeError otherwise.
unsigned exact_log2(std::size_t n);

/// Entry (i, j) of the Sylvester matrix of any order that contains (i, j):
/// +1 when popcount(i & j) is even, -1 otherwise.
constexpr int hadamard_sign(std::uint64_t i, std::uint64_t j) noexcept {
  return (std::popcount(i & j) & 1) ? -1 : 1;
}

/// Largest order build_matrix() materializes by default (16 Mi entries).
inline constexpr std::size_t kDefaultMatrixOrderLimit = 4096;

/// Fully materialized Sylvester Hadamard matrix with +1/-1 entries.
class HadamardMatrix {
 public:
  std::size_t order() const noexcept { return order_; }
  int operator()(std::size_t i, std::size_t j) const {
    return entries_[i * order_ + j];
  }
  std::span<const std::int8_t> row(std::size_t i) const {
    return std::span<const std::int8_t>(entries_).subspan(i * order_, order_);
  }

 private:
  friend HadamardMatrix build_matrix(unsigned, std::size_t);
  std::size_t order_ = 0;
  std::vector<std::int8_t> entries_;
};

/// H_{2^k} built by repeated Kronecker products H_{2m} = H_m (x) H_2.
/// Throws SizeError for k == 0 or when 2^k exceeds `order_limit`.
HadamardMatrix build_matrix(unsigned k,
                            std::size_t order_limit = kDefaultMatrixOrderLimit);

enum class Polarity { positive, complement };

/// n x n binary illumination mask: row `index` of H_{n^2}, reshaped row-major,
/// with +1 -> 1 and -1 -> 0. Rows are stored as packed 64-bit words.
class Pattern {
 public:
  Pattern(std::size_t side, std::size_t index);

  std::size_t side() const noexcept { return side_; }
  std::size_t index() const noexcept { return index_; }
  Polarity polarity() const noexcept { return polarity_; }

  bool cell(std::size_t r, std::size_t c) const {
    return (bits_[r * words_per_row_ + c / 64] >> (c % 64)) & 1u;
  }
  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return std::span<const std::uint64_t>(bits_).subspan(r * words_per_row_,
                                                         words_per_row_);
  }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  Pattern complement() const;
  BinaryGrid to_grid() const;
  std::size_t white_count() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::size_t side_ = 0;
  std::size_t index_ = 0;
  Polarity polarity_ = Polarity::positive;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Pattern for row k of H_{n^2}, generated without materializing H_{n^2}.
/// Throws SizeError if n is not a power of two, IndexError if k >= n^2.
Pattern pattern_from_row(std::size_t n, std::size_t k);

/// Binarized row j of H_n (1 where the entry is +1).
std::vector<std::uint8_t> binary_profile(std::size_t n, std::size_t j);

/// Unnormalized Walsh-Hadamard transform in natural (Sylvester) order:
/// returns H_N * v in O(N log N). Throws SizeError unless N is a power of two.
std::vector<double> fwht(std::span<const double> v);
void fwht_inplace(std::span<double> v);

}  // namespace spx
