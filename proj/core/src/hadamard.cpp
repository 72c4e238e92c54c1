#include "spx/hadamard.hpp"

#include <string>

namespace spx {

unsigned exact_log2(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw SizeError("size " + std::to_string(n) + " is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(n));
}

HadamardMatrix build_matrix(unsigned k, std::size_t order_limit) {
  if (k == 0) {
    throw SizeError("Hadamard order must be at least 2 (k >= 1)");
  }
  if (k >= 63 || (std::size_t{1} << k) > order_limit) {
    throw SizeError("Hadamard order 2^" + std::to_string(k) +
                    " exceeds the materialization limit of " +
                    std::to_string(order_limit));
  }

  // Grow H_m into H_2m = H_m (x) H_2 one factor at a time:
  // H_2m(i, j) = H_m(i/2, j/2) * H_2(i%2, j%2).
  static constexpr std::int8_t h2[2][2] = {{1, 1}, {1, -1}};
  std::vector<std::int8_t> current{1};
  std::size_t m = 1;
  for (unsigned step = 0; step < k; ++step) {
    const std::size_t next = 2 * m;
    std::vector<std::int8_t> grown(next * next);
    for (std::size_t i = 0; i < next; ++i) {
      for (std::size_t j = 0; j < next; ++j) {
        grown[i * next + j] = static_cast<std::int8_t>(
            current[(i / 2) * m + j / 2] * h2[i % 2][j % 2]);
      }
    }
    current = std::move(grown);
    m = next;
  }

  HadamardMatrix h;
  h.order_ = m;
  h.entries_ = std::move(current);
  return h;
}

// Row k of H_{n^2} at flat position r*n + c factors as
// sign(k_r & r) * sign(k_c & c) with k = k_r*n + k_c, so every pattern row is
// the 1-D profile of k_c or its complement.
Pattern::Pattern(std::size_t side, std::size_t index)
    : side_(side), index_(index), words_per_row_((side + 63) / 64) {
  const unsigned shift = exact_log2(side);
  if (shift >= 32) {
    throw SizeError("pattern side too large");
  }
  if (index >= side * side) {
    throw IndexError("pattern index " + std::to_string(index) +
                     " out of range for side " + std::to_string(side));
  }
  const std::size_t row_sel = index >> shift;
  const std::size_t col_sel = index & (side - 1);

  std::vector<std::uint64_t> base(words_per_row_, 0);
  for (std::size_t c = 0; c < side; ++c) {
    if (hadamard_sign(col_sel, c) > 0) {
      base[c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  std::vector<std::uint64_t> flipped(words_per_row_);
  for (std::size_t w = 0; w < words_per_row_; ++w) {
    flipped[w] = ~base[w];
  }
  if (side % 64 != 0) {
    flipped.back() &= (std::uint64_t{1} << (side % 64)) - 1;
  }

  bits_.resize(side * words_per_row_);
  for (std::size_t r = 0; r < side; ++r) {
    const auto& src = hadamard_sign(row_sel, r) > 0 ? base : flipped;
    std::copy(src.begin(), src.end(), bits_.begin() + r * words_per_row_);
  }
}

Pattern Pattern::complement() const {
  Pattern out = *this;
  out.polarity_ = polarity_ == Polarity::positive ? Polarity::complement
                                                  : Polarity::positive;
  const std::uint64_t tail_mask =
      side_ % 64 == 0 ? ~std::uint64_t{0}
                      : (std::uint64_t{1} << (side_ % 64)) - 1;
  for (std::size_t r = 0; r < side_; ++r) {
    for (std::size_t w = 0; w < words_per_row_; ++w) {
      auto& word = out.bits_[r * words_per_row_ + w];
      word = ~word;
      if (w + 1 == words_per_row_) {
        word &= tail_mask;
      }
    }
  }
  return out;
}

BinaryGrid Pattern::to_grid() const {
  BinaryGrid g(side_, side_);
  for (std::size_t r = 0; r < side_; ++r) {
    for (std::size_t c = 0; c < side_; ++c) {
      g(r, c) = cell(r, c) ? 1 : 0;
    }
  }
  return g;
}

std::size_t Pattern::white_count() const {
  std::size_t total = 0;
  for (auto w : bits_) {
    total += static_cast<std::size_t>(std::popcount(w));
  }
  return total;
}

Pattern pattern_from_row(std::size_t n, std::size_t k) {
  return Pattern(n, k);
}

std::vector<std::uint8_t> binary_profile(std::size_t n, std::size_t j) {
  exact_log2(n);
  if (j >= n) {
    throw IndexError("profile index out of range");
  }
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = hadamard_sign(j, i) > 0 ? 1 : 0;
  }
  return out;
}

void fwht_inplace(std::span<double> v) {
  exact_log2(v.size());
  const std::size_t len = v.size();
  for (std::size_t h = 1; h < len; h *= 2) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

std::vector<double> fwht(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  fwht_inplace(out);
  return out;
}

}  // namespace spx
