#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into spx for the quantity being checked.

#include <cstddef>
#include <cstdint>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "spx/grid.hpp"
#include "spx/optics.hpp"

namespace spx::oracle {

using IntMatrix = std::vector<std::vector<int>>;

// Sylvester matrix by explicit block doubling.
inline IntMatrix hadamard(std::size_t order) {
  IntMatrix h{{1}};
  while (h.size() < order) {
    const std::size_t m = h.size();
    IntMatrix next(2 * m, std::vector<int>(2 * m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        next[i][j] = h[i][j];
        next[i][j + m] = h[i][j];
        next[i + m][j] = h[i][j];
        next[i + m][j + m] = -h[i][j];
      }
    }
    h = std::move(next);
  }
  return h;
}

inline std::vector<double> matvec(const IntMatrix& h, const std::vector<double>& v) {
  std::vector<double> out(h.size(), 0.0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += h[i][j] * v[j];
  }
  return out;
}

// Component sizes via BFS; `target` is the cell value to label.
inline std::vector<std::size_t> components(const BinaryGrid& g, bool eight,
                                           std::uint8_t target) {
  const std::size_t R = g.rows(), C = g.cols();
  std::vector<char> seen(R * C, 0);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < R * C; ++s) {
    if (seen[s] || (g.values()[s] != 0) != (target != 0)) continue;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    std::size_t count = 0;
    while (!q.empty()) {
      const std::size_t cur = q.front();
      q.pop();
      ++count;
      const long r = static_cast<long>(cur / C), c = static_cast<long>(cur % C);
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (!eight && dr != 0 && dc != 0) continue;
          const long rr = r + dr, cc = c + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<long>(R) ||
              cc >= static_cast<long>(C)) {
            continue;
          }
          const std::size_t idx = static_cast<std::size_t>(rr) * C +
                                  static_cast<std::size_t>(cc);
          if (seen[idx] || (g.values()[idx] != 0) != (target != 0)) continue;
          seen[idx] = 1;
          q.push(idx);
        }
      }
    }
    sizes.push_back(count);
  }
  return sizes;
}

// Pattern k of side n straight from the doubled matrix.
inline BinaryGrid pattern(const IntMatrix& h, std::size_t n, std::size_t k) {
  BinaryGrid g(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) g(r, c) = h[k][r * n + c] == 1;
  }
  return g;
}

inline Image random_image(std::size_t n, std::mt19937_64& rng, double lo = 0.0,
                          double hi = 255.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Image img(n, n);
  for (auto& v : img.values()) v = u(rng);
  return img;
}

// Sum over columns (axis x) or rows (axis y).
inline std::vector<double> row_sums(const Image& img) {
  std::vector<double> s(img.rows(), 0.0);
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) s[r] += img(r, c);
  }
  return s;
}

inline std::vector<double> col_sums(const Image& img) {
  std::vector<double> s(img.cols(), 0.0);
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) s[c] += img(r, c);
  }
  return s;
}

}  // namespace spx::oracle
