#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spx/optics.hpp"
#include "spx/ordering.hpp"

namespace spx {

/// Partial differential Hadamard spectrum indexed by pattern index.
struct Spectrum {
  std::size_t n = 0;
  std::vector<double> coefficients;   ///< n^2 values, 0 where unmeasured
  std::vector<std::uint8_t> measured; ///< 1 where a coefficient was acquired

  std::size_t measured_count() const;
  double sampling_rate() const;
};

/// Measures the first `budget` patterns of `seq` differentially.
/// Throws ConfigError when budget > n^2, SizeError when `frame` and `seq`
/// disagree on n.
Spectrum acquire_spectrum(const Frame& frame, const OrderedSequence& seq,
                          std::size_t budget, Detector& detector);

/// (1 / n^2) * H_{n^2} * coefficients reshaped row-major; O(n^2 log n).
Image reconstruct(const Spectrum& spectrum);

inline constexpr double kDefaultPeak = 255.0;

double rmse(const Image& img, const Image& ref);
/// 20 log10(peak / rmse); +infinity when rmse == 0.
double psnr(const Image& img, const Image& ref, double peak = kDefaultPeak);

struct QualityReport {
  std::string method;
  double sampling_rate = 0.0;
  double psnr_db = 0.0;
  double rmse = 0.0;
};

/// One acquire + reconstruct + score per rate with budget round(rate * n^2).
/// Rates must lie in (0, 1]. When `images` is given it receives each
/// reconstruction in rate order.
std::vector<QualityReport> rate_sweep(const Frame& frame,
                                      const OrderedSequence& seq,
                                      std::span<const double> rates,
                                      Detector& detector,
                                      double peak = kDefaultPeak,
                                      std::vector<Image>* images = nullptr);

}  // namespace spx
