#include "spx/hsi.hpp"

#include <algorithm>
#include <cmath>

namespace spx {

std::size_t Spectrum::measured_count() const {
  return static_cast<std::size_t>(
      std::count(measured.begin(), measured.end(), std::uint8_t{1}));
}

double Spectrum::sampling_rate() const {
  return coefficients.empty()
             ? 0.0
             : static_cast<double>(measured_count()) / coefficients.size();
}

Spectrum acquire_spectrum(const Frame& frame, const OrderedSequence& seq,
                          std::size_t budget, Detector& detector) {
  const std::size_t n = seq.n;
  if (frame.side() != n) {
    throw SizeError("frame side does not match the ordering side");
  }
  if (budget > n * n) {
    throw ConfigError("pattern budget exceeds n^2");
  }
  Spectrum s{n, std::vector<double>(n * n, 0.0),
             std::vector<std::uint8_t>(n * n, 0)};
  for (std::size_t i = 0; i < budget; ++i) {
    const std::size_t k = seq.order[i];
    s.coefficients[k] = detector.differential_measure(pattern_from_row(n, k), frame);
    s.measured[k] = 1;
  }
  return s;
}

Image reconstruct(const Spectrum& spectrum) {
  const std::size_t n = spectrum.n;
  if (spectrum.coefficients.size() != n * n) {
    throw SizeError("spectrum length does not match n^2");
  }
  std::vector<double> v = spectrum.coefficients;
  fwht_inplace(v);
  const double scale = 1.0 / static_cast<double>(n * n);
  for (double& x : v) x *= scale;
  return Image(n, n, std::move(v));
}

double rmse(const Image& img, const Image& ref) {
  require_same_shape(img.rows(), img.cols(), ref.rows(), ref.cols(), "rmse");
  if (img.empty()) return 0.0;
  double acc = 0.0;
  const auto a = img.values();
  const auto b = ref.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double psnr(const Image& img, const Image& ref, double peak) {
  if (!(peak > 0.0)) throw ConfigError("psnr peak must be positive");
  const double e = rmse(img, ref);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / e);
}

std::vector<QualityReport> rate_sweep(const Frame& frame,
                                      const OrderedSequence& seq,
                                      std::span<const double> rates,
                                      Detector& detector, double peak,
                                      std::vector<Image>* images) {
  const double total = static_cast<double>(seq.n * seq.n);
  std::vector<QualityReport> out;
  for (double rate : rates) {
    if (!(rate > 0.0 && rate <= 1.0)) {
      throw ConfigError("sampling rates must lie in (0, 1]");
    }
  }
  for (double rate : rates) {
    const auto budget = static_cast<std::size_t>(std::llround(rate * total));
    const Spectrum s = acquire_spectrum(frame, seq, budget, detector);
    Image img = reconstruct(s);
    out.push_back({seq.method.to_string(), rate, psnr(img, frame.pixels(), peak),
                   rmse(img, frame.pixels())});
    if (images) images->push_back(std::move(img));
  }
  return out;
}

}  // namespace spx
