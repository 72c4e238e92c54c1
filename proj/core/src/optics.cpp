#include "spx/optics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace spx {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// UniformRandomBitGenerator walking splitmix64 from a per-display key.
class CounterStream {
 public:
  using result_type = std::uint64_t;
  explicit CounterStream(std::uint64_t key) : state_(key) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    return splitmix64(state_);
  }

 private:
  std::uint64_t state_;
};

}  // namespace

Frame::Frame(Image pixels) : pixels_(std::move(pixels)) {
  if (!pixels_.square() || pixels_.empty()) {
    throw SizeError("frame must be a nonempty square grid");
  }
  for (double v : pixels_.values()) {
    if (!(v >= 0.0)) {
      throw ConfigError("frame intensities must be nonnegative");
    }
  }
}

Frame Frame::uniform(std::size_t side, double value) {
  return Frame(Image(side, side, value));
}

double Frame::total() const {
  const auto v = pixels_.values();
  return std::accumulate(v.begin(), v.end(), 0.0);
}

Sprite Sprite::solid(std::size_t height, std::size_t width, double value) {
  return Sprite{Image(height, width, value), BinaryGrid(height, width, 1)};
}

SpriteScene::SpriteScene(Frame background, std::vector<Sprite> sprites,
                         std::vector<Position> trajectory)
    : background_(std::move(background)),
      sprites_(std::move(sprites)),
      trajectory_(std::move(trajectory)) {
  if (sprites_.empty()) {
    throw ConfigError("scene needs at least one sprite");
  }
  if (sprites_.size() != 1 && sprites_.size() != trajectory_.size()) {
    throw ConfigError("scene needs one sprite, or one sprite per frame");
  }
  for (const auto& s : sprites_) {
    require_same_shape(s.intensity.rows(), s.intensity.cols(), s.mask.rows(),
                       s.mask.cols(), "sprite intensity vs mask");
    for (double v : s.intensity.values()) {
      if (!(v >= 0.0)) {
        throw ConfigError("sprite intensities must be nonnegative");
      }
    }
  }
}

const Sprite& SpriteScene::sprite(std::size_t t) const {
  return sprites_.size() == 1 ? sprites_.front() : sprites_.at(t);
}

std::optional<Box> SpriteScene::ground_truth(std::size_t t) const {
  if (t >= frames()) {
    throw IndexError("frame index out of range");
  }
  const Sprite& s = sprite(t);
  const Position at = trajectory_[t];
  const int n = static_cast<int>(side());
  Box box{n, -1, n, -1};
  bool any = false;
  for (std::size_t r = 0; r < s.mask.rows(); ++r) {
    for (std::size_t c = 0; c < s.mask.cols(); ++c) {
      if (!s.mask(r, c)) continue;
      const int x = at.x + static_cast<int>(r);
      const int y = at.y + static_cast<int>(c);
      if (x < 0 || y < 0 || x >= n || y >= n) continue;
      any = true;
      box.x1 = std::min(box.x1, x);
      box.x2 = std::max(box.x2, x + 1);
      box.y1 = std::min(box.y1, y);
      box.y2 = std::max(box.y2, y + 1);
    }
  }
  if (!any) return std::nullopt;
  return box;
}

Frame composite(const SpriteScene& scene, std::size_t sprite_index,
                Position at) {
  Image out = scene.background().pixels();
  const Sprite& s = scene.sprite(sprite_index);
  const int n = static_cast<int>(scene.side());
  for (std::size_t r = 0; r < s.mask.rows(); ++r) {
    const int x = at.x + static_cast<int>(r);
    if (x < 0 || x >= n) continue;
    for (std::size_t c = 0; c < s.mask.cols(); ++c) {
      const int y = at.y + static_cast<int>(c);
      if (y < 0 || y >= n || !s.mask(r, c)) continue;
      out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
          s.intensity(r, c);
    }
  }
  return Frame(std::move(out));
}

Frame render_frame(const SpriteScene& scene, std::size_t t) {
  if (t >= scene.frames()) {
    throw IndexError("frame index " + std::to_string(t) + " out of range");
  }
  return composite(scene, t, scene.trajectory()[t]);
}

void DetectorModel::validate() const {
  if (!(gain > 0.0)) throw ConfigError("detector gain must be positive");
  if (!(noise_sigma >= 0.0)) {
    throw ConfigError("detector noise_sigma must be nonnegative");
  }
  if (samples_per_display < 1) {
    throw ConfigError("samples_per_display must be at least 1");
  }
}

double noise_reference(const Frame& background, double gain) {
  return gain * background.total();
}

Detector::Detector(DetectorModel model, double reference)
    : model_(model), reference_(reference) {
  model_.validate();
  if (!(reference_ >= 0.0)) {
    throw ConfigError("noise reference must be nonnegative");
  }
}

double Detector::read(std::uint64_t display, double noiseless) const {
  const double clean = model_.gain * noiseless;
  const double sd = model_.noise_sigma * reference_;
  if (sd == 0.0) {
    return clean;
  }
  CounterStream stream(splitmix64(model_.seed) ^ splitmix64(~display));
  std::normal_distribution<double> noise(0.0, sd);
  double acc = 0.0;
  for (unsigned i = 0; i < model_.samples_per_display; ++i) {
    acc += clean + noise(stream);
  }
  return acc / model_.samples_per_display;
}

double inner_product(const BinaryGrid& mask, const Frame& frame) {
  require_same_shape(mask.rows(), mask.cols(), frame.side(), frame.side(),
                     "measure");
  const auto m = mask.values();
  const auto f = frame.pixels().values();
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) acc += f[i];
  }
  return acc;
}

double inner_product(const Pattern& p, const Frame& frame) {
  const std::size_t n = p.side();
  require_same_shape(n, n, frame.side(), frame.side(), "measure");
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto words = p.row_words(r);
    const auto row = frame.pixels().row(r);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        acc += row[w * 64 + static_cast<std::size_t>(b)];
        bits &= bits - 1;
      }
    }
  }
  return acc;
}

double Detector::measure(const BinaryGrid& mask, const Frame& frame) {
  return measure_value(inner_product(mask, frame));
}

double Detector::measure(const Pattern& p, const Frame& frame) {
  return measure_value(inner_product(p, frame));
}

double Detector::differential_measure(const Pattern& p, const Frame& frame) {
  if (p.polarity() != Polarity::positive) {
    throw UsageError("differential_measure expects a positive pattern");
  }
  const double positive = inner_product(p, frame);
  const double complement = frame.total() - positive;
  const double d_plus = measure_value(positive);
  const double d_minus = measure_value(complement);
  return d_plus - d_minus;
}

void TimingModel::validate(unsigned samples_per_display) const {
  if (!(dmd_rate_hz > 0.0) || !(daq_rate_sps > 0.0)) {
    throw ConfigError("timing rates must be positive");
  }
  if (displays_per_frame < 1) {
    throw ConfigError("displays_per_frame must be at least 1");
  }
  if (daq_rate_sps / dmd_rate_hz < static_cast<double>(samples_per_display)) {
    throw ConfigError("DAQ rate cannot supply " +
                      std::to_string(samples_per_display) +
                      " samples per display at the DMD refresh rate");
  }
}

TimingReport timing_report(const TimingModel& tm, std::size_t n) {
  if (tm.displays_per_frame < 1 || !(tm.dmd_rate_hz > 0.0)) {
    throw ConfigError("timing model needs positive rate and displays");
  }
  TimingReport r;
  const double displays = static_cast<double>(tm.displays_per_frame);
  r.fps = tm.dmd_rate_hz / displays;
  r.time_resolution_s = displays / tm.dmd_rate_hz;
  r.sampling_rate = displays / static_cast<double>(n * n);
  return r;
}

}  // namespace spx
