#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spx/grid.hpp"
#include "spx/hadamard.hpp"

namespace spx {

/// Square scene snapshot with nonnegative intensities. Cell (x, y) is stored
/// at x * side + y: x is the first (row) index, y the second (column) index.
class Frame {
 public:
  Frame() = default;
  /// Throws SizeError unless `pixels` is square, ConfigError on negatives.
  explicit Frame(Image pixels);
  static Frame uniform(std::size_t side, double value);

  std::size_t side() const noexcept { return pixels_.rows(); }
  double operator()(std::size_t x, std::size_t y) const { return pixels_(x, y); }
  const Image& pixels() const noexcept { return pixels_; }
  double total() const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  Image pixels_;
};

/// Half-open box [x1, x2) x [y1, y2) in frame coordinates.
struct Box {
  int x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  bool empty() const noexcept { return x1 >= x2 || y1 >= y2; }
  friend bool operator==(const Box&, const Box&) = default;
};

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// Intensity patch with a mask; mask cells that are nonzero replace the
/// background when composited.
struct Sprite {
  Image intensity;
  BinaryGrid mask;

  /// Solid rectangle of `value`.
  static Sprite solid(std::size_t height, std::size_t width, double value);
};

/// Background plus one sprite following a per-frame top-left trajectory.
/// `sprites` holds either a single sprite used for every frame or one sprite
/// per frame (for shape changes such as axial motion).
class SpriteScene {
 public:
  SpriteScene(Frame background, std::vector<Sprite> sprites,
              std::vector<Position> trajectory);

  std::size_t frames() const noexcept { return trajectory_.size(); }
  std::size_t side() const noexcept { return background_.side(); }
  const Frame& background() const noexcept { return background_; }
  const Sprite& sprite(std::size_t t) const;
  const std::vector<Position>& trajectory() const noexcept { return trajectory_; }

  /// Clipped bounding box of the sprite mask in frame t; nullopt when the
  /// sprite is entirely outside the frame.
  std::optional<Box> ground_truth(std::size_t t) const;

 private:
  Frame background_;
  std::vector<Sprite> sprites_;
  std::vector<Position> trajectory_;
};

/// Composite the sprite of frame `sprite_index` at `at` over the background.
Frame composite(const SpriteScene& scene, std::size_t sprite_index,
                Position at);

/// Throws IndexError when t >= scene.frames().
Frame render_frame(const SpriteScene& scene, std::size_t t);

struct DetectorModel {
  double gain = 1.0;
  /// Gaussian std-dev of each DAQ sample, as a fraction of the noise
  /// reference (the all-ones measurement of the background).
  double noise_sigma = 0.0;
  unsigned samples_per_display = 10;
  std::uint64_t seed = 0;

  /// Throws ConfigError on gain <= 0, sigma < 0 or zero samples.
  void validate() const;
};

/// Noiseless all-ones measurement of `background`.
double noise_reference(const Frame& background, double gain);

/// Single-pixel detector. Every display consumes one slot of a counter-based
/// noise stream keyed by (seed, display id), so a display's noise never
/// depends on evaluation order.
class Detector {
 public:
  Detector(DetectorModel model, double reference);

  const DetectorModel& model() const noexcept { return model_; }
  double reference() const noexcept { return reference_; }
  std::uint64_t displays_used() const noexcept { return next_display_; }
  void seek(std::uint64_t display) noexcept { next_display_ = display; }

  /// Averaged detector reading for one display whose noiseless value (before
  /// gain) is `noiseless`. Pure in (model, display).
  double read(std::uint64_t display, double noiseless) const;

  /// gain * sum(mask * frame), averaged over noisy DAQ samples.
  double measure(const BinaryGrid& mask, const Frame& frame);
  double measure(const Pattern& p, const Frame& frame);
  /// measure(p) - measure(complement(p)); two displays.
  double differential_measure(const Pattern& p, const Frame& frame);

  /// Reads one display with a precomputed noiseless inner product.
  double measure_value(double noiseless) { return read(next_display_++, noiseless); }

 private:
  DetectorModel model_;
  double reference_ = 0.0;
  std::uint64_t next_display_ = 0;
};

/// sum(mask * frame) with no gain or noise; SizeError on mismatch.
double inner_product(const BinaryGrid& mask, const Frame& frame);
double inner_product(const Pattern& p, const Frame& frame);

struct TimingModel {
  double dmd_rate_hz = 22000.0;
  double daq_rate_sps = 500000.0;
  std::size_t displays_per_frame = 210;

  /// Throws ConfigError when rates are nonpositive, displays_per_frame is 0,
  /// or the DAQ cannot supply `samples_per_display` samples per display.
  void validate(unsigned samples_per_display) const;
};

struct TimingReport {
  double fps = 0.0;
  double time_resolution_s = 0.0;
  /// Displays per frame over the n^2 full-sampling pattern count; both
  /// halves of a differential pair count as displays.
  double sampling_rate = 0.0;
};

TimingReport timing_report(const TimingModel& tm, std::size_t n);

}  // namespace spx
