#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spx/optics.hpp"

namespace spx {

struct TextureParams {
  double base = 15.0;    ///< minimum intensity
  double smooth = 30.0;  ///< amplitude of the low-frequency component
  double fine = 5.0;     ///< amplitude of per-pixel uniform grain
  std::size_t blur_radius = 3;
  std::uint64_t seed = 1;
};

/// Deterministic textured background: blurred Gaussian noise rescaled to
/// [base, base + smooth] plus uniform grain in [0, fine).
Frame textured_background(std::size_t n, const TextureParams& params);

struct CrossingParams {
  std::size_t frames = 40;
  std::size_t sprite_size = 16;
  double sprite_value = 230.0;
  /// Column offset of the sprite's top-left corner; a sinusoidal wobble of
  /// `y_wobble` pixels is added over the run.
  int y_start = 40;
  double y_wobble = 10.0;
};

/// Sprite crossing along +x (increasing first index): it starts entirely
/// above x = 0 at frame 0 and ends entirely past x = n at the last frame.
SpriteScene crossing_scene(Frame background, const CrossingParams& params);

/// Square of side `start_size` shrinking by `shrink_per_frame` pixels per
/// frame about the fixed center (cx, cy).
SpriteScene shrinking_scene(Frame background, std::size_t frames,
                            std::size_t start_size,
                            std::size_t shrink_per_frame, double value, int cx,
                            int cy);

/// Square of side `size` translated by (dx, dy) pixels per frame from `start`.
SpriteScene translating_scene(Frame background, std::size_t frames,
                              std::size_t size, double value, Position start,
                              int dx, int dy);

}  // namespace spx
