#include "spx/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace spx {

namespace {

// Separable box blur with clamped borders.
Image box_blur(const Image& in, std::size_t radius) {
  const std::size_t n = in.rows();
  Image tmp(n, n), out(n, n);
  const auto clamp = [n](std::ptrdiff_t i) {
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
  };
  const auto r = static_cast<std::ptrdiff_t>(radius);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -r; d <= r; ++d) {
        acc += in(x, clamp(static_cast<std::ptrdiff_t>(y) + d));
      }
      tmp(x, y) = acc / static_cast<double>(2 * r + 1);
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -r; d <= r; ++d) {
        acc += tmp(clamp(static_cast<std::ptrdiff_t>(x) + d), y);
      }
      out(x, y) = acc / static_cast<double>(2 * r + 1);
    }
  }
  return out;
}

}  // namespace

Frame textured_background(std::size_t n, const TextureParams& params) {
  std::mt19937_64 engine(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> grain(0.0, 1.0);

  Image noise(n, n);
  for (double& v : noise.values()) v = gauss(engine);
  Image smooth = params.blur_radius > 0 ? box_blur(noise, params.blur_radius)
                                        : noise;
  const auto vals = smooth.values();
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  const double span = *hi - *lo > 0.0 ? *hi - *lo : 1.0;
  const double low = *lo;

  Image out(n, n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = params.base + params.smooth * (vals[i] - low) / span +
                      params.fine * grain(engine);
  }
  return Frame(std::move(out));
}

SpriteScene crossing_scene(Frame background, const CrossingParams& params) {
  const int n = static_cast<int>(background.side());
  const int size = static_cast<int>(params.sprite_size);
  std::vector<Position> path;
  path.reserve(params.frames);
  const double last = params.frames > 1 ? double(params.frames - 1) : 1.0;
  for (std::size_t t = 0; t < params.frames; ++t) {
    const double u = static_cast<double>(t) / last;
    const double x = -size + u * (n + size);
    const double y =
        params.y_start + params.y_wobble * std::sin(2.0 * std::numbers::pi * u);
    path.push_back({static_cast<int>(std::lround(x)),
                    static_cast<int>(std::lround(y))});
  }
  return SpriteScene(
      std::move(background),
      {Sprite::solid(params.sprite_size, params.sprite_size, params.sprite_value)},
      std::move(path));
}

SpriteScene shrinking_scene(Frame background, std::size_t frames,
                            std::size_t start_size,
                            std::size_t shrink_per_frame, double value, int cx,
                            int cy) {
  std::vector<Sprite> sprites;
  std::vector<Position> path;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t shrink = t * shrink_per_frame;
    const std::size_t size = start_size > shrink + 1 ? start_size - shrink : 1;
    sprites.push_back(Sprite::solid(size, size, value));
    const int half = static_cast<int>(size / 2);
    path.push_back({cx - half, cy - half});
  }
  return SpriteScene(std::move(background), std::move(sprites),
                     std::move(path));
}

SpriteScene translating_scene(Frame background, std::size_t frames,
                              std::size_t size, double value, Position start,
                              int dx, int dy) {
  std::vector<Position> path;
  for (std::size_t t = 0; t < frames; ++t) {
    const int k = static_cast<int>(t);
    path.push_back({start.x + k * dx, start.y + k * dy});
  }
  return SpriteScene(std::move(background), {Sprite::solid(size, size, value)},
                     std::move(path));
}

}  // namespace spx
