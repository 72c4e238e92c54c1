#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spx/optics.hpp"
#include "spx/synth.hpp"

namespace spx {
namespace {

Frame f2(double a, double b, double c, double d) {
  return Frame(Image(2, 2, std::vector<double>{a, b, c, d}));
}

Detector clean_detector(unsigned samples = 10) {
  return Detector(DetectorModel{1.0, 0.0, samples, 0}, 1.0);
}

TEST(Frame, RejectsBadInput) {
  EXPECT_THROW(Frame(Image(2, 3)), SizeError);
  EXPECT_THROW(Frame(Image(2, 2, std::vector<double>{1, -1, 0, 0})), ConfigError);
  EXPECT_DOUBLE_EQ(f2(1, 2, 3, 4).total(), 10.0);
}

TEST(RenderFrame, SpriteOutsideLeavesBackground) {
  const Frame bg = textured_background(16, {});
  SpriteScene scene(bg, {Sprite::solid(3, 3, 200)}, {{-5, 2}, {2, 16}, {40, 40}});
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(render_frame(scene, t), bg);
    EXPECT_FALSE(scene.ground_truth(t).has_value());
  }
}

TEST(RenderFrame, SpriteAtOrigin) {
  SpriteScene scene(Frame::uniform(8, 10), {Sprite::solid(2, 2, 77)}, {{0, 0}});
  const Frame f = render_frame(scene, 0);
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y)
      EXPECT_EQ(f(x, y), (x < 2 && y < 2) ? 77.0 : 10.0);
  EXPECT_EQ(scene.ground_truth(0), (Box{0, 2, 0, 2}));
}

TEST(RenderFrame, ClippedAtLeftEdge) {
  SpriteScene scene(Frame::uniform(8, 10), {Sprite::solid(4, 4, 50)}, {{-2, 3}, {6, 6}});
  EXPECT_EQ(scene.ground_truth(0), (Box{0, 2, 3, 7}));
  EXPECT_EQ(scene.ground_truth(1), (Box{6, 8, 6, 8}));
  const Frame f = render_frame(scene, 0);
  EXPECT_EQ(f(0, 3), 50.0);
  EXPECT_EQ(f(2, 3), 10.0);
}

TEST(RenderFrame, MaskedSpriteKeepsBackgroundOutsideMask) {
  Sprite s;
  s.intensity = Image(2, 2, 99.0);
  s.mask = BinaryGrid(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1});
  SpriteScene scene(Frame::uniform(4, 1), {s}, {{1, 1}});
  const Frame f = render_frame(scene, 0);
  EXPECT_EQ(f(1, 1), 99.0);
  EXPECT_EQ(f(1, 2), 1.0);
  EXPECT_EQ(f(2, 2), 99.0);
}

TEST(RenderFrame, OutOfRange) {
  SpriteScene scene(Frame::uniform(4, 1), {Sprite::solid(1, 1, 2)}, {{0, 0}});
  EXPECT_THROW(render_frame(scene, 1), IndexError);
}

TEST(Measure, Examples) {
  auto det = clean_detector();
  const BinaryGrid m(2, 2, std::vector<std::uint8_t>{1, 0, 1, 0});
  EXPECT_DOUBLE_EQ(det.measure(m, f2(1, 2, 3, 4)), 4.0);
  EXPECT_DOUBLE_EQ(det.measure(BinaryGrid(2, 2, std::uint8_t{0}), f2(5, 6, 7, 8)), 0.0);
  auto one = clean_detector(1);
  EXPECT_DOUBLE_EQ(one.measure(m, f2(1, 2, 3, 4)), det.measure(m, f2(1, 2, 3, 4)));
  EXPECT_THROW(det.measure(BinaryGrid(4, 4), f2(1, 2, 3, 4)), SizeError);
}

TEST(Measure, GainScales) {
  Detector det(DetectorModel{2.5, 0.0, 10, 0}, 1.0);
  const BinaryGrid m(2, 2, std::vector<std::uint8_t>{1, 0, 1, 0});
  EXPECT_DOUBLE_EQ(det.measure(m, f2(1, 2, 3, 4)), 10.0);
}

TEST(Measure, LinearInFrame) {
  std::mt19937_64 rng(1);
  auto det = clean_detector();
  for (int trial = 0; trial < 20; ++trial) {
    const Image a = oracle::random_image(8, rng), b = oracle::random_image(8, rng);
    Image c(8, 8);
    for (std::size_t i = 0; i < 64; ++i) c.values()[i] = 3.0 * a.values()[i] + b.values()[i];
    const Pattern p = pattern_from_row(8, rng() % 64);
    const double lhs = det.measure(p, Frame(c));
    const double rhs = 3.0 * det.measure(p, Frame(a)) + det.measure(p, Frame(b));
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::abs(lhs));
  }
}

TEST(DifferentialMeasure, Examples) {
  auto det = clean_detector();
  const Pattern p = pattern_from_row(2, 1);
  EXPECT_DOUBLE_EQ(det.differential_measure(p, f2(1, 2, 3, 4)), -2.0);
  EXPECT_DOUBLE_EQ(det.differential_measure(pattern_from_row(2, 0), f2(1, 2, 3, 4)), 10.0);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(det.differential_measure(pattern_from_row(2, k), Frame::uniform(2, 0)),
                     0.0);
  }
  EXPECT_EQ(det.displays_used(), 12u);
  EXPECT_THROW(det.differential_measure(p.complement(), f2(1, 2, 3, 4)), UsageError);
}

TEST(DifferentialMeasure, EqualsSignedInnerProduct) {
  std::mt19937_64 rng(2);
  auto det = clean_detector();
  for (std::size_t n : {2u, 4u, 8u}) {
    const auto h = oracle::hadamard(n * n);
    for (int trial = 0; trial < 5; ++trial) {
      const Image img = oracle::random_image(n, rng);
      const std::vector<double> flat(img.values().begin(), img.values().end());
      const auto ref = oracle::matvec(h, flat);
      for (std::size_t k = 0; k < n * n; ++k) {
        EXPECT_NEAR(det.differential_measure(pattern_from_row(n, k), Frame(img)), ref[k],
                    1e-9);
      }
    }
  }
}

TEST(Detector, NoiseIsOrderIndependent) {
  Detector det(DetectorModel{1.0, 0.05, 10, 9}, 100.0);
  const double a = det.read(17, 50.0);
  const double b = det.read(3, 50.0);
  EXPECT_EQ(det.read(17, 50.0), a);
  EXPECT_EQ(det.read(3, 50.0), b);
  EXPECT_NE(a, b);
  Detector other(DetectorModel{1.0, 0.05, 10, 10}, 100.0);
  EXPECT_NE(other.read(17, 50.0), a);
}

TEST(Detector, AveragingReducesVarianceTenfold) {
  const double ref = 100.0, sigma = 0.1;
  auto sample_var = [&](unsigned samples) {
    Detector det(DetectorModel{1.0, sigma, samples, 123}, ref);
    const int N = 20000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
      const double v = det.read(static_cast<std::uint64_t>(i), 5.0) - 5.0;
      s += v;
      s2 += v * v;
    }
    const double mean = s / N;
    return s2 / N - mean * mean;
  };
  const double v1 = sample_var(1), v10 = sample_var(10);
  const double expected1 = (sigma * ref) * (sigma * ref);
  // relative sd of a sample variance with N draws is sqrt(2/N) ~= 1%
  EXPECT_NEAR(v1, expected1, 3 * 0.01 * expected1);
  EXPECT_NEAR(v10, expected1 / 10, 3 * 0.01 * expected1 / 10);
  EXPECT_NEAR(v1 / v10, 10.0, 10.0 * 3 * 0.015);
}

TEST(DetectorModel, Validate) {
  EXPECT_THROW((DetectorModel{0.0, 0.0, 10, 0}).validate(), ConfigError);
  EXPECT_THROW((DetectorModel{1.0, -0.1, 10, 0}).validate(), ConfigError);
  EXPECT_THROW((DetectorModel{1.0, 0.0, 0, 0}).validate(), ConfigError);
  EXPECT_NO_THROW((DetectorModel{}).validate());
}

TEST(NoiseReference, IsAllOnesMeasurement) {
  EXPECT_DOUBLE_EQ(noise_reference(f2(1, 2, 3, 4), 2.0), 20.0);
}

TEST(Timing, ReferenceScenarios) {
  const auto a = timing_report(TimingModel{22000, 500000, 210}, 128);
  EXPECT_NEAR(a.fps, 104.76, 0.005);
  EXPECT_NEAR(a.time_resolution_s, 0.009545, 5e-7);
  EXPECT_NEAR(a.sampling_rate, 0.01282, 5e-6);
  const auto b = timing_report(TimingModel{22000, 500000, 67}, 128);
  EXPECT_NEAR(b.fps, 328.36, 0.01);
  EXPECT_NEAR(b.time_resolution_s, 0.003045, 5e-7);
  EXPECT_NEAR(b.sampling_rate, 0.00409, 5e-6);
  const auto c = timing_report(TimingModel{22000, 500000, 22000}, 128);
  EXPECT_DOUBLE_EQ(c.fps, 1.0);
}

TEST(Timing, FpsTimesResolutionIsOne) {
  for (std::size_t d : {1u, 7u, 67u, 210u, 999u, 22000u}) {
    const auto r = timing_report(TimingModel{22000, 500000, d}, 64);
    EXPECT_DOUBLE_EQ(r.fps * r.time_resolution_s, 1.0);
  }
}

TEST(Timing, DaqMustKeepUp) {
  EXPECT_NO_THROW((TimingModel{22000, 500000, 210}).validate(10));
  EXPECT_THROW((TimingModel{22000, 500000, 210}).validate(23), ConfigError);
  EXPECT_THROW((TimingModel{22000, 500000, 0}).validate(10), ConfigError);
}

TEST(Synth, TexturedBackgroundIsDeterministicAndBounded) {
  const Frame a = textured_background(64, {});
  EXPECT_EQ(a, textured_background(64, {}));
  TextureParams p;
  p.seed = 2;
  EXPECT_NE(a, textured_background(64, p));
  for (double v : a.pixels().values()) {
    EXPECT_GE(v, 15.0);
    EXPECT_LE(v, 15.0 + 30.0 + 5.0);
  }
}

TEST(Synth, CrossingGoesLeftToRight) {
  const auto s = crossing_scene(Frame::uniform(64, 10), {});
  EXPECT_EQ(s.frames(), 40u);
  EXPECT_FALSE(s.ground_truth(0).has_value());
  EXPECT_FALSE(s.ground_truth(39).has_value());
  for (std::size_t t = 1; t < s.frames(); ++t) {
    EXPECT_GT(s.trajectory()[t].x, s.trajectory()[t - 1].x);
  }
}

}  // namespace
}  // namespace spx
