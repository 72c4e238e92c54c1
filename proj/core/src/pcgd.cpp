#include "spx/pcgd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace spx {

std::string_view to_string(Axis axis) { return axis == Axis::x ? "x" : "y"; }

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::absent: return "absent";
    case Visibility::entering: return "entering";
    case Visibility::full: return "full";
    case Visibility::leaving: return "leaving";
    case Visibility::gone: return "gone";
  }
  return "unknown";
}

std::string_view to_string(MotionType m) {
  switch (m) {
    case MotionType::tangential: return "tangential";
    case MotionType::axial: return "axial";
    case MotionType::indeterminate: return "indeterminate";
  }
  return "unknown";
}

BinaryGrid SubPattern::realize() const {
  const std::size_t n = profile.size();
  BinaryGrid mask(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      mask(r, c) = axis == Axis::y ? profile[c] : profile[r];
    }
  }
  return mask;
}

namespace {

using Profile = std::vector<std::uint8_t>;

void canonicalize(Profile& p) {
  if (!p.empty() && p.front() == 0) {
    for (auto& v : p) v = static_cast<std::uint8_t>(1 - v);
  }
}

}  // namespace

SubPatternSet decompose_subpatterns(const OrderedSequence& seq,
                                    std::size_t budget_x,
                                    std::size_t budget_y) {
  const std::size_t n = seq.n;
  if (budget_x < 1 || budget_x > n || budget_y < 1 || budget_y > n) {
    throw ConfigError("sub-pattern budget per axis must lie in [1, " +
                      std::to_string(n) + "]; got x=" +
                      std::to_string(budget_x) + " y=" + std::to_string(budget_y));
  }
  SubPatternSet out;
  std::set<Profile> seen_x, seen_y;
  Profile scratch(n);

  for (std::size_t k : seq.order) {
    if (out.x.size() >= budget_x && out.y.size() >= budget_y) break;
    const Pattern p = pattern_from_row(n, k);
    if (out.y.size() < budget_y) {
      for (std::size_t r = 0; r < n && out.y.size() < budget_y; ++r) {
        for (std::size_t c = 0; c < n; ++c) scratch[c] = p.cell(r, c);
        canonicalize(scratch);
        if (seen_y.insert(scratch).second) {
          out.y.push_back({Axis::y, scratch, k});
        }
      }
    }
    if (out.x.size() < budget_x) {
      for (std::size_t c = 0; c < n && out.x.size() < budget_x; ++c) {
        for (std::size_t r = 0; r < n; ++r) scratch[r] = p.cell(r, c);
        canonicalize(scratch);
        if (seen_x.insert(scratch).second) {
          out.x.push_back({Axis::x, scratch, k});
        }
      }
    }
  }
  if (out.x.size() < budget_x || out.y.size() < budget_y) {
    throw ConfigError("ordering does not contain enough distinct profiles");
  }
  return out;
}

SubPatternSet decompose_subpatterns(const OrderedSequence& seq,
                                    std::size_t budget_per_axis) {
  return decompose_subpatterns(seq, budget_per_axis, budget_per_axis);
}

AxisBudget split_display_budget(std::size_t displays_per_frame) {
  const std::size_t profiles = displays_per_frame / 2;
  return {(profiles + 1) / 2, profiles / 2};
}

std::vector<double> axis_projection(const Frame& frame, Axis axis) {
  const std::size_t n = frame.side();
  std::vector<double> s(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = frame.pixels().row(x);
    if (axis == Axis::x) {
      s[x] = std::accumulate(row.begin(), row.end(), 0.0);
    } else {
      for (std::size_t y = 0; y < n; ++y) s[y] += row[y];
    }
  }
  return s;
}

namespace {

void require_single_axis(std::span<const SubPattern> subs) {
  for (const auto& s : subs) {
    if (s.axis != subs.front().axis) {
      throw UsageError("sub-patterns of mixed axes in one curve");
    }
  }
}

double profile_dot(const Profile& h, const std::vector<double>& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i]) acc += s[i];
  }
  return acc;
}

}  // namespace

std::vector<double> measure_subpatterns(std::span<const SubPattern> subs,
                                        const Frame& frame,
                                        Detector& detector) {
  std::vector<double> out;
  if (subs.empty()) return out;
  require_single_axis(subs);
  if (subs.front().profile.size() != frame.side()) {
    throw SizeError("sub-pattern length does not match the frame side");
  }
  const auto s = axis_projection(frame, subs.front().axis);
  const double total = std::accumulate(s.begin(), s.end(), 0.0);
  out.reserve(subs.size());
  for (const auto& sub : subs) {
    const double positive = profile_dot(sub.profile, s);
    const double d_plus = detector.measure_value(positive);
    const double d_minus = detector.measure_value(total - positive);
    out.push_back(d_plus - d_minus);
  }
  return out;
}

ProjectionCurve synthesize_curve(std::span<const SubPattern> subs,
                                 std::span<const double> measurements) {
  if (subs.size() != measurements.size()) {
    throw SizeError("one measurement per sub-pattern is required");
  }
  if (subs.empty()) {
    throw UsageError("cannot synthesize a curve from no sub-patterns");
  }
  require_single_axis(subs);
  ProjectionCurve curve{subs.front().axis,
                        std::vector<double>(subs.front().profile.size(), 0.0)};
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const auto& h = subs[k].profile;
    const double ip = measurements[k];
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i]) curve.values[i] += ip;
    }
  }
  return curve;
}

ProjectionCurve reconstruct_projection_curve(std::span<const SubPattern> subs,
                                             const Frame& frame,
                                             Detector& detector) {
  const auto m = measure_subpatterns(subs, frame, detector);
  return synthesize_curve(subs, m);
}

GradientCurve gradient(const ProjectionCurve& curve, GradientRole role) {
  if (curve.values.size() < 2) {
    throw SizeError("gradient needs at least two samples");
  }
  GradientCurve g{curve.axis, role, std::vector<double>(curve.values.size() - 1)};
  for (std::size_t i = 0; i + 1 < curve.values.size(); ++i) {
    g.values[i] = curve.values[i + 1] - curve.values[i];
  }
  return g;
}

std::vector<double> gradient_difference(const GradientCurve& prior,
                                        const GradientCurve& measured) {
  if (prior.role != GradientRole::prior ||
      measured.role != GradientRole::measured) {
    throw UsageError("gradient_difference expects (prior, measured) curves");
  }
  if (prior.axis != measured.axis) {
    throw UsageError("gradient_difference across different axes");
  }
  if (prior.values.size() != measured.values.size()) {
    throw SizeError("gradient curves differ in length");
  }
  std::vector<double> d(prior.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = std::abs(measured.values[i] - prior.values[i]);
  }
  return d;
}

std::optional<std::pair<std::size_t, std::size_t>> top2(
    std::span<const double> values, double threshold) {
  std::optional<std::size_t> first, second;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > threshold)) continue;
    if (!first || values[i] > values[*first]) {
      second = first;
      first = i;
    } else if (!second || values[i] > values[*second]) {
      second = i;
    }
  }
  if (!second) return std::nullopt;
  return std::pair{std::min(*first, *second), std::max(*first, *second)};
}

std::vector<double> suppress_non_maxima(std::span<const double> values,
                                        std::size_t radius) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  std::vector<double> out(values.size(), 0.0);
  std::vector<std::size_t> kept;
  for (std::size_t i : idx) {
    const bool near = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return (i > k ? i - k : k - i) <= radius;
    });
    if (!near) {
      kept.push_back(i);
      out[i] = values[i];
    }
  }
  return out;
}

std::optional<std::pair<int, int>> AxisDetection::implied_bounds(
    std::size_t side) const {
  if (!any()) return std::nullopt;
  return std::pair{low.value_or(0), high.value_or(static_cast<int>(side))};
}

std::optional<Box> FrameEstimate::implied_box(std::size_t side) const {
  const auto bx = x.implied_bounds(side);
  const auto by = y.implied_bounds(side);
  if (!bx || !by) return std::nullopt;
  return Box{bx->first, bx->second, by->first, by->second};
}

namespace {

struct CurveStats {
  double mean = 0.0;
  double sd = 0.0;
};

CurveStats pooled_stats(const std::vector<double>& v) {
  CurveStats s;
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double acc = 0.0;
  for (double x : v) acc += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(acc / v.size());
  return s;
}

// Band-limited projection recovered from a curve: with canonical profiles
// (first cell 1), F(i) = (q(i) + q(0)) / 2 where q = sum_k IP_k * (2h_k - 1).
std::vector<double> band_limited_projection(const ProjectionCurve& f) {
  std::vector<double> q(f.values.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = 2.0 * f.values[i] - f.values[0];
  }
  return q;
}

}  // namespace

Priors calibrate_priors(const Frame& object_free, const SubPatternSet& subs,
                        Detector& detector, std::size_t calibration_frames,
                        double k_sigma) {
  if (calibration_frames < 1) {
    throw ConfigError("at least one calibration frame is required");
  }
  if (subs.x.empty() || subs.y.empty()) {
    throw ConfigError("priors need sub-patterns on both axes");
  }
  const std::size_t n = object_free.side();
  std::vector<double> sum_x(n, 0.0), sum_y(n, 0.0);
  for (std::size_t f = 0; f < calibration_frames; ++f) {
    const auto cx = reconstruct_projection_curve(subs.x, object_free, detector);
    const auto cy = reconstruct_projection_curve(subs.y, object_free, detector);
    for (std::size_t i = 0; i < n; ++i) {
      sum_x[i] += cx.values[i];
      sum_y[i] += cy.values[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(calibration_frames);
  for (std::size_t i = 0; i < n; ++i) {
    sum_x[i] *= inv;
    sum_y[i] *= inv;
  }

  Priors priors;
  priors.x.curve = {Axis::x, std::move(sum_x)};
  priors.y.curve = {Axis::y, std::move(sum_y)};
  priors.x.gradient = gradient(priors.x.curve, GradientRole::prior);
  priors.y.gradient = gradient(priors.y.curve, GradientRole::prior);

  std::vector<double> pool_x, pool_y;
  for (std::size_t f = 0; f < calibration_frames; ++f) {
    const auto gx = gradient(
        reconstruct_projection_curve(subs.x, object_free, detector));
    const auto gy = gradient(
        reconstruct_projection_curve(subs.y, object_free, detector));
    const auto dx = gradient_difference(priors.x.gradient, gx);
    const auto dy = gradient_difference(priors.y.gradient, gy);
    pool_x.insert(pool_x.end(), dx.begin(), dx.end());
    pool_y.insert(pool_y.end(), dy.begin(), dy.end());
  }
  const auto sx = pooled_stats(pool_x);
  const auto sy = pooled_stats(pool_y);
  priors.x.threshold = sx.mean + k_sigma * sx.sd;
  priors.y.threshold = sy.mean + k_sigma * sy.sd;
  return priors;
}

AxisDetection estimate_axis(std::span<const SubPattern> subs,
                            std::span<const double> measurements,
                            const AxisPrior& prior,
                            const EstimatorConfig& config) {
  const ProjectionCurve curve = synthesize_curve(subs, measurements);
  if (curve.axis != prior.curve.axis ||
      curve.values.size() != prior.curve.values.size()) {
    throw UsageError("prior was built for a different axis or side");
  }
  const GradientCurve g = gradient(curve, GradientRole::measured);
  const std::vector<double> d = gradient_difference(prior.gradient, g);
  const double strongest = *std::max_element(d.begin(), d.end());

  AxisDetection det;
  det.axis = curve.axis;
  det.threshold = std::max({prior.threshold, config.peak_ratio * strongest,
                            config.absolute_floor});
  // Split edges share a sign; the two edges of one object usually do not, so
  // each sign is suppressed on its own.
  std::vector<double> rising(d.size(), 0.0), falling(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    (g.values[i] >= prior.gradient.values[i] ? rising : falling)[i] = d[i];
  }
  auto peaks = suppress_non_maxima(rising, config.suppression_radius);
  const auto falling_peaks = suppress_non_maxima(falling, config.suppression_radius);
  for (std::size_t i = 0; i < peaks.size(); ++i) peaks[i] += falling_peaks[i];

  const auto q_live = band_limited_projection(curve);
  const auto q_prior = band_limited_projection(prior.curve);
  std::vector<double> change(q_live.size());
  for (std::size_t i = 0; i < change.size(); ++i) {
    change[i] = std::abs(q_live[i] - q_prior[i]);
  }
  // mean change over [lo, hi) and over the rest of the curve
  const auto inside_outside = [&](std::size_t lo, std::size_t hi) {
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < change.size(); ++i) {
      (i >= lo && i < hi ? in : out) += change[i];
    }
    const std::size_t n_in = hi - lo, n_out = change.size() - n_in;
    return std::pair{in / static_cast<double>(std::max<std::size_t>(n_in, 1)),
                     out / static_cast<double>(std::max<std::size_t>(n_out, 1))};
  };

  if (const auto pair = top2(peaks, det.threshold)) {
    // A truncated profile set echoes each edge far away; an edge plus its
    // echo encloses little of the change.
    const auto [in, out] = inside_outside(pair->first + 1, pair->second + 1);
    if (in >= out) {
      BoundaryEstimate b;
      b.axis = curve.axis;
      b.v1 = pair->first;
      b.v2 = pair->second;
      b.low = static_cast<int>(b.v1) + 1;
      b.high = static_cast<int>(b.v2) + 1;
      b.peak_strengths = {d[b.v1], d[b.v2]};
      det.low = b.low;
      det.high = b.high;
      det.pair = b;
      return det;
    }
  }

  const auto it = std::max_element(peaks.begin(), peaks.end());
  if (it == peaks.end() || !(*it > det.threshold)) {
    return det;
  }
  // One edge: the object occupies whichever side shows the larger change in
  // the band-limited projection.
  const auto v = static_cast<std::size_t>(it - peaks.begin());
  const auto [left, right] = inside_outside(0, v + 1);
  if (left >= right) {
    det.high = static_cast<int>(v) + 1;
  } else {
    det.low = static_cast<int>(v) + 1;
  }
  return det;
}

FrameEstimate estimate_from_measurements(const SubPatternSet& subs,
                                         std::span<const double> x_measurements,
                                         std::span<const double> y_measurements,
                                         const Priors& priors,
                                         const EstimatorConfig& config) {
  FrameEstimate est;
  est.x = estimate_axis(subs.x, x_measurements, priors.x, config);
  est.y = estimate_axis(subs.y, y_measurements, priors.y, config);
  if (est.x.pair && est.y.pair) {
    est.centroid = Centroid{(est.x.pair->low + est.x.pair->high) / 2.0,
                            (est.y.pair->low + est.y.pair->high) / 2.0};
  }
  return est;
}

FrameEstimate estimate_frame(const Frame& frame, const SubPatternSet& subs,
                             const Priors& priors, Detector& detector,
                             const EstimatorConfig& config) {
  const auto mx = measure_subpatterns(subs.x, frame, detector);
  const auto my = measure_subpatterns(subs.y, frame, detector);
  return estimate_from_measurements(subs, mx, my, priors, config);
}

Visibility classify_visibility(const FrameEstimate& est, std::size_t side,
                               bool seen_full) {
  if (!est.x.any() || !est.y.any()) {
    return seen_full ? Visibility::gone : Visibility::absent;
  }
  const auto box = est.implied_box(side);
  const int n = static_cast<int>(side);
  const bool interior =
      box && box->x1 > 0 && box->y1 > 0 && box->x2 < n && box->y2 < n;
  if (est.x.has_pair() && est.y.has_pair() && interior) {
    return Visibility::full;
  }
  return seen_full ? Visibility::leaving : Visibility::entering;
}

namespace {

// Per-display motion: the sprite position is interpolated between frame t and
// t + 1 for each display, so every measurement sees its own frame.
std::vector<double> measure_moving(std::span<const SubPattern> subs,
                                   const SpriteScene& scene, std::size_t t,
                                   std::size_t display_offset,
                                   std::size_t displays_per_frame,
                                   Detector& detector) {
  const auto& path = scene.trajectory();
  const Position a = path[t];
  const Position b = t + 1 < path.size() ? path[t + 1] : path[t];
  auto frame_at = [&](std::size_t display) {
    const double u = static_cast<double>(display) /
                     static_cast<double>(std::max<std::size_t>(1, displays_per_frame));
    const Position p{static_cast<int>(std::lround(a.x + u * (b.x - a.x))),
                     static_cast<int>(std::lround(a.y + u * (b.y - a.y)))};
    return composite(scene, t, p);
  };
  std::vector<double> out;
  out.reserve(subs.size());
  std::size_t display = display_offset;
  for (const auto& sub : subs) {
    const Frame f_plus = frame_at(display++);
    const auto s_plus = axis_projection(f_plus, sub.axis);
    const double pos = profile_dot(sub.profile, s_plus);
    const double d_plus = detector.measure_value(pos);

    const Frame f_minus = frame_at(display++);
    const auto s_minus = axis_projection(f_minus, sub.axis);
    const double total = std::accumulate(s_minus.begin(), s_minus.end(), 0.0);
    const double d_minus =
        detector.measure_value(total - profile_dot(sub.profile, s_minus));
    out.push_back(d_plus - d_minus);
  }
  return out;
}

}  // namespace

TrackRecord track_sequence(const SpriteScene& scene, const OrderedSequence& seq,
                           const TrackerConfig& config) {
  if (scene.frames() == 0) {
    throw ConfigError("scene has no frames");
  }
  if (scene.side() != seq.n) {
    throw ConfigError("scene side does not match the ordering side");
  }
  config.detector.validate();

  TrackRecord record;
  record.side = seq.n;
  record.profiles = split_display_budget(config.displays_per_frame);
  const SubPatternSet subs =
      decompose_subpatterns(seq, record.profiles.x, record.profiles.y);

  const double reference =
      noise_reference(scene.background(), config.detector.gain);
  Detector detector(config.detector, reference);
  const Frame frame0 = render_frame(scene, 0);
  const Priors priors = calibrate_priors(frame0, subs, detector,
                                         config.calibration_frames,
                                         config.threshold_sigmas);

  EstimatorConfig est_config = config.estimator;
  // Keeps rounding residue of exactly cancelling curves out of detection.
  est_config.absolute_floor = std::max(
      est_config.absolute_floor,
      1e-12 * reference * static_cast<double>(seq.n) * config.detector.gain);

  const std::size_t per_frame = 2 * (subs.x.size() + subs.y.size());
  bool seen_full = false;
  for (std::size_t t = 0; t < scene.frames(); ++t) {
    std::vector<double> mx, my;
    if (config.per_display_motion) {
      mx = measure_moving(subs.x, scene, t, 0, per_frame, detector);
      my = measure_moving(subs.y, scene, t, 2 * subs.x.size(), per_frame,
                          detector);
    } else {
      const Frame frame = render_frame(scene, t);
      mx = measure_subpatterns(subs.x, frame, detector);
      my = measure_subpatterns(subs.y, frame, detector);
    }
    TrackFrame tf;
    tf.frame = t;
    tf.estimate = estimate_from_measurements(subs, mx, my, priors, est_config);
    tf.state = classify_visibility(tf.estimate, seq.n, seen_full);
    seen_full = seen_full || tf.state == Visibility::full;
    if (tf.estimate.x.pair) {
      tf.extent_x = std::abs(static_cast<int>(tf.estimate.x.pair->v2) -
                             static_cast<int>(tf.estimate.x.pair->v1));
    }
    if (tf.estimate.y.pair) {
      tf.extent_y = std::abs(static_cast<int>(tf.estimate.y.pair->v2) -
                             static_cast<int>(tf.estimate.y.pair->v1));
    }
    tf.truth = scene.ground_truth(t);
    record.frames.push_back(std::move(tf));
  }
  record.motion =
      classify_motion(record, config.eps_extent, config.eps_centroid);
  return record;
}

MotionType classify_motion(const TrackRecord& track, double eps_extent,
                           double eps_centroid) {
  std::vector<const TrackFrame*> full;
  for (const auto& f : track.frames) {
    if (f.state == Visibility::full && f.estimate.centroid && f.extent_x &&
        f.extent_y) {
      full.push_back(&f);
    }
  }
  if (full.size() < 3) return MotionType::indeterminate;

  double total_step = 0.0;
  bool centroid_steady = true;
  int sign_x = 0, sign_y = 0;
  bool extents_uniform = true;
  for (std::size_t i = 1; i < full.size(); ++i) {
    const auto& a = *full[i - 1];
    const auto& b = *full[i];
    const double step = std::hypot(b.estimate.centroid->x - a.estimate.centroid->x,
                                   b.estimate.centroid->y - a.estimate.centroid->y);
    total_step += step;
    centroid_steady = centroid_steady && step <= eps_centroid;

    const auto rel = [](int from, int to) {
      return from == 0 ? 0.0 : static_cast<double>(to - from) / from;
    };
    const double rx = rel(*a.extent_x, *b.extent_x);
    const double ry = rel(*a.extent_y, *b.extent_y);
    const int sx = rx > 0 ? 1 : (rx < 0 ? -1 : 0);
    const int sy = ry > 0 ? 1 : (ry < 0 ? -1 : 0);
    if (i == 1) {
      sign_x = sx;
      sign_y = sy;
    }
    extents_uniform = extents_uniform && sx != 0 && sx == sign_x &&
                      sy == sign_y && sx == sy &&
                      std::abs(rx) >= eps_extent && std::abs(ry) >= eps_extent;
  }
  const double mean_step = total_step / static_cast<double>(full.size() - 1);
  if (mean_step > eps_centroid) return MotionType::tangential;
  if (centroid_steady && extents_uniform) return MotionType::axial;
  return MotionType::indeterminate;
}

}  // namespace spx
