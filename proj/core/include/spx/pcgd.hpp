#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "spx/grid.hpp"
#include "spx/optics.hpp"
#include "spx/ordering.hpp"

namespace spx {

/// x is the first frame index, y the second. A curve on axis x is indexed by
/// x and sums the frame over y.
enum class Axis { x, y };

std::string_view to_string(Axis axis);

/// Full-size mask that repeats a 1-D binary profile along the other axis:
/// axis y => mask(r, c) = profile[c]; axis x => mask(r, c) = profile[r].
struct SubPattern {
  Axis axis = Axis::x;
  std::vector<std::uint8_t> profile;
  std::size_t source_index = 0;

  BinaryGrid realize() const;
};

struct SubPatternSet {
  std::vector<SubPattern> x;
  std::vector<SubPattern> y;
};

/// Scans `seq` in order, collecting each pattern's distinct rows (axis y) and
/// columns (axis x) until the per-axis budgets are met. Profiles are kept up
/// to complement (a profile and its complement give the same differential
/// measurement), represented by the member whose first cell is 1, which is
/// always the binarized 1-D Hadamard row. Throws ConfigError unless
/// 1 <= budget <= n on each axis.
SubPatternSet decompose_subpatterns(const OrderedSequence& seq,
                                    std::size_t budget_x, std::size_t budget_y);
SubPatternSet decompose_subpatterns(const OrderedSequence& seq,
                                    std::size_t budget_per_axis);

/// Profiles per axis for a display budget: two displays per profile, split
/// evenly with the odd profile going to x.
struct AxisBudget {
  std::size_t x = 0;
  std::size_t y = 0;
};
AxisBudget split_display_budget(std::size_t displays_per_frame);

/// s(i): sum of the frame along the axis orthogonal to `axis`.
std::vector<double> axis_projection(const Frame& frame, Axis axis);

/// Differential measurement (two displays) of every sub-pattern's realized
/// mask. Throws UsageError on mixed axes.
std::vector<double> measure_subpatterns(std::span<const SubPattern> subs,
                                        const Frame& frame, Detector& detector);

struct ProjectionCurve {
  Axis axis = Axis::x;
  std::vector<double> values;
};

/// F(i) = sum_k IP_k * profile_k(i).
ProjectionCurve synthesize_curve(std::span<const SubPattern> subs,
                                 std::span<const double> measurements);

ProjectionCurve reconstruct_projection_curve(std::span<const SubPattern> subs,
                                             const Frame& frame,
                                             Detector& detector);

enum class GradientRole { prior, measured };

struct GradientCurve {
  Axis axis = Axis::x;
  GradientRole role = GradientRole::measured;
  std::vector<double> values;  ///< values[i] = F[i + 1] - F[i]
};

/// Throws SizeError when the curve has fewer than two samples.
GradientCurve gradient(const ProjectionCurve& curve,
                       GradientRole role = GradientRole::measured);

/// |measured[i] - prior[i]|. Throws UsageError on role/axis mismatch and
/// SizeError on length mismatch.
std::vector<double> gradient_difference(const GradientCurve& prior,
                                        const GradientCurve& measured);

/// Indices of the two largest values, smaller index first; ties go to the
/// smaller index. nullopt when fewer than two values exceed `threshold`.
std::optional<std::pair<std::size_t, std::size_t>> top2(
    std::span<const double> values, double threshold);

/// Greedy non-maximum suppression: keeps a value only if no larger (or equal
/// and earlier) kept value lies within `radius`; other entries become 0.
std::vector<double> suppress_non_maxima(std::span<const double> values,
                                        std::size_t radius);

/// Edge pair from gradient indices v1 < v2. A peak at index i sits between
/// pixels i and i + 1, so the object spans pixels [v1 + 1, v2 + 1).
struct BoundaryEstimate {
  Axis axis = Axis::x;
  std::size_t v1 = 0;
  std::size_t v2 = 0;
  int low = 0;
  int high = 0;
  std::array<double, 2> peak_strengths{};
};

/// Per-axis detection: both edges, one edge, or nothing. With one edge the
/// object is taken to extend to the nearer border on the side that carries
/// the projection change.
struct AxisDetection {
  Axis axis = Axis::x;
  std::optional<BoundaryEstimate> pair;
  std::optional<int> low;
  std::optional<int> high;
  double threshold = 0.0;

  bool any() const noexcept { return low.has_value() || high.has_value(); }
  bool has_pair() const noexcept { return pair.has_value(); }
  /// [low, high) with missing edges replaced by the frame borders.
  std::optional<std::pair<int, int>> implied_bounds(std::size_t side) const;
};

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

struct FrameEstimate {
  AxisDetection x;
  AxisDetection y;
  std::optional<Centroid> centroid;  ///< present iff both axes have a pair

  /// Box from implied_bounds on both axes; nullopt if either axis is empty.
  std::optional<Box> implied_box(std::size_t side) const;
};

/// Prior (object-free) reference for one axis.
struct AxisPrior {
  ProjectionCurve curve;
  GradientCurve gradient;
  double threshold = 0.0;
};

struct Priors {
  AxisPrior x;
  AxisPrior y;
};

/// Builds priors from an object-free frame: the prior curve averages
/// `calibration_frames` acquisitions; the threshold is mean + k_sigma * sd of
/// the gradient difference over another `calibration_frames` acquisitions.
Priors calibrate_priors(const Frame& object_free, const SubPatternSet& subs,
                        Detector& detector, std::size_t calibration_frames = 5,
                        double k_sigma = 4.0);

struct EstimatorConfig {
  /// Peaks must also exceed this fraction of the strongest peak.
  double peak_ratio = 0.5;
  /// Peaks closer than this are one split edge.
  std::size_t suppression_radius = 2;
  /// Absolute lower bound on the threshold.
  double absolute_floor = 0.0;
};

AxisDetection estimate_axis(std::span<const SubPattern> subs,
                            std::span<const double> measurements,
                            const AxisPrior& prior,
                            const EstimatorConfig& config);

/// Curve synthesis through centroid from already acquired measurements.
FrameEstimate estimate_from_measurements(const SubPatternSet& subs,
                                         std::span<const double> x_measurements,
                                         std::span<const double> y_measurements,
                                         const Priors& priors,
                                         const EstimatorConfig& config);

/// Measures both axes of `frame`, then estimate_from_measurements.
FrameEstimate estimate_frame(const Frame& frame, const SubPatternSet& subs,
                             const Priors& priors, Detector& detector,
                             const EstimatorConfig& config = {});

enum class Visibility { absent, entering, full, leaving, gone };
enum class MotionType { tangential, axial, indeterminate };

std::string_view to_string(Visibility v);
std::string_view to_string(MotionType m);

struct TrackFrame {
  std::size_t frame = 0;
  Visibility state = Visibility::absent;
  FrameEstimate estimate;
  std::optional<int> extent_x;  ///< |v1x - v2x| when x has a pair
  std::optional<int> extent_y;
  std::optional<Box> truth;     ///< ground truth from the scene
};

struct TrackRecord {
  std::size_t side = 0;
  AxisBudget profiles;
  std::vector<TrackFrame> frames;
  MotionType motion = MotionType::indeterminate;
};

struct TrackerConfig {
  std::size_t displays_per_frame = 210;
  DetectorModel detector;
  std::size_t calibration_frames = 5;
  double threshold_sigmas = 4.0;
  EstimatorConfig estimator;
  /// Advance the sprite every display instead of every frame.
  bool per_display_motion = false;
  double eps_extent = 0.02;
  double eps_centroid = 0.5;
};

/// Visibility from the current detection and whether any earlier frame was
/// full: nothing detected is absent/gone, a detection touching a border or
/// missing an edge is entering/leaving, two interior pairs are full.
Visibility classify_visibility(const FrameEstimate& est, std::size_t side,
                               bool seen_full);

/// Priors come from frame 0, which must be object-free (not checkable).
/// Throws ConfigError for an empty scene or a side mismatch with `seq`.
TrackRecord track_sequence(const SpriteScene& scene, const OrderedSequence& seq,
                           const TrackerConfig& config);

/// Experimental axial/tangential discrimination over the full frames:
/// tangential when the mean centroid step exceeds eps_centroid; axial when
/// every centroid step is within eps_centroid and both extents change
/// monotonically by at least eps_extent (relative) every step; otherwise,
/// or with fewer than three full frames, indeterminate.
MotionType classify_motion(const TrackRecord& track, double eps_extent,
                           double eps_centroid);

}  // namespace spx
