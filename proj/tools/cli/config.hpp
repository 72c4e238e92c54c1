#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spx/optics.hpp"
#include "spx/ordering.hpp"
#include "spx/pcgd.hpp"
#include "spx/synth.hpp"

namespace spx::cli {

namespace fs = std::filesystem;

/// Scene for `track`: loaded from files when `background` is set, otherwise
/// synthesized (textured background plus a crossing square).
struct SceneConfig {
  std::optional<fs::path> background;
  std::optional<fs::path> sprite_intensity;
  std::optional<fs::path> sprite_mask;
  std::optional<fs::path> trajectory;
  double sprite_value = 230.0;
  std::size_t sprite_size = 16;
  TextureParams texture;
  CrossingParams crossing;
};

struct RunConfig {
  std::size_t n = 128;
  OrderingMethod method{OrderKind::eahsi, 0};
  Connectivity connectivity = Connectivity::four;
  unsigned workers = 0;  ///< 0 = hardware concurrency

  DetectorModel detector{1.0, 0.0, 10, 1};
  TimingModel timing;

  // reconstruct
  std::vector<fs::path> images;
  std::vector<double> rates{0.05, 0.10, 0.20};
  std::vector<OrderingMethod> methods{{OrderKind::eahsi, 0},
                                      {OrderKind::natural, 0},
                                      {OrderKind::random, 1}};
  double psnr_peak = 255.0;

  // track
  TrackerConfig tracking;
  SceneConfig scene;

  // bench
  std::size_t bench_frames = 200;

  fs::path out = "out";

  unsigned effective_workers() const;
};

/// Relative paths inside the file resolve against the file's directory.
/// Throws ConfigError on unknown keys or bad values, IoError when unreadable.
RunConfig load_config(const fs::path& path);
void apply_json(RunConfig& cfg, const std::string& json_text,
                const fs::path& base_dir);

/// Checks the invariants shared by all commands: n a power of two, rates in
/// (0, 1], timing/detector consistency and
/// that referenced files exist. Throws ConfigError.
void validate(const RunConfig& cfg);
/// validate() plus the per-frame display budget and calibration settings.
void validate_tracking(const RunConfig& cfg);

/// Cache directory for orderings: $SPX_CACHE_DIR, else $XDG_CACHE_HOME/spx,
/// else $HOME/.cache/spx, else <tmp>/spx-cache.
fs::path cache_dir();

/// Orderings that need labeling (eahsi, region_count_baseline) are read from
/// and written to the cache keyed by (n, method, connectivity).
OrderedSequence cached_order(std::size_t n, OrderingMethod method,
                             Connectivity connectivity, unsigned workers);

std::string file_tag(const OrderingMethod& m);

}  // namespace spx::cli
