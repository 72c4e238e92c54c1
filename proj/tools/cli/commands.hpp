#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "spx/hsi.hpp"
#include "spx/pcgd.hpp"

namespace spx::cli {

/// Exit codes of the spx binary.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kInternalError = 4,
};

/// Raised when a checked runtime property (for example the real-time budget)
/// does not hold. Maps to exit code 4.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Writes the ordering file; returns its path. Default location is
/// <out>/order-n<n>-<method>.txt.
fs::path cmd_gen_order(const RunConfig& cfg,
                       const std::optional<fs::path>& output = std::nullopt);

struct ReconstructOutput {
  std::vector<fs::path> csv_files;
  std::vector<fs::path> images;
  std::vector<QualityReport> reports;
};
ReconstructOutput cmd_reconstruct(const RunConfig& cfg);

SpriteScene build_scene(const RunConfig& cfg);

struct TrackOutput {
  fs::path track_csv;
  fs::path trajectory_csv;
  fs::path summary_json;
  TrackRecord record;
};
TrackOutput cmd_track(const RunConfig& cfg);

/// Writes <out>/bench.json and returns its text. Throws InvariantViolation
/// when per-frame tracking compute misses the frame period.
std::string cmd_bench(const RunConfig& cfg);

/// Full CLI entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace spx::cli
