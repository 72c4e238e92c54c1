#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spx/grid.hpp"
#include "spx/hsi.hpp"
#include "spx/optics.hpp"
#include "spx/ordering.hpp"
#include "spx/pcgd.hpp"

namespace spx {

/// Throws IoError when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

enum class PgmEncoding { ascii, binary };  ///< P2, P5

struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 255;
  PgmEncoding encoding = PgmEncoding::binary;
  std::vector<std::uint8_t> pixels;  ///< row-major, height rows of width

  /// Gray values as doubles; rows become the first (x) index.
  Image to_image() const;
  /// Rounds and clamps to [0, maxval].
  static PgmImage from_image(const Image& img, unsigned maxval = 255,
                             PgmEncoding encoding = PgmEncoding::binary);
};

/// P2 or P5 with maxval in [1, 255]; '#' comments allowed in the header.
PgmImage parse_pgm(std::string_view bytes);
std::string format_pgm(const PgmImage& img);
PgmImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const PgmImage& img);

/// "frame,x,y" with a header line; every frame in [0, count) exactly once.
std::vector<Position> parse_trajectory_csv(std::string_view text);
std::string format_trajectory_csv(std::span<const Position> path);

/// One line of the track CSV; empty fields are nullopt.
struct TrackCsvRow {
  std::size_t frame = 0;
  std::string state;
  std::optional<int> x1, x2, y1, y2;
  std::optional<double> cx, cy;
  std::optional<int> bx, by;

  friend bool operator==(const TrackCsvRow&, const TrackCsvRow&) = default;
};

std::vector<TrackCsvRow> track_rows(const TrackRecord& track);
/// "frame,state,x1,x2,y1,y2,cx,cy,bx,by".
std::string format_track_csv(std::span<const TrackCsvRow> rows);
std::vector<TrackCsvRow> parse_track_csv(std::string_view text);

/// "frame,cx,cy" for frames with a centroid.
std::string format_centroid_csv(const TrackRecord& track);

/// "method,rate,psnr_db,rmse"; an infinite PSNR is written as "inf".
std::string format_quality_csv(std::span<const QualityReport> reports);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

}  // namespace spx
