#include "spx/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spx {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("error reading '" + path.string() + "'");
  }
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("error writing '" + path.string() + "'");
  }
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

namespace {

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number() {
    skip_space_and_comments();
    unsigned long value = 0;
    const char* begin = bytes_.data() + pos_;
    const char* end = bytes_.data() + bytes_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) {
      throw FormatError("malformed number in PGM data");
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::string_view take(std::size_t count) {
    if (bytes_.size() - pos_ < count) {
      throw FormatError("PGM file is truncated");
    }
    auto out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() ||
        !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("PGM header must end with one whitespace byte");
    }
    ++pos_;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::optional<int> parse_opt_int(std::string_view field) {
  if (field.empty()) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw FormatError("malformed integer field '" + std::string(field) + "'");
  }
  return v;
}

std::optional<double> parse_opt_double(std::string_view field) {
  if (field.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string s(field);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("malformed number field '" + std::string(field) + "'");
  }
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::string opt(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}
std::string opt(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

Image PgmImage::to_image() const {
  Image img(height, width);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    img.values()[i] = pixels[i];
  }
  return img;
}

PgmImage PgmImage::from_image(const Image& img, unsigned maxval,
                              PgmEncoding encoding) {
  if (maxval < 1 || maxval > 255) {
    throw ConfigError("PGM maxval must lie in [1, 255]");
  }
  PgmImage out{img.cols(), img.rows(), maxval, encoding, {}};
  out.pixels.reserve(img.size());
  for (double v : img.values()) {
    const double q = std::clamp(std::round(v), 0.0, static_cast<double>(maxval));
    out.pixels.push_back(static_cast<std::uint8_t>(q));
  }
  return out;
}

PgmImage parse_pgm(std::string_view bytes) {
  PgmCursor cur(bytes);
  const auto magic = cur.take(2);
  PgmImage img;
  if (magic == "P5") {
    img.encoding = PgmEncoding::binary;
  } else if (magic == "P2") {
    img.encoding = PgmEncoding::ascii;
  } else {
    throw FormatError("not a P2/P5 PGM file");
  }
  img.width = cur.number();
  img.height = cur.number();
  const auto maxval = cur.number();
  if (img.width == 0 || img.height == 0) {
    throw FormatError("PGM dimensions must be positive");
  }
  if (maxval < 1 || maxval > 255) {
    throw FormatError("only PGM maxval in [1, 255] is supported");
  }
  img.maxval = static_cast<unsigned>(maxval);
  const std::size_t count = img.width * img.height;
  img.pixels.resize(count);
  if (img.encoding == PgmEncoding::binary) {
    cur.expect_single_whitespace();
    const auto raw = cur.take(count);
    std::copy(raw.begin(), raw.end(), img.pixels.begin());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = cur.number();
      if (v > maxval) throw FormatError("PGM sample exceeds maxval");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  for (auto p : img.pixels) {
    if (p > img.maxval) throw FormatError("PGM sample exceeds maxval");
  }
  return img;
}

std::string format_pgm(const PgmImage& img) {
  if (img.pixels.size() != img.width * img.height) {
    throw SizeError("PGM pixel count does not match its dimensions");
  }
  std::string out = fmt::format("{}\n{} {}\n{}\n",
                                img.encoding == PgmEncoding::binary ? "P5" : "P2",
                                img.width, img.height, img.maxval);
  if (img.encoding == PgmEncoding::binary) {
    out.append(img.pixels.begin(), img.pixels.end());
    return out;
  }
  // Rows on their own lines, wrapped to stay within 70 characters.
  for (std::size_t r = 0; r < img.height; ++r) {
    std::size_t line = 0;
    for (std::size_t c = 0; c < img.width; ++c) {
      const std::string v = std::to_string(img.pixels[r * img.width + c]);
      if (line > 0 && line + 1 + v.size() > 70) {
        out += '\n';
        line = 0;
      } else if (line > 0) {
        out += ' ';
        ++line;
      }
      out += v;
      line += v.size();
    }
    out += '\n';
  }
  return out;
}

PgmImage load_pgm(const std::filesystem::path& path) {
  try {
    return parse_pgm(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_pgm(const std::filesystem::path& path, const PgmImage& img) {
  write_file(path, format_pgm(img));
}

std::vector<Position> parse_trajectory_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "frame,x,y") {
    throw FormatError("trajectory CSV must start with 'frame,x,y'");
  }
  std::vector<std::optional<Position>> slots;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 3) throw FormatError("trajectory row needs 3 fields");
    const auto frame = parse_opt_int(f[0]);
    const auto x = parse_opt_int(f[1]);
    const auto y = parse_opt_int(f[2]);
    if (!frame || !x || !y || *frame < 0) {
      throw FormatError("trajectory row has empty or negative fields");
    }
    const auto t = static_cast<std::size_t>(*frame);
    if (t >= slots.size()) slots.resize(t + 1);
    if (slots[t]) throw FormatError("trajectory lists a frame twice");
    slots[t] = Position{*x, *y};
  }
  std::vector<Position> path;
  path.reserve(slots.size());
  for (const auto& s : slots) {
    if (!s) throw FormatError("trajectory skips a frame");
    path.push_back(*s);
  }
  return path;
}

std::string format_trajectory_csv(std::span<const Position> path) {
  std::string out = "frame,x,y\n";
  for (std::size_t t = 0; t < path.size(); ++t) {
    out += fmt::format("{},{},{}\n", t, path[t].x, path[t].y);
  }
  return out;
}

std::vector<TrackCsvRow> track_rows(const TrackRecord& track) {
  std::vector<TrackCsvRow> rows;
  rows.reserve(track.frames.size());
  for (const auto& f : track.frames) {
    TrackCsvRow row;
    row.frame = f.frame;
    row.state = std::string(to_string(f.state));
    row.x1 = f.estimate.x.low;
    row.x2 = f.estimate.x.high;
    row.y1 = f.estimate.y.low;
    row.y2 = f.estimate.y.high;
    if (f.estimate.centroid) {
      row.cx = f.estimate.centroid->x;
      row.cy = f.estimate.centroid->y;
    }
    row.bx = f.extent_x;
    row.by = f.extent_y;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_track_csv(std::span<const TrackCsvRow> rows) {
  std::string out = "frame,state,x1,x2,y1,y2,cx,cy,bx,by\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.frame, r.state,
                       opt(r.x1), opt(r.x2), opt(r.y1), opt(r.y2), opt(r.cx),
                       opt(r.cy), opt(r.bx), opt(r.by));
  }
  return out;
}

std::vector<TrackCsvRow> parse_track_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "frame,state,x1,x2,y1,y2,cx,cy,bx,by") {
    throw FormatError("track CSV header mismatch");
  }
  std::vector<TrackCsvRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 10) throw FormatError("track CSV row needs 10 fields");
    TrackCsvRow r;
    const auto frame = parse_opt_int(f[0]);
    if (!frame || *frame < 0) throw FormatError("track CSV row needs a frame");
    r.frame = static_cast<std::size_t>(*frame);
    r.state = std::string(f[1]);
    r.x1 = parse_opt_int(f[2]);
    r.x2 = parse_opt_int(f[3]);
    r.y1 = parse_opt_int(f[4]);
    r.y2 = parse_opt_int(f[5]);
    r.cx = parse_opt_double(f[6]);
    r.cy = parse_opt_double(f[7]);
    r.bx = parse_opt_int(f[8]);
    r.by = parse_opt_int(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_centroid_csv(const TrackRecord& track) {
  std::string out = "frame,cx,cy\n";
  for (const auto& f : track.frames) {
    if (!f.estimate.centroid) continue;
    out += fmt::format("{},{},{}\n", f.frame, format_number(f.estimate.centroid->x),
                       format_number(f.estimate.centroid->y));
  }
  return out;
}

std::string format_quality_csv(std::span<const QualityReport> reports) {
  std::string out = "method,rate,psnr_db,rmse\n";
  for (const auto& r : reports) {
    out += fmt::format("{},{},{},{}\n", r.method, format_number(r.sampling_rate),
                       format_number(r.psnr_db), format_number(r.rmse));
  }
  return out;
}

}  // namespace spx
