#include "cli/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <set>
#include <thread>

#include "spx/io.hpp"

namespace spx::cli {

using nlohmann::json;

unsigned RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError("'" + where + "' must be a JSON object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& into) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() ? base / path : path;
}

void read_path(const json& obj, const char* key, const fs::path& base,
               std::optional<fs::path>& into) {
  if (!obj.contains(key)) return;
  std::string s;
  read(obj, key, s);
  into = resolve(base, s);
}

Connectivity parse_connectivity(int v) {
  if (v == 4) return Connectivity::four;
  if (v == 8) return Connectivity::eight;
  throw ConfigError("connectivity must be 4 or 8");
}

}  // namespace

void apply_json(RunConfig& cfg, const std::string& json_text,
                const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root,
             {"n", "out", "workers", "ordering", "detector", "timing",
              "reconstruct", "tracking", "scene", "bench"},
             "config");
  read(root, "n", cfg.n);
  read(root, "workers", cfg.workers);
  if (root.contains("out")) {
    std::string out;
    read(root, "out", out);
    cfg.out = resolve(base_dir, out);
  }

  if (root.contains("ordering")) {
    const auto& o = root["ordering"];
    check_keys(o, {"method", "connectivity"}, "ordering");
    if (o.contains("method")) {
      std::string m;
      read(o, "method", m);
      cfg.method = OrderingMethod::parse(m);
    }
    if (o.contains("connectivity")) {
      int c = 4;
      read(o, "connectivity", c);
      cfg.connectivity = parse_connectivity(c);
    }
  }

  if (root.contains("detector")) {
    const auto& d = root["detector"];
    check_keys(d, {"gain", "noise_sigma", "samples_per_display", "seed"},
               "detector");
    read(d, "gain", cfg.detector.gain);
    read(d, "noise_sigma", cfg.detector.noise_sigma);
    read(d, "samples_per_display", cfg.detector.samples_per_display);
    read(d, "seed", cfg.detector.seed);
  }

  if (root.contains("timing")) {
    const auto& t = root["timing"];
    check_keys(t, {"dmd_rate_hz", "daq_rate_sps", "displays_per_frame"},
               "timing");
    read(t, "dmd_rate_hz", cfg.timing.dmd_rate_hz);
    read(t, "daq_rate_sps", cfg.timing.daq_rate_sps);
    read(t, "displays_per_frame", cfg.timing.displays_per_frame);
  }

  if (root.contains("reconstruct")) {
    const auto& r = root["reconstruct"];
    check_keys(r, {"images", "rates", "methods", "psnr_peak"}, "reconstruct");
    if (r.contains("images")) {
      std::vector<std::string> imgs;
      read(r, "images", imgs);
      cfg.images.clear();
      for (const auto& s : imgs) cfg.images.push_back(resolve(base_dir, s));
    }
    read(r, "rates", cfg.rates);
    if (r.contains("methods")) {
      std::vector<std::string> ms;
      read(r, "methods", ms);
      cfg.methods.clear();
      for (const auto& m : ms) cfg.methods.push_back(OrderingMethod::parse(m));
    }
    read(r, "psnr_peak", cfg.psnr_peak);
  }

  if (root.contains("tracking")) {
    const auto& t = root["tracking"];
    check_keys(t,
               {"calibration_frames", "threshold_sigmas", "peak_ratio",
                "suppression_radius", "per_display_motion", "eps_extent",
                "eps_centroid"},
               "tracking");
    read(t, "calibration_frames", cfg.tracking.calibration_frames);
    read(t, "threshold_sigmas", cfg.tracking.threshold_sigmas);
    read(t, "peak_ratio", cfg.tracking.estimator.peak_ratio);
    read(t, "suppression_radius", cfg.tracking.estimator.suppression_radius);
    read(t, "per_display_motion", cfg.tracking.per_display_motion);
    read(t, "eps_extent", cfg.tracking.eps_extent);
    read(t, "eps_centroid", cfg.tracking.eps_centroid);
  }

  if (root.contains("scene")) {
    const auto& s = root["scene"];
    check_keys(s, {"frames", "background", "sprite", "trajectory", "synthetic"},
               "scene");
    read(s, "frames", cfg.scene.crossing.frames);
    read_path(s, "background", base_dir, cfg.scene.background);
    read_path(s, "trajectory", base_dir, cfg.scene.trajectory);
    if (s.contains("sprite")) {
      const auto& sp = s["sprite"];
      check_keys(sp, {"intensity", "mask", "value", "size"}, "scene.sprite");
      read_path(sp, "intensity", base_dir, cfg.scene.sprite_intensity);
      read_path(sp, "mask", base_dir, cfg.scene.sprite_mask);
      read(sp, "value", cfg.scene.sprite_value);
      read(sp, "size", cfg.scene.sprite_size);
    }
    if (s.contains("synthetic")) {
      const auto& sy = s["synthetic"];
      check_keys(sy,
                 {"seed", "base", "smooth", "fine", "blur_radius", "sprite_size",
                  "sprite_value", "y_start", "y_wobble"},
                 "scene.synthetic");
      read(sy, "seed", cfg.scene.texture.seed);
      read(sy, "base", cfg.scene.texture.base);
      read(sy, "smooth", cfg.scene.texture.smooth);
      read(sy, "fine", cfg.scene.texture.fine);
      read(sy, "blur_radius", cfg.scene.texture.blur_radius);
      read(sy, "sprite_size", cfg.scene.crossing.sprite_size);
      read(sy, "sprite_value", cfg.scene.crossing.sprite_value);
      read(sy, "y_start", cfg.scene.crossing.y_start);
      read(sy, "y_wobble", cfg.scene.crossing.y_wobble);
    }
  }

  if (root.contains("bench")) {
    const auto& b = root["bench"];
    check_keys(b, {"frames"}, "bench");
    read(b, "frames", cfg.bench_frames);
  }
}

RunConfig load_config(const fs::path& path) {
  RunConfig cfg;
  apply_json(cfg, read_file(path), path.parent_path());
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (!is_power_of_two(cfg.n) || cfg.n < 2) {
    throw ConfigError("n must be a power of two >= 2; got " +
                      std::to_string(cfg.n));
  }
  for (double r : cfg.rates) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw ConfigError("rates must lie in (0, 1]");
    }
  }
  if (cfg.methods.empty()) {
    throw ConfigError("at least one ordering method is required");
  }
  cfg.detector.validate();
  cfg.timing.validate(cfg.detector.samples_per_display);
  if (!(cfg.psnr_peak > 0.0)) {
    throw ConfigError("psnr_peak must be positive");
  }
  auto must_exist = [](const std::optional<fs::path>& p, const char* what) {
    if (p && !fs::exists(*p)) {
      throw ConfigError(std::string(what) + " '" + p->string() +
                        "' does not exist");
    }
  };
  must_exist(cfg.scene.background, "scene background");
  must_exist(cfg.scene.sprite_intensity, "sprite intensity");
  must_exist(cfg.scene.sprite_mask, "sprite mask");
  must_exist(cfg.scene.trajectory, "trajectory");
  for (const auto& img : cfg.images) must_exist(img, "image");
  if (cfg.scene.background && !cfg.scene.trajectory) {
    throw ConfigError("a file-based scene needs a trajectory CSV");
  }
}

void validate_tracking(const RunConfig& cfg) {
  validate(cfg);
  const auto budget = split_display_budget(cfg.timing.displays_per_frame);
  if (budget.y < 1 || budget.x > cfg.n || budget.y > cfg.n) {
    throw ConfigError("displays_per_frame " +
                      std::to_string(cfg.timing.displays_per_frame) +
                      " gives " + std::to_string(budget.x) + "/" +
                      std::to_string(budget.y) +
                      " profiles per axis; each axis needs 1.." +
                      std::to_string(cfg.n));
  }
  if (cfg.tracking.calibration_frames < 1) {
    throw ConfigError("tracking.calibration_frames must be at least 1");
  }
}

fs::path cache_dir() {
  if (const char* env = std::getenv("SPX_CACHE_DIR"); env && *env) {
    return fs::path(env);
  }
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "spx";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "spx";
  }
  return fs::temp_directory_path() / "spx-cache";
}

std::string file_tag(const OrderingMethod& m) {
  if (m.kind == OrderKind::random) {
    return "random-seed" + std::to_string(m.seed);
  }
  return m.to_string();
}

OrderedSequence cached_order(std::size_t n, OrderingMethod method,
                             Connectivity connectivity, unsigned workers) {
  const bool expensive = method.kind == OrderKind::eahsi ||
                         method.kind == OrderKind::region_count_baseline;
  if (!expensive) {
    return make_order(n, method, connectivity, workers);
  }
  const Connectivity key_conn = method.kind == OrderKind::eahsi
                                    ? connectivity
                                    : Connectivity::four;
  const fs::path path =
      cache_dir() / ("order-n" + std::to_string(n) + "-" + file_tag(method) +
                     "-c" + std::to_string(static_cast<int>(key_conn)) + ".txt");
  std::error_code ec;
  if (fs::exists(path, ec)) {
    try {
      auto seq = parse_ordering(read_file(path));
      if (seq.n == n && seq.method == method && seq.connectivity == key_conn) {
        return seq;
      }
    } catch (const IoError&) {
      // stale or corrupt entry: rebuild below
    }
  }
  auto seq = make_order(n, method, connectivity, workers);
  try {
    fs::create_directories(path.parent_path());
    write_file(path, format_ordering(seq));
  } catch (const std::exception& e) {
    std::cerr << "warning: could not cache ordering: " << e.what() << "\n";
  }
  return seq;
}

}  // namespace spx::cli
