#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "spx/io.hpp"

namespace spx::cli {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir.string() +
                  "': " + ec.message());
  }
}

std::string rate_tag(double rate) {
  std::ostringstream s;
  s << std::llround(rate * 10000.0);
  return "r" + s.str();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

fs::path cmd_gen_order(const RunConfig& cfg,
                       const std::optional<fs::path>& output) {
  validate(cfg);
  const auto seq = make_order(cfg.n, cfg.method, cfg.connectivity,
                              cfg.effective_workers());
  fs::path path = output.value_or(cfg.out / ("order-n" + std::to_string(cfg.n) +
                                             "-" + file_tag(cfg.method) + ".txt"));
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_file(path, format_ordering(seq));
  return path;
}

ReconstructOutput cmd_reconstruct(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.images.empty()) {
    throw ConfigError("reconstruct needs at least one image");
  }
  ensure_dir(cfg.out);
  ReconstructOutput result;

  std::vector<OrderedSequence> orders;
  for (const auto& m : cfg.methods) {
    orders.push_back(cached_order(cfg.n, m, cfg.connectivity,
                                  cfg.effective_workers()));
  }

  for (const auto& image_path : cfg.images) {
    const PgmImage pgm = load_pgm(image_path);
    if (pgm.width != cfg.n || pgm.height != cfg.n) {
      throw ConfigError("image '" + image_path.string() + "' is " +
                        std::to_string(pgm.width) + "x" +
                        std::to_string(pgm.height) + ", expected n=" +
                        std::to_string(cfg.n));
    }
    const Frame frame(pgm.to_image());
    const std::string stem = image_path.stem().string();
    std::vector<QualityReport> reports;
    for (const auto& seq : orders) {
      Detector det(cfg.detector, noise_reference(frame, cfg.detector.gain));
      std::vector<Image> images;
      auto rows = rate_sweep(frame, seq, cfg.rates, det, cfg.psnr_peak, &images);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const fs::path out = cfg.out / (stem + "_" + file_tag(seq.method) + "_" +
                                        rate_tag(cfg.rates[i]) + ".pgm");
        save_pgm(out, PgmImage::from_image(images[i], pgm.maxval));
        result.images.push_back(out);
      }
      reports.insert(reports.end(), rows.begin(), rows.end());
    }
    const fs::path csv = cfg.out / (stem + "_quality.csv");
    write_file(csv, format_quality_csv(reports));
    result.csv_files.push_back(csv);
    result.reports.insert(result.reports.end(), reports.begin(), reports.end());
  }
  return result;
}

SpriteScene build_scene(const RunConfig& cfg) {
  const auto& sc = cfg.scene;
  if (!sc.background) {
    Frame bg = textured_background(cfg.n, sc.texture);
    return crossing_scene(std::move(bg), sc.crossing);
  }
  const PgmImage bg = load_pgm(*sc.background);
  if (bg.width != cfg.n || bg.height != cfg.n) {
    throw ConfigError("scene background must be n x n");
  }
  Sprite sprite;
  if (sc.sprite_intensity) {
    const PgmImage in = load_pgm(*sc.sprite_intensity);
    sprite.intensity = in.to_image();
    if (sc.sprite_mask) {
      const PgmImage m = load_pgm(*sc.sprite_mask);
      if (m.width != in.width || m.height != in.height) {
        throw ConfigError("sprite mask and intensity differ in size");
      }
      sprite.mask = BinaryGrid(m.height, m.width);
      for (std::size_t i = 0; i < m.pixels.size(); ++i) {
        sprite.mask.values()[i] = m.pixels[i] != 0;
      }
    } else {
      sprite.mask = BinaryGrid(in.height, in.width, 1);
    }
  } else if (sc.sprite_mask) {
    const PgmImage m = load_pgm(*sc.sprite_mask);
    sprite.intensity = Image(m.height, m.width, sc.sprite_value);
    sprite.mask = BinaryGrid(m.height, m.width);
    for (std::size_t i = 0; i < m.pixels.size(); ++i) {
      sprite.mask.values()[i] = m.pixels[i] != 0;
    }
  } else {
    sprite = Sprite::solid(sc.sprite_size, sc.sprite_size, sc.sprite_value);
  }
  auto path = parse_trajectory_csv(read_file(*sc.trajectory));
  return SpriteScene(Frame(bg.to_image()), {std::move(sprite)}, std::move(path));
}

TrackOutput cmd_track(const RunConfig& cfg) {
  validate_tracking(cfg);
  ensure_dir(cfg.out);
  const SpriteScene scene = build_scene(cfg);
  const auto seq = cached_order(cfg.n, cfg.method, cfg.connectivity,
                                cfg.effective_workers());
  TrackerConfig tc = cfg.tracking;
  tc.detector = cfg.detector;
  tc.displays_per_frame = cfg.timing.displays_per_frame;

  TrackOutput out;
  out.record = track_sequence(scene, seq, tc);
  const auto& rec = out.record;

  out.track_csv = cfg.out / "track.csv";
  out.trajectory_csv = cfg.out / "trajectory.csv";
  out.summary_json = cfg.out / "summary.json";
  write_file(out.track_csv, format_track_csv(track_rows(rec)));
  write_file(out.trajectory_csv, format_centroid_csv(rec));

  const TimingReport timing = timing_report(cfg.timing, cfg.n);
  std::map<std::string, int> states;
  for (auto v : {Visibility::absent, Visibility::entering, Visibility::full,
                 Visibility::leaving, Visibility::gone}) {
    states[std::string(to_string(v))] = 0;
  }
  int full_frames = 0, within_2px = 0;
  double sq_err = 0.0;
  int max_err = 0;
  for (const auto& f : rec.frames) {
    ++states[std::string(to_string(f.state))];
    if (f.state != Visibility::full || !f.truth || !f.estimate.centroid) continue;
    const auto& e = *f.estimate.x.pair;
    const auto& g = *f.estimate.y.pair;
    const int err = std::max({std::abs(e.low - f.truth->x1),
                              std::abs(e.high - f.truth->x2),
                              std::abs(g.low - f.truth->y1),
                              std::abs(g.high - f.truth->y2)});
    max_err = std::max(max_err, err);
    within_2px += err <= 2;
    const double dx = f.estimate.centroid->x - (f.truth->x1 + f.truth->x2) / 2.0;
    const double dy = f.estimate.centroid->y - (f.truth->y1 + f.truth->y2) / 2.0;
    sq_err += dx * dx + dy * dy;
    ++full_frames;
  }

  json summary;
  summary["n"] = cfg.n;
  summary["frames"] = rec.frames.size();
  summary["ordering"] = seq.method.to_string();
  summary["profiles"] = {{"x", rec.profiles.x}, {"y", rec.profiles.y}};
  summary["timing"] = {{"dmd_rate_hz", cfg.timing.dmd_rate_hz},
                       {"daq_rate_sps", cfg.timing.daq_rate_sps},
                       {"displays_per_frame", cfg.timing.displays_per_frame},
                       {"fps", timing.fps},
                       {"time_resolution_s", timing.time_resolution_s},
                       {"sampling_rate", timing.sampling_rate}};
  summary["detector"] = {{"gain", cfg.detector.gain},
                         {"noise_sigma", cfg.detector.noise_sigma},
                         {"samples_per_display", cfg.detector.samples_per_display},
                         {"seed", cfg.detector.seed}};
  summary["states"] = states;
  summary["motion"] = {{"classification", std::string(to_string(rec.motion))},
                       {"experimental", true},
                       {"eps_extent", tc.eps_extent},
                       {"eps_centroid", tc.eps_centroid}};
  json accuracy = {{"full_frames", full_frames},
                   {"within_2px", within_2px},
                   {"max_boundary_error_px", max_err}};
  accuracy["centroid_rms_px"] =
      full_frames ? json(std::sqrt(sq_err / full_frames)) : json(nullptr);
  summary["ground_truth"] = accuracy;
  write_file(out.summary_json, summary.dump(2) + "\n");
  return out;
}

std::string cmd_bench(const RunConfig& cfg) {
  validate_tracking(cfg);
  ensure_dir(cfg.out);

  auto t0 = Clock::now();
  const auto seq = eahsi_order(cfg.n, cfg.connectivity, 1);
  const double ordering_s = seconds_since(t0);

  const Frame background = textured_background(cfg.n, cfg.scene.texture);
  Detector det(cfg.detector, noise_reference(background, cfg.detector.gain));

  t0 = Clock::now();
  const auto budget = static_cast<std::size_t>(
      std::llround(0.10 * static_cast<double>(cfg.n * cfg.n)));
  const auto spectrum = acquire_spectrum(background, seq, budget, det);
  const Image img = reconstruct(spectrum);
  const double reconstruct_s = seconds_since(t0);
  (void)img;

  const auto split = split_display_budget(cfg.timing.displays_per_frame);
  const auto subs = decompose_subpatterns(seq, split.x, split.y);
  const auto priors = calibrate_priors(background, subs, det,
                                       cfg.tracking.calibration_frames,
                                       cfg.tracking.threshold_sigmas);
  CrossingParams crossing = cfg.scene.crossing;
  crossing.frames = std::max<std::size_t>(cfg.bench_frames, 2);
  const SpriteScene scene = crossing_scene(background, crossing);

  double acquisition_s = 0.0, pcgd_s = 0.0, worst_pcgd_s = 0.0;
  std::size_t detected = 0;
  for (std::size_t t = 0; t < scene.frames(); ++t) {
    const Frame frame = render_frame(scene, t);
    auto a0 = Clock::now();
    const auto mx = measure_subpatterns(subs.x, frame, det);
    const auto my = measure_subpatterns(subs.y, frame, det);
    acquisition_s += seconds_since(a0);

    auto p0 = Clock::now();
    const auto est = estimate_from_measurements(subs, mx, my, priors,
                                                cfg.tracking.estimator);
    const double dt = seconds_since(p0);
    pcgd_s += dt;
    worst_pcgd_s = std::max(worst_pcgd_s, dt);
    detected += est.centroid.has_value();
  }
  const double frames = static_cast<double>(scene.frames());
  const TimingReport timing = timing_report(cfg.timing, cfg.n);
  const double pcgd_ms = 1e3 * pcgd_s / frames;
  const double period_ms = 1e3 * timing.time_resolution_s;
  const bool realtime = pcgd_ms < period_ms;
  const bool ordering_ok = ordering_s < 60.0;

  json report;
  report["n"] = cfg.n;
  report["displays_per_frame"] = cfg.timing.displays_per_frame;
  report["frames"] = scene.frames();
  report["stages"] = {
      {"gen_order_s", ordering_s},
      {"reconstruct_s", reconstruct_s},
      {"acquisition_frame_ms", 1e3 * acquisition_s / frames},
      {"pcgd_frame_ms", pcgd_ms},
      {"pcgd_frame_worst_ms", 1e3 * worst_pcgd_s},
  };
  report["frame_period_ms"] = period_ms;
  report["realtime_ok"] = realtime;
  report["ordering_within_budget"] = ordering_ok;
  report["frames_with_centroid"] = detected;
  const std::string text = report.dump(2) + "\n";
  write_file(cfg.out / "bench.json", text);
  if (!realtime) {
    throw InvariantViolation("per-frame tracking compute " +
                             format_number(pcgd_ms) + " ms exceeds the " +
                             format_number(period_ms) + " ms frame period");
  }
  return text;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Single-pixel fast-object tracking bench"};
  app.require_subcommand(1);

  std::string config_path, method, rates, out_dir, output_file;
  std::optional<std::size_t> n, displays;
  std::optional<double> noise_sigma;
  std::optional<std::uint64_t> seed;
  std::optional<int> connectivity;
  std::optional<unsigned> workers;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--n", n, "Scene side (power of two)");
  app.add_option("--method", method,
                 "Ordering method(s), comma separated: eahsi, natural, "
                 "random(seed=S), region_count_baseline");
  app.add_option("--rates", rates, "Sampling rates, comma separated");
  app.add_option("--displays-per-frame", displays, "DMD displays per frame");
  app.add_option("--noise-sigma", noise_sigma, "Detector noise (relative)");
  app.add_option("--seed", seed, "Detector noise seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--connectivity", connectivity, "4 or 8");
  app.add_option("--workers", workers, "Labeling threads (0 = all cores)");

  auto* gen = app.add_subcommand("gen-order", "Write an ordering file")->fallthrough();
  gen->add_option("--output", output_file, "Ordering file path");
  auto* rec = app.add_subcommand("reconstruct", "Rate sweep reconstruction")->fallthrough();
  auto* trk = app.add_subcommand("track", "Track a moving sprite")->fallthrough();
  auto* bch = app.add_subcommand("bench", "Wall-clock stage timings")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (n) cfg.n = *n;
    if (!method.empty()) {
      cfg.methods.clear();
      for (const auto& m : split_list(method)) {
        cfg.methods.push_back(OrderingMethod::parse(m));
      }
      if (cfg.methods.empty()) throw ConfigError("--method is empty");
      cfg.method = cfg.methods.front();
    }
    if (!rates.empty()) {
      cfg.rates.clear();
      for (const auto& r : split_list(rates)) {
        try {
          cfg.rates.push_back(std::stod(r));
        } catch (const std::logic_error&) {
          throw ConfigError("bad rate '" + r + "'");
        }
      }
    }
    if (displays) cfg.timing.displays_per_frame = *displays;
    if (noise_sigma) cfg.detector.noise_sigma = *noise_sigma;
    if (seed) cfg.detector.seed = *seed;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (connectivity) {
      if (*connectivity != 4 && *connectivity != 8) {
        throw ConfigError("--connectivity must be 4 or 8");
      }
      cfg.connectivity = *connectivity == 4 ? Connectivity::four
                                            : Connectivity::eight;
    }
    if (workers) cfg.workers = *workers;

    if (*gen) {
      if (method.find(',') != std::string::npos) {
        throw ConfigError("gen-order takes a single --method");
      }
      const auto path = cmd_gen_order(
          cfg, output_file.empty() ? std::nullopt
                                   : std::optional<fs::path>(output_file));
      std::cout << path.string() << "\n";
    } else if (*rec) {
      const auto res = cmd_reconstruct(cfg);
      for (const auto& p : res.csv_files) std::cout << p.string() << "\n";
    } else if (*trk) {
      const auto res = cmd_track(cfg);
      std::cout << res.summary_json.string() << "\n";
    } else if (*bch) {
      std::cout << cmd_bench(cfg);
    }
    return kOk;
  } catch (const InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternalError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace spx::cli
