// lunar-track: batch fixation-area / feature-point tracking over image
// sequences, plus a synthetic sequence generator.
//
// Exit codes: 0 success, 1 usage/config error, 2 input I/O error,
// 3 pipeline failure.

#include <fnmatch.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lunar/config.hpp"
#include "lunar/image_io.hpp"
#include "lunar/kernels.hpp"
#include "lunar/pipeline.hpp"
#include "lunar/testkit.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

bool is_image_file(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".png";
}

// A directory expands to its .pgm/.png files; anything else is treated as a
// glob on the file-name component.
std::vector<fs::path> expand_frames(const std::string& spec) {
  std::vector<fs::path> out;
  const fs::path p(spec);
  if (fs::is_directory(p)) {
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_regular_file() && is_image_file(e.path())) out.push_back(e.path());
    }
  } else {
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    const std::string pattern = p.filename().string();
    if (!fs::is_directory(dir)) throw lunar::IoError("no such directory: " + dir.string());
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && fnmatch(pattern.c_str(), e.path().filename().c_str(), 0) == 0) {
        out.push_back(e.path());
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct RunOptions {
  std::string frames;
  std::string out;
  std::string config;
  bool overlay = false;
  std::optional<int> sx, sy, template_size, template_count, search_radius, window_radius;
  std::optional<double> lambda_t;
};

int run_command(const RunOptions& o) {
  lunar::PipelineConfig cfg;
  std::vector<fs::path> frames;
  try {
    if (!o.config.empty()) lunar::apply_config_file(cfg, o.config);
    if (o.sx) cfg.subsample.s_x = *o.sx;
    if (o.sy) cfg.subsample.s_y = *o.sy;
    if (o.template_size) cfg.templates.template_w = cfg.templates.template_h = *o.template_size;
    if (o.template_count) cfg.templates.count = *o.template_count;
    if (o.lambda_t) cfg.detector.lambda_t = *o.lambda_t;
    if (o.search_radius) cfg.search_radius = *o.search_radius;
    if (o.window_radius) cfg.flow.window_radius = *o.window_radius;
    if (o.overlay) cfg.overlay = true;
    cfg.validate();
  } catch (const lunar::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    frames = expand_frames(o.frames);
  } catch (const lunar::Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  if (frames.size() < 2) {
    std::cerr << "input error: need at least two frames, found " << frames.size() << " for '"
              << o.frames << "'\n";
    return kExitInput;
  }

  try {
    const auto result = lunar::run_pipeline(frames, cfg, o.out);
    const auto& last = result.reports.back();
    std::cout << "processed " << result.reports.size() << " frames, " << result.tracks.size()
              << " tracks, " << last.live_tracks << " live at end (" << last.active_templates
              << " templates)\n";
  } catch (const lunar::PipelineError& e) {
    std::cerr << "pipeline failure: " << e.what() << '\n';
    return kExitPipeline;
  } catch (const lunar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const lunar::Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}

struct SynthOptions {
  unsigned long long seed = 1;
  int frames = 10;
  double dx = 3.0;
  double dy = 2.0;
  int width = 512;
  int height = 512;
  int craters = 40;
  std::string out;
};

int synth_command(const SynthOptions& o) {
  try {
    fs::create_directories(o.out);
    const auto scene =
        lunar::testkit::translation_scene(o.seed, o.frames, {o.dx, o.dy}, o.width, o.height, o.craters);
    std::ofstream truth(fs::path(o.out) / "truth.csv");
    if (!truth) throw lunar::IoError("cannot write truth.csv");
    truth << "frame,dx,dy\n";
    for (int k = 0; k < o.frames; ++k) {
      const auto frame = lunar::testkit::render_frame(scene, k);
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%05d.pgm", k);
      lunar::save_image(frame.image, fs::path(o.out) / name);
      const auto d = lunar::testkit::content_displacement(scene, k);
      char row[96];
      std::snprintf(row, sizeof(row), "%d,%.4f,%.4f\n", k, d.x, d.y);
      truth << row;
    }
  } catch (const std::exception& e) {
    std::cerr << "synth failed: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixation-area and feature-point tracking over image sequences"};
  app.require_subcommand(1);

  std::string simd;
  app.add_option("--simd", simd, "Kernel backend override (scalar|avx2)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Track features through a frame sequence");
  run_cmd->add_option("--frames", run.frames, "Directory of frames or a file glob")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--config", run.config, "key = value configuration file");
  run_cmd->add_flag("--overlay", run.overlay, "Write overlay_NNNNN.pgm per frame");
  run_cmd->add_option("--sx", run.sx, "Horizontal subsample interval");
  run_cmd->add_option("--sy", run.sy, "Vertical subsample interval");
  run_cmd->add_option("--template-size", run.template_size, "Square template side in pixels");
  run_cmd->add_option("--template-count", run.template_count, "Number of fixation templates");
  run_cmd->add_option("--lambda-t", run.lambda_t, "Corner acceptance threshold");
  run_cmd->add_option("--search-radius", run.search_radius, "Block-match search radius");
  run_cmd->add_option("--window-radius", run.window_radius, "Flow window radius");

  SynthOptions syn;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic translating terrain sequence");
  synth_cmd->add_option("--seed", syn.seed, "Terrain seed")->required();
  synth_cmd->add_option("--frames", syn.frames, "Number of frames")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dx", syn.dx, "Per-frame content motion in x (pixels)")->required();
  synth_cmd->add_option("--dy", syn.dy, "Per-frame content motion in y (pixels)")->required();
  synth_cmd->add_option("--out", syn.out, "Output directory")->required();
  synth_cmd->add_option("--width", syn.width, "Frame width")->check(CLI::Range(64, 8192));
  synth_cmd->add_option("--height", syn.height, "Frame height")->check(CLI::Range(64, 8192));
  synth_cmd->add_option("--craters", syn.craters, "Craters per frame area")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (!simd.empty()) {
    try {
      if (simd == "scalar") {
        lunar::simd::set_backend(lunar::simd::Backend::Scalar);
      } else if (simd == "avx2") {
        lunar::simd::set_backend(lunar::simd::Backend::Avx2);
      } else {
        std::cerr << "unknown --simd backend '" << simd << "'\n";
        return kExitUsage;
      }
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return kExitUsage;
    }
  }

  if (*run_cmd) return run_command(run);
  return synth_command(syn);
}
