#include "lunar/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "lunar/features.hpp"
#include "lunar/filters.hpp"
#include "lunar/image_io.hpp"
#include "lunar/overlay.hpp"
#include "lunar/tracker.hpp"

namespace lunar {

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  cfg_.templates = cfg_.templates.resolved(cfg_.subsample);
}

const FrameReport& Pipeline::process(const Image& frame) {
  if (prev_ && (frame.width() != prev_->width() || frame.height() != prev_->height())) {
    throw FormatError("frame " + std::to_string(frame_index_) + " is " + std::to_string(frame.width()) +
                      "x" + std::to_string(frame.height()) + ", expected " +
                      std::to_string(prev_->width()) + "x" + std::to_string(prev_->height()));
  }
  FrameReport report;
  report.frame_index = frame_index_;
  if (!prev_) {
    start(frame, report);
  } else {
    advance(frame, report);
  }
  report.active_templates = static_cast<int>(templates_.size());
  report.live_tracks = static_cast<int>(live_.size());
  reports_.push_back(std::move(report));
  prev_ = frame;
  ++frame_index_;
  return reports_.back();
}

int Pipeline::open_tracks(const FixationTemplate& tpl) {
  auto found = detect_features(tpl.patch, cfg_.detector, tpl.id);
  for (auto& fp : found) {
    fp.id = feature_ids_.take();
    fp.pos.x += tpl.anchor.x;
    fp.pos.y += tpl.anchor.y;
    Track t{fp.id, tpl.id, frame_index_, {{frame_index_, fp.pos, PointStatus::Tracked}}};
    tracks_.push_back(std::move(t));
    live_.push_back({fp, tracks_.size() - 1});
  }
  return static_cast<int>(found.size());
}

void Pipeline::start(const Image& frame, FrameReport& report) {
  Extraction ex;
  try {
    const auto vmap = contrast_map(frame, cfg_.subsample, cfg_.map_window_w(), cfg_.map_window_h());
    ex = extract_templates(vmap, cfg_.templates, cfg_.subsample, frame, template_ids_, frame_index_);
  } catch (const Error& e) {
    throw PipelineError(std::string("frame 0: ") + e.what());
  }
  templates_ = std::move(ex.templates);
  for (const auto& tpl : templates_) report.new_tracks += open_tracks(tpl);
}

void Pipeline::advance(const Image& frame, FrameReport& report) {
  const auto vmap = contrast_map(frame, cfg_.subsample, cfg_.map_window_w(), cfg_.map_window_h());
  auto up = update_templates(templates_, frame, vmap, cfg_.templates, cfg_.subsample,
                             cfg_.search_radius, cfg_.residual_limit, template_ids_, frame_index_);

  std::map<int, PixelIndex> motion;
  for (const auto& m : up.motions) motion[m.id] = m.match.displacement;
  report.template_displacements = up.motions;

  const FlowReference ref(*prev_);
  std::vector<LiveFeature> still_live;
  for (auto& lf : live_) {
    Track& track = tracks_[lf.track];
    const auto parent = motion.find(lf.fp.parent_template);
    if (parent == motion.end()) {
      track.points.push_back({frame_index_, lf.fp.pos, PointStatus::LostParent});
      ++report.lost_tracks;
      continue;
    }
    const Displacement seed{static_cast<double>(parent->second.x), static_cast<double>(parent->second.y)};
    const auto st = track_feature(ref, frame, lf.fp, cfg_.flow, seed);
    if (!st.tracked()) {
      track.points.push_back({frame_index_, lf.fp.pos, point_status(st.outcome)});
      ++report.lost_tracks;
      continue;
    }
    lf.fp.pos.x += st.d.dx;
    lf.fp.pos.y += st.d.dy;
    track.points.push_back({frame_index_, lf.fp.pos, PointStatus::Tracked});
    still_live.push_back(lf);
  }
  live_ = std::move(still_live);

  templates_ = std::move(up.active);
  const std::set<int> spawned(up.spawned.begin(), up.spawned.end());
  for (const auto& tpl : templates_) {
    if (spawned.count(tpl.id)) report.new_tracks += open_tracks(tpl);
  }
}

Image Pipeline::overlay(const Image& frame) const {
  return render_overlay(frame, templates_, tracks_, std::max(0, frame_index_ - 1));
}

PipelineResult run_pipeline(const std::vector<std::filesystem::path>& frames,
                            const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
  if (frames.size() < 2) throw ConfigError("at least two frames are required");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  Pipeline pipe(cfg);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Image frame = load_image(frames[i]);
    pipe.process(frame);
    if (cfg.overlay) {
      char name[32];
      std::snprintf(name, sizeof(name), "overlay_%05zu.pgm", i);
      save_image(pipe.overlay(frame), out_dir / name);
    }
  }
  write_tracks(pipe.tracks(), out_dir / "tracks.csv");
  write_reports(pipe.reports(), out_dir / "frames.csv");
  return {pipe.tracks(), pipe.reports()};
}

}  // namespace lunar
