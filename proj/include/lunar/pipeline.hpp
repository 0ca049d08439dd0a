#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "lunar/config.hpp"
#include "lunar/fixation.hpp"
#include "lunar/image.hpp"
#include "lunar/track_io.hpp"

namespace lunar {

/// Processing failed in a way that is not an input problem (e.g. no
/// template could be placed on the first frame).
class PipelineError : public Error {
 public:
  using Error::Error;
};

/// Frame-by-frame driver for the three stages: fixation areas, feature
/// detection inside them, and feature tracking.
///
/// Frame 0 extracts templates and opens a track per detected feature. Every
/// later frame block-matches the templates, tracks each feature seeded with
/// its parent's displacement, closes tracks whose parent was lost, and runs
/// detection only inside replacement templates.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  /// Consumes the next frame. All frames must share the first frame's size.
  const FrameReport& process(const Image& frame);

  int frames_processed() const { return frame_index_; }
  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<FrameReport>& reports() const { return reports_; }
  const std::vector<FixationTemplate>& templates() const { return templates_; }
  const PipelineConfig& config() const { return cfg_; }

  /// Overlay of `frame` with the current templates and tracks.
  Image overlay(const Image& frame) const;

 private:
  struct LiveFeature {
    FeaturePoint fp;
    std::size_t track = 0;
  };

  void start(const Image& frame, FrameReport& report);
  void advance(const Image& frame, FrameReport& report);
  int open_tracks(const FixationTemplate& tpl);

  PipelineConfig cfg_;
  int frame_index_ = 0;
  std::optional<Image> prev_;
  IdSource template_ids_;
  IdSource feature_ids_;
  std::vector<FixationTemplate> templates_;
  std::vector<LiveFeature> live_;
  std::vector<Track> tracks_;
  std::vector<FrameReport> reports_;
};

struct PipelineResult {
  std::vector<Track> tracks;
  std::vector<FrameReport> reports;
};

/// Loads the frames in order, runs the pipeline and writes tracks.csv,
/// frames.csv and (if cfg.overlay) overlay_NNNNN.pgm into out_dir.
/// Input problems raise IoError/FormatError; processing failures raise
/// PipelineError.
PipelineResult run_pipeline(const std::vector<std::filesystem::path>& frames,
                            const PipelineConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace lunar
