#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "lunar/features.hpp"
#include "lunar/filters.hpp"
#include "lunar/fixation.hpp"
#include "lunar/tracker.hpp"

namespace lunar {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Everything the frame loop needs. Defaults reproduce the reference setup:
/// 5x5 subsampling, 4x4 variance window, five 20x20 templates, 3x3 detector
/// patch with threshold 1500.
struct PipelineConfig {
  SubsampleSpec subsample{5, 5};
  // Variance window in map cells; 0 means template size / subsample interval.
  int variance_window_w = 0;
  int variance_window_h = 0;
  TemplateSpec templates;
  DetectorConfig detector;
  FlowConfig flow;
  int search_radius = 10;
  double residual_limit = 400.0;  // mean per-pixel SSD before a template is replaced
  bool overlay = false;

  int map_window_w() const;
  int map_window_h() const;

  /// Throws ConfigError on any out-of-range or inconsistent field.
  void validate() const;
};

/// Sets one field from its text key (e.g. "lambda_t", "template_size").
/// Throws ConfigError for unknown keys or unparsable values.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Applies `key = value` lines ('#' starts a comment) on top of `cfg`.
void apply_config(PipelineConfig& cfg, std::istream& in);
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

}  // namespace lunar
