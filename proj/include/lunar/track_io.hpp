#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "lunar/fixation.hpp"
#include "lunar/image.hpp"
#include "lunar/tracker.hpp"

namespace lunar {

enum class PointStatus { Tracked, LostSingular, LostOob, LostResidual, LostNoconv, LostParent };

std::string_view status_name(PointStatus s);
std::optional<PointStatus> parse_status(std::string_view s);
PointStatus point_status(TrackOutcome o);

struct TrackPoint {
  int frame = 0;
  PixelPos pos;
  PointStatus status = PointStatus::Tracked;
};

/// One feature's history: gapless frame indices from birth, at most one lost
/// entry and only at the end.
struct Track {
  int feature_id = -1;
  int parent_template = -1;
  int birth_frame = 0;
  std::vector<TrackPoint> points;

  bool alive() const { return !points.empty() && points.back().status == PointStatus::Tracked; }
};

struct FrameReport {
  int frame_index = 0;
  int active_templates = 0;
  std::vector<TemplateMotion> template_displacements;
  int live_tracks = 0;
  int new_tracks = 0;
  int lost_tracks = 0;
};

/// tracks.csv: `frame,feature_id,parent_template,x,y,status`, x/y with four
/// decimals, rows ordered by frame then feature_id.
void write_tracks(const std::vector<Track>& tracks, std::ostream& out);
void write_tracks(const std::vector<Track>& tracks, const std::filesystem::path& path);

/// Parses a tracks.csv back into tracks grouped by feature id.
std::vector<Track> read_tracks(std::istream& in);
std::vector<Track> read_tracks(const std::filesystem::path& path);

/// frames.csv: `frame,active_templates,live_tracks,new_tracks,lost_tracks`.
void write_reports(const std::vector<FrameReport>& reports, std::ostream& out);
void write_reports(const std::vector<FrameReport>& reports, const std::filesystem::path& path);

}  // namespace lunar
