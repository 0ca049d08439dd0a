#include "lunar/track_io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

namespace lunar {

std::string_view status_name(PointStatus s) {
  switch (s) {
    case PointStatus::Tracked: return "tracked";
    case PointStatus::LostSingular: return "lost_singular";
    case PointStatus::LostOob: return "lost_oob";
    case PointStatus::LostResidual: return "lost_residual";
    case PointStatus::LostNoconv: return "lost_noconv";
    case PointStatus::LostParent: return "lost_parent";
  }
  return "unknown";
}

std::optional<PointStatus> parse_status(std::string_view s) {
  static constexpr std::array kAll{PointStatus::Tracked,      PointStatus::LostSingular,
                                   PointStatus::LostOob,      PointStatus::LostResidual,
                                   PointStatus::LostNoconv,   PointStatus::LostParent};
  for (auto st : kAll) {
    if (status_name(st) == s) return st;
  }
  return std::nullopt;
}

PointStatus point_status(TrackOutcome o) {
  switch (o) {
    case TrackOutcome::Tracked: return PointStatus::Tracked;
    case TrackOutcome::SingularSystem: return PointStatus::LostSingular;
    case TrackOutcome::OutOfBounds: return PointStatus::LostOob;
    case TrackOutcome::HighResidual: return PointStatus::LostResidual;
    case TrackOutcome::NoConvergence: return PointStatus::LostNoconv;
  }
  return PointStatus::LostNoconv;
}

void write_tracks(const std::vector<Track>& tracks, std::ostream& out) {
  struct Row {
    int frame, feature, parent;
    PixelPos pos;
    PointStatus status;
  };
  std::vector<Row> rows;
  for (const auto& t : tracks) {
    for (const auto& p : t.points) rows.push_back({p.frame, t.feature_id, t.parent_template, p.pos, p.status});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.frame, a.feature) < std::tie(b.frame, b.feature);
  });

  out << "frame,feature_id,parent_template,x,y,status\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.4f,%.4f,", r.frame, r.feature, r.parent, r.pos.x,
                  r.pos.y);
    out << buf << status_name(r.status) << '\n';
  }
}

void write_tracks(const std::vector<Track>& tracks, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_tracks(tracks, out);
  if (!out) throw IoError("write failed on " + path.string());
}

std::vector<Track> read_tracks(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "frame,feature_id,parent_template,x,y,status") {
    throw FormatError("tracks file: missing or unexpected header");
  }
  std::map<int, Track> by_id;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[6];
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(ls, f[i], ',')) throw FormatError("tracks file line " + std::to_string(lineno) + ": too few fields");
    }
    const auto status = parse_status(f[5]);
    if (!status) throw FormatError("tracks file line " + std::to_string(lineno) + ": bad status '" + f[5] + "'");
    try {
      const int frame = std::stoi(f[0]);
      const int id = std::stoi(f[1]);
      auto& t = by_id[id];
      if (t.points.empty()) {
        t.feature_id = id;
        t.parent_template = std::stoi(f[2]);
        t.birth_frame = frame;
      }
      t.points.push_back({frame, {std::stod(f[3]), std::stod(f[4])}, *status});
    } catch (const std::logic_error&) {
      throw FormatError("tracks file line " + std::to_string(lineno) + ": bad number");
    }
  }
  std::vector<Track> out;
  for (auto& [id, t] : by_id) out.push_back(std::move(t));
  return out;
}

std::vector<Track> read_tracks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_tracks(in);
}

void write_reports(const std::vector<FrameReport>& reports, std::ostream& out) {
  out << "frame,active_templates,live_tracks,new_tracks,lost_tracks\n";
  for (const auto& r : reports) {
    out << r.frame_index << ',' << r.active_templates << ',' << r.live_tracks << ',' << r.new_tracks
        << ',' << r.lost_tracks << '\n';
  }
}

void write_reports(const std::vector<FrameReport>& reports, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_reports(reports, out);
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace lunar
