#include "lunar/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace lunar {
namespace {

void plot(Image& img, int x, int y, double v) {
  if (img.contains(x, y)) img.at(x, y) = v;
}

// Bresenham.
void draw_line(Image& img, PixelIndex a, PixelIndex b, double v) {
  int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  int x = a.x, y = a.y;
  while (true) {
    plot(img, x, y, v);
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

PixelIndex rounded(PixelPos p) {
  return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}

// The track is live at `frame_index` when its last point up to that frame is
// tracked and lies exactly on that frame.
const TrackPoint* current_point(const Track& t, int frame_index) {
  const TrackPoint* last = nullptr;
  for (const auto& p : t.points) {
    if (p.frame > frame_index) break;
    last = &p;
  }
  if (!last || last->frame != frame_index || last->status != PointStatus::Tracked) return nullptr;
  return last;
}

}  // namespace

Image render_overlay(const Image& frame, const std::vector<FixationTemplate>& templates,
                     const std::vector<Track>& tracks, int frame_index) {
  Image out = frame;

  for (const auto& t : tracks) {
    if (!current_point(t, frame_index)) continue;
    std::vector<PixelIndex> trail;
    for (const auto& p : t.points) {
      if (p.frame <= frame_index && p.status == PointStatus::Tracked) trail.push_back(rounded(p.pos));
    }
    const std::size_t first = trail.size() > 5 ? trail.size() - 5 : 0;
    for (std::size_t i = first + 1; i < trail.size(); ++i) draw_line(out, trail[i - 1], trail[i], 200.0);
  }

  for (const auto& tpl : templates) {
    if (tpl.status != TemplateStatus::Active) continue;
    const int x0 = tpl.anchor.x;
    const int y0 = tpl.anchor.y;
    const int x1 = x0 + tpl.patch.width() - 1;
    const int y1 = y0 + tpl.patch.height() - 1;
    draw_line(out, {x0, y0}, {x1, y0}, 255.0);
    draw_line(out, {x1, y0}, {x1, y1}, 255.0);
    draw_line(out, {x1, y1}, {x0, y1}, 255.0);
    draw_line(out, {x0, y1}, {x0, y0}, 255.0);
  }

  for (const auto& t : tracks) {
    const auto* p = current_point(t, frame_index);
    if (!p) continue;
    const auto c = rounded(p->pos);
    plot(out, c.x, c.y, 255.0);
    plot(out, c.x - 1, c.y, 255.0);
    plot(out, c.x + 1, c.y, 255.0);
    plot(out, c.x, c.y - 1, 255.0);
    plot(out, c.x, c.y + 1, 255.0);
  }
  return out;
}

}  // namespace lunar
