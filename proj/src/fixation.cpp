#include "lunar/fixation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "lunar/kernels.hpp"

namespace lunar {

TemplateSpec TemplateSpec::resolved(SubsampleSpec subsample) const {
  if (subsample.s_x < 1 || subsample.s_y < 1) throw BoundsError("subsample intervals must be >= 1");
  if (template_w < 1 || template_h < 1) throw BoundsError("template size must be positive");
  if (template_w % subsample.s_x != 0 || template_h % subsample.s_y != 0) {
    throw BoundsError("template " + std::to_string(template_w) + "x" + std::to_string(template_h) +
                      " is not a multiple of the subsample interval " +
                      std::to_string(subsample.s_x) + "x" + std::to_string(subsample.s_y));
  }
  if (count < 1) throw BoundsError("template count must be >= 1");

  TemplateSpec out = *this;
  const int extent = std::max(map_window_w(subsample), map_window_h(subsample));
  if (out.border_margin < 0) out.border_margin = extent;
  if (out.min_separation < 0) out.min_separation = 2 * extent;
  if (out.min_separation < 1) throw BoundsError("template min_separation must be >= 1");
  return out;
}

std::vector<PixelIndex> select_template_sites(const VarianceMap& vmap, const TemplateSpec& spec_in,
                                              SubsampleSpec subsample, int want,
                                              std::span<const PixelIndex> occupied) {
  const TemplateSpec spec = spec_in.resolved(subsample);
  const int mw = vmap.width();
  const int mh = vmap.height();
  const int m = spec.border_margin;

  std::vector<int> candidates;
  for (int v = m; v < mh - m; ++v) {
    for (int u = m; u < mw - m; ++u) candidates.push_back(v * mw + u);
  }
  auto cells = vmap.cells.pixels();
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return cells[a] > cells[b]; });

  // Existing templates in (fractional) map-cell units.
  std::vector<PixelPos> taken;
  for (const auto& a : occupied) {
    taken.push_back({static_cast<double>(a.x) / subsample.s_x, static_cast<double>(a.y) / subsample.s_y});
  }

  const double sep = spec.min_separation;
  std::vector<PixelIndex> sites;
  for (int idx : candidates) {
    if (static_cast<int>(sites.size()) >= want) break;
    const double u = idx % mw;
    const double v = idx / mw;
    const bool clear = std::all_of(taken.begin(), taken.end(), [&](const PixelPos& t) {
      return std::max(std::abs(u - t.x), std::abs(v - t.y)) >= sep;
    });
    if (!clear) continue;
    taken.push_back({u, v});
    sites.push_back({static_cast<int>(u) * subsample.s_x, static_cast<int>(v) * subsample.s_y});
  }
  return sites;
}

namespace {

std::vector<FixationTemplate> make_templates(const std::vector<PixelIndex>& sites,
                                             const TemplateSpec& spec, const Image& frame,
                                             IdSource& ids, int frame_index) {
  std::vector<FixationTemplate> out;
  out.reserve(sites.size());
  for (const auto& s : sites) {
    if (s.x + spec.template_w > frame.width() || s.y + spec.template_h > frame.height()) continue;
    out.push_back({ids.take(), extract_subimage(frame, s, spec.template_w, spec.template_h), s,
                   frame_index, TemplateStatus::Active});
  }
  return out;
}

}  // namespace

Extraction extract_templates(const VarianceMap& vmap, const TemplateSpec& spec,
                             SubsampleSpec subsample, const Image& frame, IdSource& ids,
                             int frame_index) {
  const auto sites = select_template_sites(vmap, spec, subsample, spec.count);
  Extraction ex;
  ex.templates = make_templates(sites, spec, frame, ids, frame_index);
  if (ex.templates.empty()) throw Error("no admissible template site in the variance map");
  ex.shortfall = static_cast<int>(ex.templates.size()) < spec.count;
  return ex;
}

std::optional<MatchResult> match_template(const FixationTemplate& tpl, const Image& frame,
                                          int search_radius) {
  const int tw = tpl.patch.width();
  const int th = tpl.patch.height();
  const int r = std::max(0, search_radius);

  const int dx_lo = std::max(-r, -tpl.anchor.x);
  const int dx_hi = std::min(r, frame.width() - tw - tpl.anchor.x);
  const int dy_lo = std::max(-r, -tpl.anchor.y);
  const int dy_hi = std::min(r, frame.height() - th - tpl.anchor.y);
  if (dx_lo > dx_hi || dy_lo > dy_hi) return std::nullopt;

  const auto& k = simd::kernels();
  std::optional<MatchResult> best;
  for (int dy = dy_lo; dy <= dy_hi; ++dy) {
    for (int dx = dx_lo; dx <= dx_hi; ++dx) {
      const int x0 = tpl.anchor.x + dx;
      const int y0 = tpl.anchor.y + dy;
      double ssd = 0.0;
      bool pruned = false;
      for (int y = 0; y < th; ++y) {
        ssd += k.ssd(tpl.patch.row(y).data(), frame.row(y0 + y).data() + x0, tw);
        // Partial sums only grow, so anything already worse cannot win or tie.
        if (best && ssd > best->residual) {
          pruned = true;
          break;
        }
      }
      if (pruned) continue;
      const bool better =
          !best || ssd < best->residual ||
          (ssd == best->residual &&
           std::abs(dx) + std::abs(dy) < std::abs(best->displacement.x) + std::abs(best->displacement.y));
      if (better) best = MatchResult{{dx, dy}, ssd};
    }
  }
  return best;
}

TemplateUpdate update_templates(const std::vector<FixationTemplate>& templates, const Image& frame,
                                const VarianceMap& vmap, const TemplateSpec& spec_in,
                                SubsampleSpec subsample, int search_radius,
                                double residual_limit, IdSource& ids, int frame_index) {
  const TemplateSpec spec = spec_in.resolved(subsample);
  TemplateUpdate up;
  for (const auto& tpl : templates) {
    if (tpl.status != TemplateStatus::Active) continue;
    const auto match = match_template(tpl, frame, search_radius);
    const double area = static_cast<double>(tpl.patch.width()) * tpl.patch.height();
    if (!match || match->residual / area > residual_limit) {
      auto lost = tpl;
      lost.status = TemplateStatus::Lost;
      up.retired.push_back(std::move(lost));
      continue;
    }
    auto moved = tpl;
    moved.anchor.x += match->displacement.x;
    moved.anchor.y += match->displacement.y;
    up.motions.push_back({tpl.id, *match});
    up.active.push_back(std::move(moved));
  }

  const int missing = spec.count - static_cast<int>(up.active.size());
  if (missing > 0) {
    std::vector<PixelIndex> occupied;
    for (const auto& t : up.active) occupied.push_back(t.anchor);
    const auto sites = select_template_sites(vmap, spec, subsample, missing, occupied);
    auto fresh = make_templates(sites, spec, frame, ids, frame_index);
    for (auto& t : fresh) {
      up.spawned.push_back(t.id);
      up.active.push_back(std::move(t));
    }
    up.shortfall = static_cast<int>(up.active.size()) < spec.count;
  }
  return up;
}

}  // namespace lunar
