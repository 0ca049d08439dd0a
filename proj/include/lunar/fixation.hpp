#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lunar/filters.hpp"
#include "lunar/image.hpp"

namespace lunar {

/// Template geometry and placement rules.
///
/// border_margin and min_separation are in variance-map cells; min_separation
/// is a Chebyshev centre distance. A negative value means "derive from the
/// template extent": margin = extent, separation = 2 * extent, where extent
/// is max(W_x / S_x, W_y / S_y).
struct TemplateSpec {
  int template_w = 20;
  int template_h = 20;
  int count = 5;
  int border_margin = -1;
  int min_separation = -1;

  /// Copy with derived margins filled in. Throws BoundsError when the
  /// template is not a whole number of subsample blocks or a field is out
  /// of range.
  TemplateSpec resolved(SubsampleSpec subsample) const;

  int map_window_w(SubsampleSpec s) const { return template_w / s.s_x; }
  int map_window_h(SubsampleSpec s) const { return template_h / s.s_y; }
};

enum class TemplateStatus { Active, Lost };

struct FixationTemplate {
  int id = -1;
  Image patch;           // full-resolution intensities, template_w x template_h
  PixelIndex anchor;     // top-left in frame coordinates
  int birth_frame = 0;
  TemplateStatus status = TemplateStatus::Active;
};

struct MatchResult {
  PixelIndex displacement;
  double residual = 0.0;  // sum of squared intensity differences
};

/// Monotonic id dispenser shared by templates (and, separately, features).
class IdSource {
 public:
  int take() { return next_++; }
  int peek() const { return next_; }

 private:
  int next_ = 0;
};

struct Extraction {
  std::vector<FixationTemplate> templates;
  bool shortfall = false;  // fewer than spec.count admissible sites
};

/// Greedy high-variance site selection.
///
/// Repeatedly takes the highest-variance cell that lies at least
/// border_margin cells from every map edge and at least min_separation
/// (Chebyshev) from every site already chosen or listed in `occupied`
/// (full-resolution anchors of templates still alive). Equal variances are
/// taken in row-major order. Cell (u, v) maps to anchor (S_x u, S_y v).
/// Returns at most `want` sites; never throws on shortage.
std::vector<PixelIndex> select_template_sites(const VarianceMap& vmap, const TemplateSpec& spec,
                                              SubsampleSpec subsample, int want,
                                              std::span<const PixelIndex> occupied = {});

/// Picks spec.count templates from the variance map and copies their patches
/// out of the full-resolution frame. A short list sets `shortfall`; zero
/// admissible sites throws Error.
Extraction extract_templates(const VarianceMap& vmap, const TemplateSpec& spec,
                             SubsampleSpec subsample, const Image& frame, IdSource& ids,
                             int frame_index = 0);

/// Exhaustive SSD block match over integer displacements with
/// |dx|, |dy| <= search_radius whose placement lies fully inside `frame`.
/// Minimum residual wins; ties go to the smaller |dx|+|dy|, then to the
/// first placement in row-major (dy, then dx) order. nullopt when no
/// placement fits.
std::optional<MatchResult> match_template(const FixationTemplate& tpl, const Image& frame,
                                          int search_radius);

struct TemplateMotion {
  int id = -1;
  MatchResult match;
};

struct TemplateUpdate {
  std::vector<FixationTemplate> active;    // survivors (moved), then replacements
  std::vector<TemplateMotion> motions;     // one per survivor
  std::vector<FixationTemplate> retired;   // status Lost
  std::vector<int> spawned;                // ids of replacements
  bool shortfall = false;
};

/// Matches every active template into `frame`, retires those that fail or
/// whose mean per-pixel SSD exceeds residual_limit, and refills the lost
/// slots from `vmap` (computed on `frame`) while keeping min_separation
/// against the survivors. Patches are not refreshed after a match.
TemplateUpdate update_templates(const std::vector<FixationTemplate>& templates, const Image& frame,
                                const VarianceMap& vmap, const TemplateSpec& spec,
                                SubsampleSpec subsample, int search_radius,
                                double residual_limit, IdSource& ids, int frame_index);

}  // namespace lunar
