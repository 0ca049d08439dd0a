#pragma once

#include <vector>

#include "lunar/fixation.hpp"
#include "lunar/image.hpp"
#include "lunar/track_io.hpp"

namespace lunar {

/// Copy of `frame` annotated for inspection: each live track's last five
/// positions joined by a polyline at 200, template rectangles (1-px stroke)
/// at 255, and a 3x3 cross at 255 on each live track's current position.
Image render_overlay(const Image& frame, const std::vector<FixationTemplate>& templates,
                     const std::vector<Track>& tracks, int frame_index);

}  // namespace lunar
