#include "lunar/tracker.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lunar/kernels.hpp"

namespace lunar {
namespace {

bool window_inside(double cx, double cy, int r, double lo, double hi_x, double hi_y) {
  return cx - r >= lo && cy - r >= lo && cx + r <= hi_x && cy + r <= hi_y;
}

// Samples of the prev window: intensity and both gradients.
struct RefWindow {
  std::vector<double> intensity, gx, gy;
};

RefWindow gather_reference(const FlowReference& prev, PixelPos c, int r) {
  const Image& img = prev.image();
  if (!window_inside(c.x, c.y, r, 1.0, img.width() - 2.0, img.height() - 2.0)) {
    throw BoundsError("flow window leaves the previous frame");
  }
  const std::size_t n = static_cast<std::size_t>(2 * r + 1) * (2 * r + 1);
  RefWindow w;
  w.intensity.reserve(n);
  w.gx.reserve(n);
  w.gy.reserve(n);
  for (int j = -r; j <= r; ++j) {
    for (int i = -r; i <= r; ++i) {
      const double x = c.x + i;
      const double y = c.y + j;
      w.intensity.push_back(sample_bilinear(img, x, y));
      w.gx.push_back(sample_bilinear(prev.gradients().gx, x, y));
      w.gy.push_back(sample_bilinear(prev.gradients().gy, x, y));
    }
  }
  return w;
}

// Temporal differences next(x + d) - prev(x); false when the shifted window
// leaves `next`.
bool temporal_difference(const RefWindow& ref, const Image& next, PixelPos c, Displacement d, int r,
                         std::vector<double>& it) {
  const double cx = c.x + d.dx;
  const double cy = c.y + d.dy;
  if (!std::isfinite(cx) || !std::isfinite(cy) ||
      !window_inside(cx, cy, r, 0.0, next.width() - 1.0, next.height() - 1.0)) {
    return false;
  }
  it.clear();
  std::size_t k = 0;
  for (int j = -r; j <= r; ++j) {
    for (int i = -r; i <= r; ++i) {
      it.push_back(sample_bilinear(next, cx + i, cy + j) - ref.intensity[k++]);
    }
  }
  return true;
}

FlowSystem assemble(const StructureTensor& g, const RefWindow& ref, const std::vector<double>& it) {
  const auto& k = simd::kernels();
  const std::size_t n = it.size();
  FlowSystem sys;
  sys.g = g;
  sys.e = {-k.dot(ref.gx.data(), it.data(), n), -k.dot(ref.gy.data(), it.data(), n)};
  sys.residual = k.dot(it.data(), it.data(), n) / static_cast<double>(n);
  return sys;
}

bool singular(const StructureTensor& g, double det_min) {
  const double det = g.a * g.c - g.b * g.b;
  const double trace = g.a + g.c;
  return !(std::abs(det) > det_min * trace * trace);
}

}  // namespace

std::string_view outcome_name(TrackOutcome o) {
  switch (o) {
    case TrackOutcome::Tracked: return "tracked";
    case TrackOutcome::SingularSystem: return "singular_system";
    case TrackOutcome::OutOfBounds: return "out_of_bounds";
    case TrackOutcome::HighResidual: return "high_residual";
    case TrackOutcome::NoConvergence: return "no_convergence";
  }
  return "unknown";
}

FlowReference::FlowReference(Image prev) : img_(std::move(prev)), grads_(image_gradients(img_)) {}

FlowSystem flow_system(const FlowReference& prev, const Image& next, PixelPos center,
                       Displacement d_current, const FlowConfig& cfg) {
  const int r = cfg.window_radius;
  const auto ref = gather_reference(prev, center, r);
  std::vector<double> it;
  if (!temporal_difference(ref, next, center, d_current, r, it)) {
    throw BoundsError("flow window leaves the next frame");
  }
  return assemble(tensor_from_samples(ref.gx, ref.gy), ref, it);
}

FlowSystem flow_system(const Image& prev, const Image& next, PixelPos center,
                       Displacement d_current, const FlowConfig& cfg) {
  return flow_system(FlowReference(prev), next, center, d_current, cfg);
}

Displacement solve_flow(const StructureTensor& g, const std::array<double, 2>& e) {
  const double det = g.a * g.c - g.b * g.b;
  return {(e[0] * g.c - g.b * e[1]) / det, (g.a * e[1] - g.b * e[0]) / det};
}

TrackStatus track_feature(const FlowReference& prev, const Image& next, const FeaturePoint& fp,
                          const FlowConfig& cfg, Displacement seed) {
  if (cfg.window_radius < 1 || cfg.max_iterations < 1 || !(cfg.epsilon > 0.0) ||
      !(cfg.det_min > 0.0)) {
    throw std::invalid_argument("invalid flow configuration");
  }
  const int r = cfg.window_radius;
  TrackStatus st;
  st.d = seed;

  RefWindow ref;
  try {
    ref = gather_reference(prev, fp.pos, r);
  } catch (const BoundsError&) {
    st.outcome = TrackOutcome::OutOfBounds;
    return st;
  }
  const auto g = tensor_from_samples(ref.gx, ref.gy);
  if (singular(g, cfg.det_min)) {
    st.outcome = TrackOutcome::SingularSystem;
    return st;
  }

  std::vector<double> it;
  bool converged = false;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    if (!temporal_difference(ref, next, fp.pos, st.d, r, it)) {
      st.outcome = TrackOutcome::OutOfBounds;
      return st;
    }
    const auto sys = assemble(g, ref, it);
    const auto step = solve_flow(g, sys.e);
    st.d.dx += step.dx;
    st.d.dy += step.dy;
    st.iterations = iter + 1;
    if (std::hypot(step.dx, step.dy) < cfg.epsilon || cfg.max_iterations == 1) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    st.outcome = TrackOutcome::NoConvergence;
    return st;
  }

  if (!temporal_difference(ref, next, fp.pos, st.d, r, it)) {
    st.outcome = TrackOutcome::OutOfBounds;
    return st;
  }
  st.residual = assemble(g, ref, it).residual;
  st.outcome = st.residual <= cfg.max_residual ? TrackOutcome::Tracked : TrackOutcome::HighResidual;
  return st;
}

TrackStatus track_feature(const Image& prev, const Image& next, const FeaturePoint& fp,
                          const FlowConfig& cfg, Displacement seed) {
  return track_feature(FlowReference(prev), next, fp, cfg, seed);
}

std::vector<std::pair<int, TrackStatus>> track_all(const Image& prev, const Image& next,
                                                   std::span<const FeaturePoint> fps,
                                                   const FlowConfig& cfg,
                                                   std::span<const Displacement> seeds) {
  if (!seeds.empty() && seeds.size() != fps.size()) {
    throw std::invalid_argument("track_all: seeds and features differ in length");
  }
  std::vector<std::pair<int, TrackStatus>> out;
  if (fps.empty()) return out;
  const FlowReference ref(prev);
  out.reserve(fps.size());
  for (std::size_t i = 0; i < fps.size(); ++i) {
    const Displacement seed = seeds.empty() ? Displacement{} : seeds[i];
    out.emplace_back(fps[i].id, track_feature(ref, next, fps[i], cfg, seed));
  }
  return out;
}

}  // namespace lunar
