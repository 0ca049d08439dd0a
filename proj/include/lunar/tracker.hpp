#pragma once

#include <array>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lunar/features.hpp"
#include "lunar/image.hpp"

namespace lunar {

struct FlowConfig {
  int window_radius = 3;      // window is (2r+1)^2 pixels
  int max_iterations = 20;    // 1 = single least-squares solve, accepted as is
  double epsilon = 0.01;      // stop when |step| < epsilon (pixels)
  double det_min = 1e-6;      // singular when |det G| <= det_min * trace(G)^2
  double max_residual = 400;  // mean per-pixel squared intensity error
};

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};

enum class TrackOutcome { Tracked, SingularSystem, OutOfBounds, HighResidual, NoConvergence };

std::string_view outcome_name(TrackOutcome o);

struct TrackStatus {
  TrackOutcome outcome = TrackOutcome::Tracked;
  Displacement d;          // final estimate (meaningful when tracked)
  double residual = 0.0;   // mean squared intensity error at d
  int iterations = 0;

  bool tracked() const { return outcome == TrackOutcome::Tracked; }
};

/// Least-squares system G d = e for one window.
struct FlowSystem {
  StructureTensor g;
  std::array<double, 2> e{};
  double residual = 0.0;  // mean squared temporal difference over the window
};

/// Previous frame plus its gradients, computed once per frame pair.
class FlowReference {
 public:
  explicit FlowReference(Image prev);

  const Image& image() const { return img_; }
  const Gradients& gradients() const { return grads_; }

 private:
  Image img_;
  Gradients grads_;
};

/// Builds G (gradients of `prev` summed over the window at `center`) and
/// e = -sum(grad * I_t) with I_t = next(x + d) - prev(x). Subpixel samples are
/// bilinear. Throws BoundsError when either window leaves its image (the prev
/// window must also stay inside the gradient interior).
FlowSystem flow_system(const FlowReference& prev, const Image& next, PixelPos center,
                       Displacement d_current, const FlowConfig& cfg);
FlowSystem flow_system(const Image& prev, const Image& next, PixelPos center,
                       Displacement d_current, const FlowConfig& cfg);

/// Solves G x = e by Cramer's rule.
Displacement solve_flow(const StructureTensor& g, const std::array<double, 2>& e);

/// Iterated least-squares tracking of one feature starting from `seed`.
/// Failures are reported through the outcome, never thrown.
TrackStatus track_feature(const FlowReference& prev, const Image& next, const FeaturePoint& fp,
                          const FlowConfig& cfg, Displacement seed = {});
TrackStatus track_feature(const Image& prev, const Image& next, const FeaturePoint& fp,
                          const FlowConfig& cfg, Displacement seed = {});

/// Tracks each feature independently; output order follows input order.
/// `seeds`, when non-empty, must match `fps` in length.
std::vector<std::pair<int, TrackStatus>> track_all(const Image& prev, const Image& next,
                                                   std::span<const FeaturePoint> fps,
                                                   const FlowConfig& cfg,
                                                   std::span<const Displacement> seeds = {});

}  // namespace lunar
