#include "lunar/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "lunar/kernels.hpp"

namespace lunar {

Gradients image_gradients(const Image& img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) throw BoundsError("gradients need at least a 3x3 image");

  const auto& k = simd::kernels();
  Gradients g{Image(w, h), Image(w, h)};
  for (int y = 1; y < h - 1; ++y) {
    const double* row = img.row(y).data();
    k.half_difference(row + 2, row, g.gx.row(y).data() + 1, w - 2);
    k.half_difference(img.row(y + 1).data() + 1, img.row(y - 1).data() + 1,
                      g.gy.row(y).data() + 1, w - 2);
  }
  return g;
}

StructureTensor tensor_from_samples(std::span<const double> gx, std::span<const double> gy) {
  const auto& k = simd::kernels();
  const std::size_t n = std::min(gx.size(), gy.size());
  return {k.dot(gx.data(), gx.data(), n), k.dot(gx.data(), gy.data(), n),
          k.dot(gy.data(), gy.data(), n)};
}

StructureTensor structure_tensor_at(const Image& grad_x, const Image& grad_y, PixelIndex center,
                                    int patch_radius) {
  const int r = patch_radius;
  if (r < 1 || center.x - r < 1 || center.y - r < 1 || center.x + r > grad_x.width() - 2 ||
      center.y + r > grad_x.height() - 2) {
    throw BoundsError("patch of radius " + std::to_string(r) + " at (" + std::to_string(center.x) +
                      "," + std::to_string(center.y) + ") touches the gradient border");
  }
  const int side = 2 * r + 1;
  std::vector<double> sx(static_cast<std::size_t>(side) * side);
  std::vector<double> sy(sx.size());
  auto ox = sx.begin();
  auto oy = sy.begin();
  for (int y = center.y - r; y <= center.y + r; ++y) {
    auto rx = grad_x.row(y).subspan(center.x - r, side);
    auto ry = grad_y.row(y).subspan(center.x - r, side);
    ox = std::copy(rx.begin(), rx.end(), ox);
    oy = std::copy(ry.begin(), ry.end(), oy);
  }
  return tensor_from_samples(sx, sy);
}

StructureTensor structure_tensor_at(const Gradients& grads, PixelIndex center, int patch_radius) {
  return structure_tensor_at(grads.gx, grads.gy, center, patch_radius);
}

bool accept_pixel(const StructureTensor& t, double lambda_t) {
  return (t.a - lambda_t) * (t.c - lambda_t) - t.b * t.b > 0.0 && t.a > lambda_t;
}

double min_eigenvalue(const StructureTensor& t) {
  const double diff = t.a - t.c;
  return ((t.a + t.c) - std::sqrt(diff * diff + 4.0 * t.b * t.b)) / 2.0;
}

std::vector<FeaturePoint> detect_features(const Image& sub, const DetectorConfig& cfg,
                                          int parent_template) {
  const int r = cfg.patch_radius;
  if (r < 1) throw BoundsError("patch_radius must be >= 1");
  if (!(cfg.lambda_t > 0.0)) throw BoundsError("lambda_t must be positive");
  const int w = sub.width();
  const int h = sub.height();
  if (w < 2 * r + 3 || h < 2 * r + 3) return {};

  const auto grads = image_gradients(sub);

  // Accepted candidates in row-major order.
  std::vector<FeaturePoint> accepted;
  std::vector<int> slot(static_cast<std::size_t>(w) * h, -1);
  for (int y = r + 1; y <= h - r - 2; ++y) {
    for (int x = r + 1; x <= w - r - 2; ++x) {
      const auto t = structure_tensor_at(grads, {x, y}, r);
      if (!accept_pixel(t, cfg.lambda_t)) continue;
      slot[static_cast<std::size_t>(y) * w + x] = static_cast<int>(accepted.size());
      accepted.push_back({-1, {static_cast<double>(x), static_cast<double>(y)}, min_eigenvalue(t), t,
                          parent_template});
    }
  }

  // Keep a point only if no neighbour beats it; equal scores go to the
  // earlier point in row-major order.
  const int nr = std::max(1, cfg.nms_radius);
  std::vector<FeaturePoint> kept;
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    const auto& p = accepted[i];
    const int px = static_cast<int>(p.pos.x);
    const int py = static_cast<int>(p.pos.y);
    bool is_max = true;
    for (int y = std::max(0, py - nr); y <= std::min(h - 1, py + nr) && is_max; ++y) {
      for (int x = std::max(0, px - nr); x <= std::min(w - 1, px + nr); ++x) {
        const int j = slot[static_cast<std::size_t>(y) * w + x];
        if (j < 0 || j == static_cast<int>(i)) continue;
        const double q = accepted[j].score;
        if (q > p.score || (q == p.score && j < static_cast<int>(i))) {
          is_max = false;
          break;
        }
      }
    }
    if (is_max) kept.push_back(p);
  }

  std::stable_sort(kept.begin(), kept.end(),
                   [](const FeaturePoint& a, const FeaturePoint& b) { return a.score > b.score; });

  std::vector<FeaturePoint> out;
  for (const auto& p : kept) {
    if (static_cast<int>(out.size()) >= std::max(1, cfg.max_features)) break;
    if (cfg.min_separation > 0) {
      const bool crowded = std::any_of(out.begin(), out.end(), [&](const FeaturePoint& q) {
        return std::max(std::abs(q.pos.x - p.pos.x), std::abs(q.pos.y - p.pos.y)) <
               cfg.min_separation;
      });
      if (crowded) continue;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace lunar
