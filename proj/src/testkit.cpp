#include "lunar/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lunar::testkit {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// One octave of lattice value noise with `spacing` px between lattice nodes.
void add_value_noise(Image& img, Rng& rng, int spacing, double amplitude) {
  const int gw = img.width() / spacing + 2;
  const int gh = img.height() / spacing + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (auto& v : lattice) v = rng.uniform(-1.0, 1.0);
  const auto node = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };

  for (int y = 0; y < img.height(); ++y) {
    const int j = y / spacing;
    const double ty = smoothstep(static_cast<double>(y % spacing) / spacing);
    for (int x = 0; x < img.width(); ++x) {
      const int i = x / spacing;
      const double tx = smoothstep(static_cast<double>(x % spacing) / spacing);
      const double top = node(i, j) + tx * (node(i + 1, j) - node(i, j));
      const double bot = node(i, j + 1) + tx * (node(i + 1, j + 1) - node(i, j + 1));
      img.at(x, y) += amplitude * (top + ty * (bot - top));
    }
  }
}

void add_crater(Image& img, double cx, double cy, double radius) {
  const double reach = 1.4 * radius;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - reach)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(cx + reach)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - reach)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(cy + reach)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double rho = std::hypot(dx, dy) / radius;
      if (rho > 1.4) continue;
      // Dark bowl, bright rim, and a low sun from the left lighting the
      // far wall.
      double v = 0.0;
      if (rho < 1.0) v -= 55.0 * (1.0 - rho * rho);
      const double rim = (rho - 1.0) / 0.15;
      v += 60.0 * std::exp(-rim * rim);
      if (rho < 1.0 && rho > 0.0) v += 30.0 * (dx / (rho * radius)) * rho;
      img.at(x, y) += v;
    }
  }
}

}  // namespace

Image generate_terrain(std::uint64_t seed, int w, int h, int crater_count) {
  Rng rng(seed);
  Image img(w, h, 120.0);
  add_value_noise(img, rng, 64, 40.0);
  add_value_noise(img, rng, 16, 30.0);
  add_value_noise(img, rng, 8, 30.0);
  add_value_noise(img, rng, 4, 30.0);
  add_value_noise(img, rng, 2, 25.0);
  for (int i = 0; i < crater_count; ++i) {
    const double cx = rng.uniform(0.0, w);
    const double cy = rng.uniform(0.0, h);
    const double radius = rng.uniform(4.0, 20.0);
    add_crater(img, cx, cy, radius);
  }
  for (auto& v : img.pixels()) v = std::floor(std::clamp(v, 0.0, 255.0) + 0.5);
  return img;
}

RenderedFrame render_frame(const SyntheticScene& scene, int frame_index) {
  if (frame_index < 0 || frame_index >= static_cast<int>(scene.trajectory.size())) {
    throw BoundsError("frame index " + std::to_string(frame_index) + " outside trajectory");
  }
  const PixelPos off = scene.trajectory[frame_index];
  const bool integral = off.x == std::floor(off.x) && off.y == std::floor(off.y);
  const double max_x = off.x + scene.view_w - 1 + (integral ? 0.0 : 1.0);
  const double max_y = off.y + scene.view_h - 1 + (integral ? 0.0 : 1.0);
  if (off.x < 0 || off.y < 0 || max_x > scene.base.width() - 1 || max_y > scene.base.height() - 1) {
    throw BoundsError("viewport at frame " + std::to_string(frame_index) + " leaves the canvas");
  }
  if (integral) {
    return {extract_subimage(scene.base, {static_cast<int>(off.x), static_cast<int>(off.y)},
                             scene.view_w, scene.view_h),
            off};
  }
  Image out(scene.view_w, scene.view_h);
  for (int y = 0; y < scene.view_h; ++y) {
    for (int x = 0; x < scene.view_w; ++x) {
      out.at(x, y) = sample_bilinear(scene.base, off.x + x, off.y + y);
    }
  }
  return {std::move(out), off};
}

SyntheticScene translation_scene(std::uint64_t seed, int frames, PixelPos motion, int view_w,
                                 int view_h, int crater_count) {
  const double span_x = std::abs(motion.x) * std::max(0, frames - 1);
  const double span_y = std::abs(motion.y) * std::max(0, frames - 1);
  const int base_w = view_w + static_cast<int>(std::ceil(span_x)) + 2;
  const int base_h = view_h + static_cast<int>(std::ceil(span_y)) + 2;
  // Craters scale with canvas area so a viewport sees a similar density
  // regardless of motion span.
  const double area_scale = static_cast<double>(base_w) * base_h / (static_cast<double>(view_w) * view_h);
  SyntheticScene scene{generate_terrain(seed, base_w, base_h,
                                        static_cast<int>(std::lround(crater_count * area_scale))),
                       {}, view_w, view_h};
  const PixelPos start{motion.x > 0 ? span_x : 0.0, motion.y > 0 ? span_y : 0.0};
  for (int k = 0; k < frames; ++k) {
    scene.trajectory.push_back({start.x - k * motion.x, start.y - k * motion.y});
  }
  return scene;
}

PixelPos content_displacement(const SyntheticScene& scene, int frame_index) {
  const auto& t = scene.trajectory;
  return {t.front().x - t.at(frame_index).x, t.front().y - t.at(frame_index).y};
}

SmoothSurface::SmoothSurface(std::uint64_t seed, double min_wavelength, int components) {
  Rng rng(seed);
  for (int i = 0; i < components; ++i) {
    const double wavelength = rng.uniform(min_wavelength, 3.0 * min_wavelength);
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double k = 2.0 * std::numbers::pi / wavelength;
    waves_.push_back({k * std::cos(theta), k * std::sin(theta), rng.uniform(0.0, 2.0 * std::numbers::pi),
                      rng.uniform(15.0, 35.0)});
  }
}

double SmoothSurface::operator()(double x, double y) const {
  double v = offset_;
  for (const auto& w : waves_) v += w.amp * std::sin(w.kx * x + w.ky * y + w.phase);
  return v;
}

Image SmoothSurface::render(int w, int h, double dx, double dy) const {
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(x, y) = (*this)(x - dx, y - dy);
  }
  return out;
}

}  // namespace lunar::testkit
