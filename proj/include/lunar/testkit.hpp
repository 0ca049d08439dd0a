#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lunar/image.hpp"

namespace lunar::testkit {

/// Deterministic lunar-like terrain: multi-octave value noise plus
/// `crater_count` circular depressions with bright rims (radius drawn from
/// [4, 20] px). Intensities are integers in [0, 255].
Image generate_terrain(std::uint64_t seed, int w, int h, int crater_count);

/// Camera moving over a fixed terrain canvas. Frame k is the viewport whose
/// top-left sits at trajectory[k] in `base`.
struct SyntheticScene {
  Image base;
  std::vector<PixelPos> trajectory;
  int view_w = 0;
  int view_h = 0;
};

struct RenderedFrame {
  Image image;
  PixelPos offset;
};

/// Viewport crop at the trajectory offset. Integer offsets copy pixels
/// directly; fractional ones are bilinear. Throws BoundsError when the
/// viewport leaves the canvas.
RenderedFrame render_frame(const SyntheticScene& scene, int frame_index);

/// Scene whose image content moves by `motion` pixels per frame (the
/// viewport offset moves by -motion). The canvas is sized to fit every
/// viewport.
SyntheticScene translation_scene(std::uint64_t seed, int frames, PixelPos motion, int view_w,
                                 int view_h, int crater_count);

/// Image content displacement of frame k relative to frame 0.
PixelPos content_displacement(const SyntheticScene& scene, int frame_index);

/// Smooth sum-of-sinusoids surface (wavelengths >= min_wavelength px)
/// evaluated at continuous coordinates; used for subpixel flow checks.
class SmoothSurface {
 public:
  SmoothSurface(std::uint64_t seed, double min_wavelength = 12.0, int components = 6);

  double operator()(double x, double y) const;

  /// Raster of the surface with content shifted by (dx, dy):
  /// out(x, y) = f(x - dx, y - dy).
  Image render(int w, int h, double dx = 0.0, double dy = 0.0) const;

 private:
  struct Wave {
    double kx, ky, phase, amp;
  };
  double offset_ = 128.0;
  std::vector<Wave> waves_;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw; stable
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive

 private:
  std::mt19937_64 engine_;
};

}  // namespace lunar::testkit
