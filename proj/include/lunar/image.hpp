#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lunar {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File content is not a supported image or is malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A geometric precondition failed (window outside image, image too small).
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Subpixel image coordinate. x is the column, y the row, origin top-left.
struct PixelPos {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

/// Integer pixel coordinate, used for anchors and window origins.
struct PixelIndex {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;

  PixelPos to_pos() const { return {static_cast<double>(x), static_cast<double>(y)}; }
};

/// Row-major grayscale image with real-valued intensities.
///
/// Intensities are stored as doubles so filter outputs (signed, fractional)
/// share the type with loaded 8-bit frames.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  Image(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  double& at(int x, int y) { return pixels_[index(x, y)]; }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::span<const double> row(int y) const {
    return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<double> row(int y) {
    return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Copy of the w x h window whose top-left pixel is `anchor`.
/// Throws BoundsError when the window leaves the image.
Image extract_subimage(const Image& img, PixelIndex anchor, int w, int h);

/// Bilinear sample. Valid for 0 <= x <= width-1 and 0 <= y <= height-1;
/// integer coordinates return the stored pixel exactly.
double sample_bilinear(const Image& img, double x, double y);

}  // namespace lunar
