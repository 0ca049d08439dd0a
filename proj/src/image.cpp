#include "lunar/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lunar {

Image::Image(int width, int height, double fill) {
  if (width < 1 || height < 1) {
    throw BoundsError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  width_ = width;
  height_ = height;
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<double> pixels) {
  if (width < 1 || height < 1) {
    throw BoundsError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw BoundsError("pixel count " + std::to_string(pixels.size()) + " does not match " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  width_ = width;
  height_ = height;
  pixels_ = std::move(pixels);
}

Image extract_subimage(const Image& img, PixelIndex anchor, int w, int h) {
  if (w < 1 || h < 1 || anchor.x < 0 || anchor.y < 0 || anchor.x + w > img.width() ||
      anchor.y + h > img.height()) {
    throw BoundsError("window " + std::to_string(w) + "x" + std::to_string(h) + " at (" +
                      std::to_string(anchor.x) + "," + std::to_string(anchor.y) +
                      ") exceeds image " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()));
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    auto src = img.row(anchor.y + y).subspan(anchor.x, w);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

double sample_bilinear(const Image& img, double x, double y) {
  // Clamp the base cell so the far edge (x == width-1) still has a right
  // neighbour; its weight is then exactly 1.
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, std::max(0, img.width() - 2));
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, std::max(0, img.height() - 2));
  const double fx = x - x0;
  const double fy = y - y0;
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);

  const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
  const double bottom = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
  return (1.0 - fy) * top + fy * bottom;
}

}  // namespace lunar
