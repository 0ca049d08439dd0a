#include "lunar/filters.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "lunar/kernels.hpp"

namespace lunar {

Image average_subsample(const Image& img, SubsampleSpec spec) {
  if (spec.s_x < 1 || spec.s_y < 1) {
    throw BoundsError("subsample intervals must be >= 1");
  }
  if (img.width() < spec.s_x || img.height() < spec.s_y) {
    throw BoundsError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                      " is smaller than one " + std::to_string(spec.s_x) + "x" +
                      std::to_string(spec.s_y) + " block");
  }
  const int out_w = img.width() / spec.s_x;
  const int out_h = img.height() / spec.s_y;
  const double count = static_cast<double>(spec.s_x) * spec.s_y;

  Image out(out_w, out_h);
  std::vector<double> block_sum(out_w);
  for (int v = 0; v < out_h; ++v) {
    std::fill(block_sum.begin(), block_sum.end(), 0.0);
    for (int j = 0; j < spec.s_y; ++j) {
      auto src = img.row(spec.s_y * v + j);
      for (int u = 0; u < out_w; ++u) {
        const double* p = src.data() + static_cast<std::size_t>(spec.s_x) * u;
        for (int i = 0; i < spec.s_x; ++i) block_sum[u] += p[i];
      }
    }
    auto dst = out.row(v);
    for (int u = 0; u < out_w; ++u) dst[u] = block_sum[u] / count;
  }
  return out;
}

Image laplacian_filter(const Image& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw BoundsError("Laplacian needs at least a 3x3 image");
  }
  const int w = img.width();
  const int h = img.height();

  // Zero-padded copy so every row, including the border, runs through the
  // same kernel.
  const int pw = w + 2;
  std::vector<double> padded(static_cast<std::size_t>(pw) * (h + 2), 0.0);
  for (int y = 0; y < h; ++y) {
    auto src = img.row(y);
    std::copy(src.begin(), src.end(), padded.begin() + static_cast<std::ptrdiff_t>(y + 1) * pw + 1);
  }

  const auto& k = simd::kernels();
  Image out(w, h);
  std::vector<double> line(pw);
  for (int y = 0; y < h; ++y) {
    const double* above = padded.data() + static_cast<std::size_t>(y) * pw;
    k.laplacian_row(above, above + pw, above + 2 * pw, line.data(), pw);
    std::copy(line.begin() + 1, line.begin() + 1 + w, out.row(y).begin());
  }
  return out;
}

VarianceMap variance_map(const Image& filtered, int window_w, int window_h) {
  if (window_w < 1 || window_h < 1) throw BoundsError("variance window must be at least 1x1");
  if (filtered.width() < window_w || filtered.height() < window_h) {
    throw BoundsError("variance window " + std::to_string(window_w) + "x" +
                      std::to_string(window_h) + " larger than image " +
                      std::to_string(filtered.width()) + "x" + std::to_string(filtered.height()));
  }
  const int w = filtered.width();
  const int out_w = w - window_w + 1;
  const int out_h = filtered.height() - window_h + 1;
  const double inv_n = 1.0 / (static_cast<double>(window_w) * window_h);

  const auto& k = simd::kernels();
  VarianceMap vm{Image(out_w, out_h), window_w, window_h};
  std::vector<double> col_sum(w), col_sq(w), win_sum(out_w), win_sq(out_w);
  for (int v = 0; v < out_h; ++v) {
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    std::fill(col_sq.begin(), col_sq.end(), 0.0);
    for (int j = 0; j < window_h; ++j) {
      k.accumulate_moments(filtered.row(v + j).data(), col_sum.data(), col_sq.data(), w);
    }
    k.window_sum(col_sum.data(), win_sum.data(), out_w, window_w);
    k.window_sum(col_sq.data(), win_sq.data(), out_w, window_w);
    auto dst = vm.cells.row(v);
    for (int u = 0; u < out_w; ++u) {
      const double mean = inv_n * win_sum[u];
      dst[u] = std::max(0.0, inv_n * win_sq[u] - mean * mean);
    }
  }
  return vm;
}

VarianceMap contrast_map(const Image& frame, SubsampleSpec spec, int window_w, int window_h) {
  return variance_map(laplacian_filter(average_subsample(frame, spec)), window_w, window_h);
}

}  // namespace lunar
