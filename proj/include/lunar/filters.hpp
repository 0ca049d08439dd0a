#pragma once

#include "lunar/image.hpp"

namespace lunar {

/// Block-averaging interval (S_x, S_y) of the low-pass stage.
struct SubsampleSpec {
  int s_x = 5;
  int s_y = 5;
};

/// Local variance of the Laplacian-filtered, subsampled image.
///
/// cells(u, v) is the variance over the window_w x window_h block whose
/// top-left is (u, v); only windows fully inside the filtered image are
/// produced, so the grid is (filtered dims - window dims + 1).
struct VarianceMap {
  Image cells;
  int window_w = 0;
  int window_h = 0;

  int width() const { return cells.width(); }
  int height() const { return cells.height(); }
  double at(int u, int v) const { return cells.at(u, v); }
};

/// Averaging subsample: each output pixel is the mean of one S_x x S_y block.
/// Trailing rows/columns that do not fill a block are dropped.
Image average_subsample(const Image& img, SubsampleSpec spec);

/// 8-neighbour Laplacian (ring of ones, centre -8) with zero padding outside
/// the image. Output has the input dimensions.
Image laplacian_filter(const Image& img);

/// One-pass variance map: mean of squares minus square of mean over each
/// valid window. Rounding-level negatives are clamped to zero.
VarianceMap variance_map(const Image& filtered, int window_w, int window_h);

/// Subsample -> Laplacian -> variance, the contrast scoring chain.
VarianceMap contrast_map(const Image& frame, SubsampleSpec spec, int window_w, int window_h);

}  // namespace lunar
