#pragma once

#include <span>
#include <vector>

#include "lunar/image.hpp"

namespace lunar {

struct DetectorConfig {
  int patch_radius = 1;        // summation patch is (2r+1)^2; r = 1 is the 3x3 W1 patch
  double lambda_t = 1500.0;    // acceptance threshold on the smaller eigenvalue
  int nms_radius = 2;          // Chebyshev
  int max_features = 10;       // per sub-image
  int min_separation = 0;      // optional extra spacing between kept points, 0 = off
};

/// Entries of the 2x2 gradient second-moment matrix [[a, b], [b, c]].
struct StructureTensor {
  double a = 0.0;  // sum Ix^2
  double b = 0.0;  // sum Ix*Iy
  double c = 0.0;  // sum Iy^2

  friend bool operator==(const StructureTensor&, const StructureTensor&) = default;
};

struct FeaturePoint {
  int id = -1;                 // track identity, assigned by the pipeline
  PixelPos pos;
  double score = 0.0;          // smaller eigenvalue of the tensor
  StructureTensor tensor;
  int parent_template = -1;
};

struct Gradients {
  Image gx;
  Image gy;
};

/// Halved central differences; the one-pixel border is zero.
Gradients image_gradients(const Image& img);

/// Tensor from paired gradient samples. Shared by the detector and the flow
/// solver so both produce identical sums for identical samples.
StructureTensor tensor_from_samples(std::span<const double> gx, std::span<const double> gy);

/// Exact sums over the (2r+1)^2 patch centred on `center`. The patch must lie
/// inside the gradient interior (one pixel in from every edge).
StructureTensor structure_tensor_at(const Gradients& grads, PixelIndex center, int patch_radius);
StructureTensor structure_tensor_at(const Image& grad_x, const Image& grad_y, PixelIndex center,
                                    int patch_radius);

/// (a - l)(c - l) - b^2 > 0 and a > l. Root-free; true iff the smaller
/// eigenvalue exceeds l.
bool accept_pixel(const StructureTensor& t, double lambda_t);

/// Smaller eigenvalue ((a + c) - sqrt((a - c)^2 + 4b^2)) / 2.
double min_eigenvalue(const StructureTensor& t);

/// Exhaustive corner search over every valid centre of `sub`, followed by
/// strict non-maximum suppression and a top-N cut. Positions are in `sub`
/// coordinates.
std::vector<FeaturePoint> detect_features(const Image& sub, const DetectorConfig& cfg,
                                          int parent_template);

}  // namespace lunar
