#include "lunar/kernels.hpp"

namespace lunar::simd {
namespace {

double ssd_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void laplacian_row_scalar(const double* above, const double* mid, const double* below, double* out,
                          std::size_t n) {
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double top = above[i - 1] + above[i] + above[i + 1];
    const double side = mid[i - 1] + mid[i + 1];
    const double bot = below[i - 1] + below[i] + below[i + 1];
    out[i] = ((top + side) + bot) - 8.0 * mid[i];
  }
}

void half_difference_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] - b[i]) * 0.5;
}

void accumulate_moments_scalar(const double* row, double* sum, double* sq, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] += row[i];
    sq[i] += row[i] * row[i];
  }
}

void window_sum_scalar(const double* in, double* out, std::size_t n_out, std::size_t w) {
  for (std::size_t u = 0; u < n_out; ++u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) acc += in[u + i];
    out[u] = acc;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels table{
      Backend::Scalar,       ssd_scalar,
      dot_scalar,            laplacian_row_scalar,
      half_difference_scalar, accumulate_moments_scalar,
      window_sum_scalar,
  };
  return table;
}

}  // namespace lunar::simd
