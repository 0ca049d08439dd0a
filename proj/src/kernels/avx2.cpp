// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "tables.hpp"

namespace lunar::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double ssd_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d, d));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void laplacian_row_avx2(const double* above, const double* mid, const double* below, double* out,
                        std::size_t n) {
  if (n < 3) return;
  const __m256d eight = _mm256_set1_pd(8.0);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d top = _mm256_add_pd(
        _mm256_add_pd(_mm256_loadu_pd(above + i - 1), _mm256_loadu_pd(above + i)),
        _mm256_loadu_pd(above + i + 1));
    const __m256d side = _mm256_add_pd(_mm256_loadu_pd(mid + i - 1), _mm256_loadu_pd(mid + i + 1));
    const __m256d bot = _mm256_add_pd(
        _mm256_add_pd(_mm256_loadu_pd(below + i - 1), _mm256_loadu_pd(below + i)),
        _mm256_loadu_pd(below + i + 1));
    const __m256d ring = _mm256_add_pd(_mm256_add_pd(top, side), bot);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(ring, _mm256_mul_pd(eight, _mm256_loadu_pd(mid + i))));
  }
  for (; i + 1 < n; ++i) {
    const double top = above[i - 1] + above[i] + above[i + 1];
    const double side = mid[i - 1] + mid[i + 1];
    const double bot = below[i - 1] + below[i] + below[i + 1];
    out[i] = ((top + side) + bot) - 8.0 * mid[i];
  }
}

void half_difference_avx2(const double* a, const double* b, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, half));
  }
  for (; i < n; ++i) out[i] = (a[i] - b[i]) * 0.5;
}

void accumulate_moments_avx2(const double* row, double* sum, double* sq, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(row + i);
    _mm256_storeu_pd(sum + i, _mm256_add_pd(_mm256_loadu_pd(sum + i), r));
    _mm256_storeu_pd(sq + i, _mm256_add_pd(_mm256_loadu_pd(sq + i), _mm256_mul_pd(r, r)));
  }
  for (; i < n; ++i) {
    sum[i] += row[i];
    sq[i] += row[i] * row[i];
  }
}

void window_sum_avx2(const double* in, double* out, std::size_t n_out, std::size_t w) {
  std::size_t u = 0;
  for (; u + 4 <= n_out; u += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < w; ++i) acc = _mm256_add_pd(acc, _mm256_loadu_pd(in + u + i));
    _mm256_storeu_pd(out + u, acc);
  }
  for (; u < n_out; ++u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) acc += in[u + i];
    out[u] = acc;
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels table{
      Backend::Avx2,        ssd_avx2,
      dot_avx2,             laplacian_row_avx2,
      half_difference_avx2, accumulate_moments_avx2,
      window_sum_avx2,
  };
  return table;
}

}  // namespace lunar::simd
