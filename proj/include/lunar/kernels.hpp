#pragma once

#include <cstddef>
#include <string_view>

// Inner-loop arithmetic shared by the filters, block matcher, detector and
// flow solver. Every kernel has a scalar reference; SIMD variants are picked
// at runtime from the host CPU.
//
// Element-wise kernels (laplacian_row, half_difference, accumulate_moments,
// window_sum) evaluate each output with the same operation order as the
// scalar reference, so all backends agree bit for bit. Reductions (ssd, dot)
// reassociate the sum: they agree exactly when every partial sum is
// representable (e.g. integer intensities) and to rounding otherwise.

namespace lunar::simd {

enum class Backend { Scalar, Avx2 };

struct Kernels {
  Backend backend;

  /// Sum of (a[i] - b[i])^2.
  double (*ssd)(const double* a, const double* b, std::size_t n);

  /// Sum of a[i] * b[i].
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// out[i] for 1 <= i < n-1: 8-neighbour sum minus 8 * mid[i].
  /// Evaluated as (above[i-1]+above[i]+above[i+1]) + (mid[i-1]+mid[i+1])
  /// + (below[i-1]+below[i]+below[i+1]) - 8*mid[i].
  void (*laplacian_row)(const double* above, const double* mid, const double* below, double* out,
                        std::size_t n);

  /// out[i] = (a[i] - b[i]) * 0.5.
  void (*half_difference)(const double* a, const double* b, double* out, std::size_t n);

  /// sum[i] += row[i]; sq[i] += row[i] * row[i].
  void (*accumulate_moments)(const double* row, double* sum, double* sq, std::size_t n);

  /// out[u] = in[u] + in[u+1] + ... + in[u+w-1], left to right, for u < n_out.
  void (*window_sum)(const double* in, double* out, std::size_t n_out, std::size_t w);
};

const Kernels& scalar_kernels();

/// True when the backend was compiled in and the CPU supports it.
bool backend_available(Backend b);

/// Kernel table for a specific backend. Throws if unavailable.
const Kernels& kernels_for(Backend b);

/// The active table. Defaults to the best available backend; the
/// LUNAR_SIMD environment variable ("scalar" or "avx2") overrides.
const Kernels& kernels();

/// Switch the active backend (tests, CLI). Throws if unavailable.
void set_backend(Backend b);

std::string_view backend_name(Backend b);

}  // namespace lunar::simd
