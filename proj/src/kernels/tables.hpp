#pragma once

#include "lunar/kernels.hpp"

namespace lunar::simd {

#ifdef LUNAR_HAVE_AVX2
const Kernels& avx2_kernels();
#endif

}  // namespace lunar::simd
