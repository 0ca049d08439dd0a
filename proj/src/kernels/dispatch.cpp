#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tables.hpp"

namespace lunar::simd {
namespace {

bool cpu_has_avx2() {
#if defined(LUNAR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels* initial_table() {
  if (const char* env = std::getenv("LUNAR_SIMD")) {
    const std::string want = env;
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && backend_available(Backend::Avx2)) return &kernels_for(Backend::Avx2);
  }
  if (backend_available(Backend::Avx2)) return &kernels_for(Backend::Avx2);
  return &scalar_kernels();
}

std::atomic<const Kernels*>& active() {
  static std::atomic<const Kernels*> table{initial_table()};
  return table;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2: {
      static const bool has = cpu_has_avx2();
      return has;
    }
  }
  return false;
}

const Kernels& kernels_for(Backend b) {
  if (!backend_available(b)) {
    throw std::runtime_error("SIMD backend not available: " + std::string(backend_name(b)));
  }
  switch (b) {
    case Backend::Scalar:
      return scalar_kernels();
    case Backend::Avx2:
#ifdef LUNAR_HAVE_AVX2
      return avx2_kernels();
#else
      break;
#endif
  }
  return scalar_kernels();
}

const Kernels& kernels() { return *active().load(std::memory_order_acquire); }

void set_backend(Backend b) { active().store(&kernels_for(b), std::memory_order_release); }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace lunar::simd
