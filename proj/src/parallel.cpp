#include "fractri/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fractri {

int max_threads() {
#ifdef _OPENMP
  static const int cached = [] {
    const int hw = omp_get_max_threads();
    if (const char* env = std::getenv("FRACTRI_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap > 0) return std::min(cap, hw);
      } catch (...) {
      }
    }
    return hw;
  }();
  return cached;
#else
  return 1;
#endif
}

}  // namespace fractri
