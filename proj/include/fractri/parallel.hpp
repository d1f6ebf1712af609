#ifndef FRACTRI_PARALLEL_HPP
#define FRACTRI_PARALLEL_HPP

namespace fractri {

// Thread budget for the OpenMP kernels. FRACTRI_THREADS caps it; unset or 0
// means the OpenMP default. Always 1 when built without OpenMP.
int max_threads();

}  // namespace fractri

#endif
