#pragma once

#include <random>

namespace hmr {

// Uniform double in [0,1) built from the raw 64-bit stream, so sampled
// values are reproducible across standard libraries (the distribution
// classes in <random> are not pinned down by the standard).
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace hmr
