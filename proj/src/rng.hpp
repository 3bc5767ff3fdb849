#pragma once

#include <cmath>
#include <random>

namespace ssobs::detail {

// Uniform draw in [0, 1) from the top 53 bits of the generator word, so the
// stream is reproducible independent of the platform's distribution
// implementation.
inline double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform draw in [-amplitude, amplitude].
inline double symmetric_uniform(std::mt19937_64& gen, double amplitude) {
  return amplitude * (2.0 * unit_uniform(gen) - 1.0);
}

// Standard normal via Box-Muller on the deterministic uniform.
inline double gaussian(std::mt19937_64& gen) {
  double u1 = unit_uniform(gen);
  while (u1 <= 0.0) u1 = unit_uniform(gen);
  const double u2 = unit_uniform(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace ssobs::detail
