#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace islanding {

/// Power quantum used by the circle search and the partition DP. Source
/// output is rounded down and load is rounded up, so a solution that fits
/// in quantized units also fits in true kW.
using Units = std::int64_t;

namespace detail {
// Absorbs binary representation error, e.g. 0.7 / 0.1 = 6.999999999999999.
inline constexpr double kQuantumSlack = 1e-9;

inline void require_granularity(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("granularity must be positive");
}
}  // namespace detail

inline Units floor_units(double kw, double granularity) {
  detail::require_granularity(granularity);
  return static_cast<Units>(
      std::floor(kw / granularity + detail::kQuantumSlack));
}

inline Units ceil_units(double kw, double granularity) {
  detail::require_granularity(granularity);
  if (kw <= 0.0) return 0;
  return static_cast<Units>(
      std::ceil(kw / granularity - detail::kQuantumSlack));
}

inline double floor_to(double kw, double granularity) {
  return static_cast<double>(floor_units(kw, granularity)) * granularity;
}

inline double ceil_to(double kw, double granularity) {
  return static_cast<double>(ceil_units(kw, granularity)) * granularity;
}

}  // namespace islanding
