#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace bopim {

/// Empirical quantile by linear interpolation between order statistics
/// (position p * (n - 1) in the sorted sample). `sorted` must be ascending
/// and non-empty.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

}  // namespace bopim
