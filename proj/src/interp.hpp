#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "ch2/grid.hpp"

namespace ch2::detail {

/// Linear interpolation of samples on a uniform grid; `outside` beyond the ends.
inline double interp_uniform(const UniformGrid& g, std::span<const double> v, double x,
                             double outside) {
  if (x < g.lo || x > g.hi) return outside;
  const double s = (x - g.lo) / g.spacing();
  auto j = static_cast<std::size_t>(s);
  if (j >= g.n - 1) return v[g.n - 1];
  const double a = s - static_cast<double>(j);
  return (1.0 - a) * v[j] + a * v[j + 1];
}

/// Same, clamping to the end values.
inline double interp_uniform_clamped(const UniformGrid& g, std::span<const double> v, double x) {
  if (x <= g.lo) return v.front();
  if (x >= g.hi) return v.back();
  return interp_uniform(g, v, x, 0.0);
}

/// Linear interpolation on strictly increasing abscissae; constant beyond the ends.
inline double interp_sorted(std::span<const double> xs, std::span<const double> ys, double x) {
  if (xs.empty()) return 0.0;
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto j = static_cast<std::size_t>(it - xs.begin());
  const double x0 = xs[j - 1], x1 = xs[j];
  const double a = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
  return (1.0 - a) * ys[j - 1] + a * ys[j];
}

/// Inverse of a strictly increasing piecewise-linear map with unit slope beyond its ends.
inline double invert_sorted_unit_tails(std::span<const double> xs, std::span<const double> gs,
                                       double value) {
  if (value <= gs.front()) return xs.front() + (value - gs.front());
  if (value >= gs.back()) return xs.back() + (value - gs.back());
  return interp_sorted(gs, xs, value);
}

}  // namespace ch2::detail
