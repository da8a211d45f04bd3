#pragma once

#include <cstddef>
#include <vector>

namespace ch2 {

/// Uniform 1D grid with nodes lo, lo + d, ..., hi (n nodes, n >= 2).
struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double spacing() const { return (hi - lo) / static_cast<double>(n - 1); }
  double node(std::size_t i) const {
    return i + 1 == n ? hi : lo + static_cast<double>(i) * spacing();
  }
  /// Trapezoid quadrature weight of node i.
  double weight(std::size_t i) const {
    return (i == 0 || i + 1 == n) ? 0.5 * spacing() : spacing();
  }
  std::vector<double> nodes() const;
  bool same_as(const UniformGrid& other, double tol = 1e-12) const;
};

}  // namespace ch2
