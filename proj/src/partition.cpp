#include "ch2/partition.hpp"

#include <cmath>

#include "ch2/grid.hpp"

namespace ch2 {

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = node(i);
  return out;
}

bool UniformGrid::same_as(const UniformGrid& other, double tol) const {
  return n == other.n && std::abs(lo - other.lo) <= tol * (1.0 + std::abs(lo)) &&
         std::abs(hi - other.hi) <= tol * (1.0 + std::abs(hi));
}

namespace partition {

double chi(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double dchi(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double s = x * (1.0 - x);
  return 30.0 * s * s;
}

double d2chi(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

}  // namespace partition
}  // namespace ch2
