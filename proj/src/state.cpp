#include "ch2/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ch2/partition.hpp"

namespace ch2 {

double Measure::ac_mass(const UniformGrid& grid) const {
  double m = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) m += grid.weight(i) * density[i];
  return m;
}

double Measure::atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

double EulerianState::u(std::size_t i) const { return ubar[i] + c * partition::chi(x.node(i)); }

std::vector<double> EulerianState::ux() const {
  const std::size_t n = x.n;
  const double dx = x.spacing();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  auto uu = [&](std::size_t i) { return u(i); };
  out[0] = (uu(1) - uu(0)) / dx;
  out[n - 1] = (uu(n - 1) - uu(n - 2)) / dx;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // the chi part is differentiated exactly
    out[i] = (ubar[i + 1] - ubar[i - 1]) / (2.0 * dx) + c * partition::dchi(x.node(i));
  }
  return out;
}

EulerianState EulerianState::zero(const UniformGrid& grid) {
  EulerianState e;
  e.x = grid;
  e.ubar.assign(grid.n, 0.0);
  e.rhobar.assign(grid.n, 0.0);
  e.mu.density.assign(grid.n, 0.0);
  return e;
}

double LagrangianState::U(std::size_t i) const { return Ubar[i] + c * partition::chi(y(i)); }

std::vector<double> LagrangianState::y_values() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = y(i);
  return out;
}

LagrangianState LagrangianState::identity(const UniformGrid& grid, double k) {
  LagrangianState X;
  X.xi = grid;
  X.zeta.assign(grid.n, 0.0);
  X.Ubar.assign(grid.n, 0.0);
  X.q.assign(grid.n, 1.0);
  X.w.assign(grid.n, 0.0);
  X.h.assign(grid.n, 0.0);
  X.rbar.assign(grid.n, 0.0);
  X.tau.assign(grid.n, kNever);
  X.k = k;
  return X;
}

// ---------------------------------------------------------------------------

std::string to_string(Invariant inv) {
  switch (inv) {
    case Invariant::Shape: return "shape";
    case Invariant::Sign: return "sign";
    case Invariant::Compatibility: return "compatibility";
    case Invariant::Nondegeneracy: return "nondegeneracy";
    case Invariant::FrozenNode: return "frozen_node";
    case Invariant::LeftDecay: return "left_decay";
  }
  return "unknown";
}

bool ValidationReport::has(Invariant inv) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.invariant == inv; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) {
    os << to_string(v.invariant) << ": " << v.count << " node(s), worst node " << v.node
       << " magnitude " << v.magnitude << "; ";
  }
  return os.str();
}

namespace {

/// Tracks the worst offender for one invariant.
struct Tally {
  Invariant inv;
  std::size_t node = 0;
  double worst = 0.0;
  std::size_t count = 0;

  void add(std::size_t i, double mag) {
    ++count;
    if (mag > worst) {
      worst = mag;
      node = i;
    }
  }
  void flush(ValidationReport& rep) const {
    if (count > 0) rep.violations.push_back({inv, node, worst, count});
  }
};

}  // namespace

ValidationReport validate_G(const LagrangianState& X, const GTolerances& tol) {
  ValidationReport rep;
  const std::size_t n = X.xi.n;
  if (n < 2 || X.zeta.size() != n || X.Ubar.size() != n || X.q.size() != n || X.w.size() != n ||
      X.h.size() != n || X.rbar.size() != n || X.tau.size() != n) {
    rep.violations.push_back({Invariant::Shape, 0, 1.0, 1});
    return rep;
  }

  Tally sign{Invariant::Sign}, compat{Invariant::Compatibility}, floor{Invariant::Nondegeneracy},
      frozen{Invariant::FrozenNode};
  for (std::size_t i = 0; i < n; ++i) {
    const double q = X.q[i], h = X.h[i], w = X.w[i], rb = X.rbar[i];
    const double neg = std::max(-q, -h);
    if (neg > tol.sign) sign.add(i, neg);
    const double res = std::abs(q * h - (w * w + tol.eta * rb * rb));
    if (res > tol.compat * (1.0 + std::abs(q * h))) compat.add(i, res);
    if (q + h < tol.floor) floor.add(i, tol.floor - (q + h));
    if (X.frozen(i)) {
      const double m = std::max({std::abs(q), std::abs(w), std::abs(rb)});
      if (m != 0.0) frozen.add(i, m);
    }
  }
  sign.flush(rep);
  compat.flush(rep);
  floor.flush(rep);
  frozen.flush(rep);
  if (std::abs(X.zeta.front()) > tol.left_decay)
    rep.violations.push_back({Invariant::LeftDecay, 0, std::abs(X.zeta.front()), 1});
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(Region r) {
  switch (r) {
    case Region::Omega1: return "Omega1";
    case Region::Omega2: return "Omega2";
    case Region::Omega3: return "Omega3";
  }
  return "unknown";
}

bool r_nonzero(double rbar, double k, double q, double tol_r) {
  const double kq = k * q;
  return std::abs(rbar + kq) > tol_r * (1.0 + std::abs(rbar) + std::abs(kq));
}

double g1(const Point8& x) { return std::abs(x[4]) + 2.0 * std::abs(x[6] * x[7]) + 2.0 * x[3]; }

double g2(const Point8& x) { return x[3] + x[5]; }

Region classify_region(const Point8& x, double tol_r) {
  if (r_nonzero(x[6], x[7], x[3], tol_r)) return Region::Omega3;
  if (g1(x) <= g2(x) && x[4] <= 0.0) return Region::Omega1;
  return Region::Omega2;
}

double g_value(const Point8& x, double tol_r) {
  return classify_region(x, tol_r) == Region::Omega1 ? g1(x) : g2(x);
}

Point8 point_at(const LagrangianState& X, std::size_t i) {
  return {X.y(i), X.Ubar[i], X.c, X.q[i], X.w[i], X.h[i], X.rbar[i], X.k};
}

std::vector<double> g_values(const LagrangianState& X, double tol_r) {
  std::vector<double> out(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = g_value(point_at(X, i), tol_r);
  return out;
}

EulerianRow eulerian_row(const EulerianState& e, std::size_t i) {
  // ux() is O(n); computing the single entry keeps this cheap.
  const std::size_t n = e.x.n;
  const double dx = e.x.spacing();
  double ux = 0.0;
  if (i == 0) {
    ux = (e.u(1) - e.u(0)) / dx;
  } else if (i + 1 == n) {
    ux = (e.u(n - 1) - e.u(n - 2)) / dx;
  } else {
    ux = (e.ubar[i + 1] - e.ubar[i - 1]) / (2.0 * dx) + e.c * partition::dchi(e.x.node(i));
  }
  return {e.x.node(i), e.ubar[i], e.c, ux, e.rhobar[i], e.k};
}

double g_eulerian(const EulerianRow& row, double tol_r) {
  const Point8 xe{row.x, row.ubar, row.c, 1.0, row.ux, row.ux * row.ux + row.rhobar * row.rhobar,
                  row.rhobar, row.k};
  return g_value(xe, tol_r);
}

double g_eulerian_l1_defect(const EulerianState& e, double tol_r) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.x.n; ++i)
    s += e.x.weight(i) * std::abs(g_eulerian(eulerian_row(e, i), tol_r) - 1.0);
  return s;
}

double h_infinity_norm(const EulerianState& e) {
  const double dx = e.x.spacing();
  double l2 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < e.x.n; ++i) l2 += e.x.weight(i) * e.ubar[i] * e.ubar[i];
  for (std::size_t i = 0; i + 1 < e.x.n; ++i) {
    const double d = (e.ubar[i + 1] - e.ubar[i]) / dx;
    d2 += dx * d * d;
  }
  return std::sqrt(l2 + d2) + std::abs(e.c);
}

double l2_const_norm(const EulerianState& e) {
  double l2 = 0.0;
  for (std::size_t i = 0; i < e.x.n; ++i) l2 += e.x.weight(i) * e.rhobar[i] * e.rhobar[i];
  return std::sqrt(l2) + std::abs(e.k);
}

}  // namespace ch2
