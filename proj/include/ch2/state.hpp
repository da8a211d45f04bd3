#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ch2/grid.hpp"

namespace ch2 {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Energy measure: density samples on the Eulerian grid plus point masses.
struct Measure {
  std::vector<double> density;
  std::vector<Atom> atoms;  // strictly increasing locations, positive masses

  double ac_mass(const UniformGrid& grid) const;
  double atom_mass() const;
  double total(const UniformGrid& grid) const { return ac_mass(grid) + atom_mass(); }
};

/// u = ubar + c chi(x), rho = rhobar + k, sampled on x.
struct EulerianState {
  UniformGrid x;
  std::vector<double> ubar;
  double c = 0.0;
  std::vector<double> rhobar;
  double k = 0.0;
  Measure mu;

  double u(std::size_t i) const;
  double rho(std::size_t i) const { return rhobar[i] + k; }
  /// Centered difference of u (one-sided at the ends).
  std::vector<double> ux() const;

  static EulerianState zero(const UniformGrid& grid);
};

/// Lagrangian unknowns on the label grid. y = xi + zeta, U = Ubar + c chi(y),
/// r = rbar + k q. A node is frozen once tau <= t.
struct LagrangianState {
  UniformGrid xi;
  std::vector<double> zeta;
  std::vector<double> Ubar;
  double c = 0.0;
  std::vector<double> q;
  std::vector<double> w;
  std::vector<double> h;
  std::vector<double> rbar;
  double k = 0.0;
  std::vector<double> tau;
  double t = 0.0;

  std::size_t size() const { return zeta.size(); }
  double y(std::size_t i) const { return xi.node(i) + zeta[i]; }
  double U(std::size_t i) const;
  double r(std::size_t i) const { return rbar[i] + k * q[i]; }
  bool frozen(std::size_t i) const { return tau[i] <= t; }
  std::vector<double> y_values() const;

  /// zeta = 0, Ubar = 0, q = 1, w = h = rbar = 0, tau = never.
  static LagrangianState identity(const UniformGrid& grid, double k = 0.0);
};

// ---------------------------------------------------------------------------
// Admissibility of Lagrangian states.

enum class Invariant {
  Shape,          // array lengths disagree with the grid
  Sign,           // q >= 0 and h >= 0
  Compatibility,  // q h = w^2 + eta rbar^2
  Nondegeneracy,  // q + h bounded away from zero
  FrozenNode,     // frozen nodes carry q = w = rbar = 0
  LeftDecay,      // zeta -> 0 at the left end
};

std::string to_string(Invariant inv);

struct Violation {
  Invariant invariant;
  std::size_t node = 0;   // worst offending node
  double magnitude = 0.0;  // worst violation size
  std::size_t count = 0;   // number of offending nodes
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Invariant inv) const;
  std::string summary() const;
};

struct GTolerances {
  double compat = 1e-8;      // relative to 1 + q h
  double floor = 1e-12;      // lower bound for q + h
  double sign = 0.0;         // q, h >= -sign
  double left_decay = 1e-6;  // |zeta| at the left end
  double eta = 1.0;          // coupling weight in the compatibility identity
};

ValidationReport validate_G(const LagrangianState& X, const GTolerances& tol = {});

// ---------------------------------------------------------------------------
// Region classifier. A point is (y, Ubar, c, q, w, h, rbar, k).

using Point8 = std::array<double, 8>;

enum class Region { Omega1, Omega2, Omega3 };

std::string to_string(Region r);

inline constexpr double kDefaultTolR = 1e-12;

/// True when r = rbar + k q counts as nonzero:
/// |rbar + k q| > tol_r (1 + |rbar| + |k q|).
bool r_nonzero(double rbar, double k, double q, double tol_r = kDefaultTolR);

double g1(const Point8& x);
double g2(const Point8& x);
Region classify_region(const Point8& x, double tol_r = kDefaultTolR);
double g_value(const Point8& x, double tol_r = kDefaultTolR);

Point8 point_at(const LagrangianState& X, std::size_t i);
std::vector<double> g_values(const LagrangianState& X, double tol_r = kDefaultTolR);

/// One Eulerian sample: the ingredients of X_e(x) = (x, ubar, c, 1, u_x, u_x^2 + rhobar^2, rhobar, k).
struct EulerianRow {
  double x = 0.0;
  double ubar = 0.0;
  double c = 0.0;
  double ux = 0.0;
  double rhobar = 0.0;
  double k = 0.0;
};

EulerianRow eulerian_row(const EulerianState& e, std::size_t i);
double g_eulerian(const EulerianRow& row, double tol_r = kDefaultTolR);
/// Sum over nodes of |g(X_e) - 1| dx.
double g_eulerian_l1_defect(const EulerianState& e, double tol_r = kDefaultTolR);

// ---------------------------------------------------------------------------
// Norm diagnostics of the decompositions.

/// |ubar|_{H^1} + |c| (left limit is zero after reduction).
double h_infinity_norm(const EulerianState& e);
/// |rhobar|_{L^2} + |k|.
double l2_const_norm(const EulerianState& e);

}  // namespace ch2
