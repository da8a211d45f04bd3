#pragma once

#include <cstddef>
#include <vector>

#include "ch2/grid.hpp"
#include "ch2/state.hpp"
#include "ch2/transform.hpp"

namespace ch2 {

struct MetricOptions {
  double tol_r = kDefaultTolR;  // zero test for r, shared with the region classifier
  double meas_tol = -1.0;       // mismatch measure that switches kappa on; negative means 2 dxi
};

/// d_R and its parts: total = v_norm + g_l2 + kappa, v_norm = v_sup + v_l2 + v_const.
struct MetricReport {
  double total = 0.0;
  double v_norm = 0.0;
  double v_sup = 0.0;    // sup |zeta - zeta~|
  double v_l2 = 0.0;     // sum of L2 norms of the Ubar, q, w, h, rbar differences
  double v_const = 0.0;  // |c - c~| + |k - k~|
  double g_l2 = 0.0;     // L2 norm of g(X) - g(X~)
  double kappa = 0.0;    // 0 or 1
  std::size_t r_mismatch = 0;
};

/// Throws GridMismatchError if the label grids differ.
MetricReport d_R(const LagrangianState& X, const LagrangianState& Y, const MetricOptions& opt = {});

/// 0 or 1: whether the supports of r and r~ differ on more than meas_tol.
double kappa_term(const LagrangianState& X, const LagrangianState& Y, const MetricOptions& opt = {},
                  std::size_t* mismatch = nullptr);

/// d_R of the two Lagrangian images on the label grid xi.
MetricReport d_D(const EulerianState& a, const EulerianState& b, const UniformGrid& xi,
                 const LagrangianOptions& lopt = {}, const MetricOptions& opt = {});

/// Nodes with h/(q+h) >= 1 - gamma, w <= 0 and r = 0.
std::vector<std::size_t> kappa_set(const LagrangianState& X, double gamma,
                                   double tol_r = kDefaultTolR);

struct EnergyReport {
  double t = 0.0;
  double sigma = 0.0;            // sum of (Ubar^2 q + h) dxi
  double mu_total = 0.0;         // sum of h dxi
  double eulerian_energy = 0.0;  // sum of h dxi over unfrozen nodes with q > 0
  double F = 0.0;                // mu_total - eulerian_energy
};

EnergyReport energy_report(const LagrangianState& X);

}  // namespace ch2
