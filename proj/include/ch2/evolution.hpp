#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ch2/kernels.hpp"
#include "ch2/state.hpp"

namespace ch2 {

/// Time derivatives of the evolving fields; c and k are constant.
struct Rates {
  std::vector<double> zeta, Ubar, q, w, h, rbar;
  void resize(std::size_t n);
};

struct BreakEvent {
  std::size_t node = 0;
  double tau = 0.0;
  double y_at_break = 0.0;
  double h_at_break = 0.0;
  bool localized = true;  // false if the root could not be bracketed
};

struct SolverSettings {
  double dt = 0.0;            // fixed step; 0 selects the CFL bound each step
  double cfl = 0.5;           // dt <= cfl dxi / (1 + sup |u|)
  double q_tol = 1e-9;        // q at or below this counts as broken
  int event_refine = 20;      // bisection depth for breaking times
  double break_ratio = 0.5;   // q/(q+h) at a sign change of w that counts as breaking
  double tol_compat = 1e-8;   // compatibility residual that triggers re-projection
  double neg_tol = 1e-8;      // tolerated negative h before a step is rejected
  double tol_r = kDefaultTolR;
  double stage_slack = 1.0;   // tolerated decrease of y inside a step, in units of dxi
  Mode mode = Mode::Dissipative;
  int order = 4;              // classical explicit Runge-Kutta
};

/// Right-hand side. The mask uses X.t, so stage states that keep the
/// step-start time also keep the step-start mask.
void rhs(const LagrangianState& X, const SystemParams& sys, Mode mode, KernelWorkspace& ws,
         PQ& pq, Rates& out);
Rates rhs(const LagrangianState& X, const SystemParams& sys = {}, Mode mode = Mode::Dissipative);

/// Finds nodes that break in [t0, t0 + dt] using cubic Hermite interpolation
/// between the two states and freezes them in X_post.
std::vector<BreakEvent> detect_and_freeze(const LagrangianState& X_pre, LagrangianState& X_post,
                                          double t0, double dt, const SystemParams& sys,
                                          const SolverSettings& settings);

struct StepInfo {
  double t = 0.0;               // time after the step
  double dt = 0.0;
  double compat_residual = 0.0;  // max relative residual before re-projection
  bool projected = false;
  double projection_size = 0.0;  // max |change of h| from re-projection
  double kernel_jump = 0.0;      // sup |change of Pminus| caused by freezing
  std::vector<BreakEvent> events;
};

/// Persistent buffers for repeated steps.
class Stepper {
 public:
  Stepper(SystemParams sys, SolverSettings settings);

  /// Step size the CFL rule would pick for X.
  double suggested_dt(const LagrangianState& X) const;
  /// Advances X by dt in place.
  StepInfo step(LagrangianState& X, double dt);

  /// Breaking detection for one step; pre_rates are the slopes at pre.
  std::vector<BreakEvent> detect_events(const LagrangianState& pre, LagrangianState& post,
                                        double dt, const Rates& pre_rates);

  const SystemParams& system() const { return sys_; }
  const SolverSettings& settings() const { return settings_; }

 private:
  SystemParams sys_;
  SolverSettings settings_;
  KernelWorkspace ws_;
  KernelOptions kopt_;
  PQ pq_;
  Rates k1_, k2_, k3_, k4_, end_rates_;
  LagrangianState stage_;
};

/// One step with a fresh Stepper.
StepInfo step(LagrangianState& X, const SystemParams& sys, const SolverSettings& settings,
              double dt);

// ---------------------------------------------------------------------------
// Parameter reduction: v(t, x) = u(t, x - alpha t) + alpha, tau = sqrt(eta) rho,
// with alpha = kappa / 2, solves the kappa = 0, eta = 1 system.

struct Reduction {
  EulerianState data;  // reduced initial data (u_left is carried in params)
  SystemParams params;
  double alpha = 0.0;
  double sqrt_eta = 1.0;
};

Reduction reduce_parameters(const EulerianState& e, double kappa, double eta);

/// Maps a reduced Eulerian state at time t back to the original variables.
EulerianState shift_back(const EulerianState& reduced, const Reduction& red, double t);

}  // namespace ch2
