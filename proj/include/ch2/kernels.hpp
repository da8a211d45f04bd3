#pragma once

#include <vector>

#include "ch2/state.hpp"

namespace ch2 {

/// Coefficients of the system being integrated. The reduced system has
/// kappa = 0 and eta = 1; u_left is the limit of u at -infinity, which the
/// parameter reduction moves away from zero.
struct SystemParams {
  double kappa = 0.0;
  double eta = 1.0;
  double u_left = 0.0;

  /// Coefficient of the linear term once u is written as u_left + U.
  double kappa_eff() const { return kappa + 2.0 * u_left; }
};

enum class Mode { Dissipative, Conservative };

/// Scratch space reused across kernel evaluations.
struct KernelWorkspace {
  std::vector<double> forward;   // sum over eta < xi
  std::vector<double> backward;  // sum over eta > xi
  std::vector<double> density;   // weighted integrand per node
  std::vector<char> active;      // tau > t (all ones in conservative mode)
  std::vector<double> chi1_sq;   // chi'(y)^2
  std::vector<double> chi_chi2;  // chi(y) chi''(y)

  void resize(std::size_t n);
};

/// Pminus = P - U^2 - kappa_eff U - eta k^2 / 2, and Q = P_x o y.
struct PQ {
  std::vector<double> Pminus;
  std::vector<double> Q;
};

struct KernelOptions {
  Mode mode = Mode::Dissipative;
  double monotone_tol = 1e-9;  // tolerated decrease of y between neighbours
};

/// O(N) evaluation by forward and backward exponential sweeps.
/// Throws NonMonotoneError if y decreases by more than monotone_tol.
void compute_PQ(const LagrangianState& X, const SystemParams& sys, const KernelOptions& opt,
                KernelWorkspace& ws, PQ& out);

PQ compute_PQ(const LagrangianState& X, const SystemParams& sys = {});
PQ compute_PQ_conservative(const LagrangianState& X, const SystemParams& sys = {});

}  // namespace ch2
