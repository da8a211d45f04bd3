#pragma once

#include <functional>
#include <vector>

#include "ch2/grid.hpp"
#include "ch2/state.hpp"

namespace ch2 {

/// A relabeling homeomorphism sampled on the label grid.
struct Relabeling {
  std::vector<double> f;      // f(xi_i)
  std::vector<double> f_inv;  // f^{-1}(xi_i)
  std::vector<double> df;     // f'(xi_i)

  static Relabeling identity(const UniformGrid& grid);
  /// Samples an analytic map; the inverse is found by bisection.
  static Relabeling from_function(const UniformGrid& grid, const std::function<double(double)>& f,
                                  const std::function<double(double)>& df);
  /// Smallest kappa with 1/(1+kappa) <= f' <= 1+kappa on the samples.
  double slope_bound() const;
  bool strictly_increasing() const;
};

struct LagrangianOptions {
  double eta = 1.0;  // weight of rhobar^2 in the energy density
};

/// Eulerian -> Lagrangian. y inverts x -> mu((-inf, x)) + x, so the output has
/// y + H = id. Throws GridTooCoarseError for atoms lighter than 2 dxi.
LagrangianState to_lagrangian(const EulerianState& e, const UniformGrid& xi,
                              const LagrangianOptions& opt = {});

struct EulerianOptions {
  double q_tol = 1e-9;        // nodes with q below this are degenerate
  double r_tol = 1e-10;       // allowed |rbar| on degenerate nodes
  double atom_min_cells = 2;  // clusters lighter than this many dxi are smeared
};

struct EulerianReport {
  double plateau_u_spread = 0.0;  // max spread of U across a degenerate run
  std::size_t smeared_clusters = 0;
};

/// Lagrangian -> Eulerian by pushing h dxi and rbar dxi forward under y.
EulerianState to_eulerian(const LagrangianState& X, const UniformGrid& x,
                          const EulerianOptions& opt = {}, EulerianReport* report = nullptr);

/// X o f: (y o f, U o f, h o f f', r o f f'); q and w pick up the same Jacobian.
LagrangianState relabel(const LagrangianState& X, const Relabeling& f);

/// Composition (f o g) of two relabelings sampled on the same grid.
Relabeling compose(const Relabeling& f, const Relabeling& g, const UniformGrid& grid);

/// H(xi) = int_{-inf}^{xi} h, trapezoid from the left grid end.
std::vector<double> cumulative_h(const LagrangianState& X);

/// X o (y + H)^{-1}: the representative with y + H = id.
LagrangianState normalize(const LagrangianState& X);

/// sup |y + H - id| over the nodes.
double normalization_defect(const LagrangianState& X);

}  // namespace ch2
