#pragma once

#include <string>
#include <vector>

#include "ch2/grid.hpp"
#include "ch2/state.hpp"

namespace ch2 {

struct ScenarioParams {
  double alpha = 1.0;    // amplitude of the smooth profiles
  double epsilon = 0.0;  // amplitude of the density bump
  double p = 1.0;        // peakon height
  double a = 1.0;        // peakon half-separation
  double c = 0.5;        // right asymptote for step-asymptotics
  double k = 1.0;        // background density for constant-density
  double cap_cells = 2;  // half-width of the peakon cap, in x-grid cells
  std::vector<Atom> atoms;  // optional initial point masses
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

const std::vector<ScenarioInfo>& list_scenarios();

/// Samples a named initial state on x. mu gets density u_x^2 + eta rhobar^2
/// plus any atoms in params. Throws UnknownScenarioError.
EulerianState build_scenario(const std::string& name, const ScenarioParams& params,
                             const UniformGrid& x, double eta = 1.0);

/// |x| with its corner replaced by a parabola on [-delta, delta].
double mollified_abs(double x, double delta);

}  // namespace ch2
