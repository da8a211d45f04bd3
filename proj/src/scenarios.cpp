#include "ch2/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "ch2/errors.hpp"

namespace ch2 {

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> all = {
      {"gaussian-cubic", "u = alpha exp(-x^2) x (x-1)(x+1), rho = epsilon exp(-x^2/10)"},
      {"peakon-antipeakon",
       "u = p (exp(-|x+a|) - exp(-|x-a|)) with a smoothed corner, rho = epsilon exp(-x^2/10)"},
      {"step-asymptotics", "u = alpha exp(-x^2) + c chi(x), rho = epsilon exp(-x^2/10)"},
      {"constant-density", "u = 0, rho = k"},
  };
  return all;
}

double mollified_abs(double x, double delta) {
  const double ax = std::abs(x);
  if (delta <= 0.0 || ax >= delta) return ax;
  return 0.5 * (x * x / delta + delta);
}

EulerianState build_scenario(const std::string& name, const ScenarioParams& prm,
                             const UniformGrid& x, double eta) {
  EulerianState e = EulerianState::zero(x);
  auto bump = [&](double xx) { return prm.epsilon * std::exp(-xx * xx / 10.0); };

  if (name == "gaussian-cubic") {
    for (std::size_t i = 0; i < x.n; ++i) {
      const double xx = x.node(i);
      e.ubar[i] = prm.alpha * std::exp(-xx * xx) * xx * (xx - 1.0) * (xx + 1.0);
      e.rhobar[i] = bump(xx);
    }
  } else if (name == "peakon-antipeakon") {
    const double delta = prm.cap_cells * x.spacing();
    for (std::size_t i = 0; i < x.n; ++i) {
      const double xx = x.node(i);
      e.ubar[i] = prm.p * (std::exp(-mollified_abs(xx + prm.a, delta)) -
                           std::exp(-mollified_abs(xx - prm.a, delta)));
      e.rhobar[i] = bump(xx);
    }
  } else if (name == "step-asymptotics") {
    e.c = prm.c;
    for (std::size_t i = 0; i < x.n; ++i) {
      const double xx = x.node(i);
      e.ubar[i] = prm.alpha * std::exp(-xx * xx);
      e.rhobar[i] = bump(xx);
    }
  } else if (name == "constant-density") {
    e.k = prm.k;
  } else {
    throw UnknownScenarioError("unknown scenario '" + name + "'");
  }

  const std::vector<double> ux = e.ux();
  for (std::size_t i = 0; i < x.n; ++i) e.mu.density[i] = ux[i] * ux[i] + eta * e.rhobar[i] * e.rhobar[i];
  e.mu.atoms = prm.atoms;
  std::sort(e.mu.atoms.begin(), e.mu.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  return e;
}

}  // namespace ch2
