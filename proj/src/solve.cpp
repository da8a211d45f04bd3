#include <algorithm>
#include <cmath>

#include "ch2/errors.hpp"
#include "ch2/io.hpp"
#include "ch2/simulation.hpp"
#include "ch2/transform.hpp"

namespace ch2 {

void SimulationConfig::validate() const {
  if (xi.n < 16) throw ConfigError("xi grid needs at least 16 nodes");
  if (x.n < 16) throw ConfigError("x grid needs at least 16 nodes");
  if (!(xi.hi > xi.lo) || !(x.hi > x.lo)) throw ConfigError("grid bounds must be increasing");
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  if (!(snapshot_dt > 0.0)) throw ConfigError("snapshot_dt must be positive");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (solver.dt < 0.0) throw ConfigError("dt must be positive (or 0 for the CFL rule)");
  if (!(solver.q_tol > 0.0)) throw ConfigError("q_tol must be positive");
  if (solver.event_refine < 1) throw ConfigError("event_refine must be at least 1");
  if (solver.order != 4) throw ConfigError("only the classical fourth-order integrator exists");
}

EulerianState initial_data(const SimulationConfig& config) {
  const std::string& s = config.scenario;
  if (s.size() > 5 && s.substr(s.size() - 5) == ".json") return read_eulerian(s);
  return build_scenario(s, config.params, config.x, config.eta);
}

std::vector<BreakEvent> freeze_initial(LagrangianState& X, const SolverSettings& settings) {
  std::vector<BreakEvent> events;
  if (settings.mode != Mode::Dissipative) return events;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X.frozen(i) || X.q[i] > settings.q_tol) continue;
    if (r_nonzero(X.rbar[i], X.k, X.q[i], settings.tol_r)) continue;
    X.q[i] = X.w[i] = X.rbar[i] = 0.0;
    X.tau[i] = X.t;
    events.push_back({i, X.t, X.y(i), X.h[i], true});
  }
  return events;
}

void integrate(LagrangianState& X, const SystemParams& sys, const SolverSettings& settings,
               const std::vector<double>& stop_times,
               const std::function<void(const LagrangianState&)>& stop,
               const StepObserver& observer, std::vector<BreakEvent>* events, RunStats* stats) {
  Stepper stepper(sys, settings);
  double t_ref = X.t;  // time of the last re-projection
  for (double target : stop_times) {
    while (X.t < target) {
      double dt = stepper.suggested_dt(X);
      const bool lands = X.t + dt >= target * (1.0 - 1e-14);
      if (lands) dt = target - X.t;
      StepInfo info = stepper.step(X, dt);
      if (lands) X.t = target;
      info.t = X.t;
      if (stats) {
        ++stats->steps;
        const double span = std::max(X.t - t_ref, dt);
        stats->max_compat_rate = std::max(stats->max_compat_rate, info.compat_residual / span);
        stats->max_kernel_jump = std::max(stats->max_kernel_jump, info.kernel_jump);
        if (info.projected) {
          ++stats->projections;
          t_ref = X.t;
        }
      }
      if (events) events->insert(events->end(), info.events.begin(), info.events.end());
      if (observer) observer(X, info);
    }
    if (stop) stop(X);
  }
}

TimeSeries solve(const SimulationConfig& config, const StepObserver& observer) {
  config.validate();
  TimeSeries ts;
  ts.config_hash = config_hash(config);

  const EulerianState e0 = initial_data(config);
  const bool reduced = config.reduce && (config.kappa != 0.0 || config.eta != 1.0);
  Reduction red;
  SystemParams sys{config.kappa, config.eta, 0.0};
  const EulerianState* start = &e0;
  if (reduced) {
    red = reduce_parameters(e0, config.kappa, config.eta);
    sys = red.params;
    start = &red.data;
  }

  LagrangianState X = to_lagrangian(*start, config.xi, LagrangianOptions{sys.eta});
  ts.events = freeze_initial(X, config.solver);

  std::vector<double> stops;
  const auto count = static_cast<std::size_t>(std::ceil(config.T / config.snapshot_dt - 1e-9));
  for (std::size_t m = 1; m < count; ++m) stops.push_back(static_cast<double>(m) * config.snapshot_dt);
  stops.push_back(config.T);

  EulerianOptions eopt;
  auto record = [&](const LagrangianState& Y) {
    Snapshot s;
    s.t = Y.t;
    EulerianReport rep;
    EulerianState e = to_eulerian(Y, config.x, eopt, &rep);
    ts.stats.max_plateau_spread = std::max(ts.stats.max_plateau_spread, rep.plateau_u_spread);
    s.state = reduced ? shift_back(e, red, Y.t) : std::move(e);
    s.energy = energy_report(Y);
    if (config.keep_lagrangian) s.lagrangian = Y;
    ts.snapshots.push_back(std::move(s));
  };

  try {
    record(X);
    integrate(X, sys, config.solver, stops, record, observer, &ts.events, &ts.stats);
  } catch (const Error& err) {
    ts.aborted = true;
    ts.failure = err.what();
  }
  ts.final_state = std::move(X);
  return ts;
}

}  // namespace ch2
