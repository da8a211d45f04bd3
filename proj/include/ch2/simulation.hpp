#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ch2/diagnostics.hpp"
#include "ch2/evolution.hpp"
#include "ch2/scenarios.hpp"

namespace ch2 {

struct SimulationConfig {
  std::string scenario = "gaussian-cubic";  // built-in name or path to an Eulerian JSON file
  ScenarioParams params;
  double kappa = 0.0;
  double eta = 1.0;
  UniformGrid xi{-30.0, 30.0, 4096};
  UniformGrid x{-15.0, 15.0, 4096};
  double T = 1.0;
  double snapshot_dt = 0.1;
  SolverSettings solver;
  std::string output_dir = "ch2_output";
  bool reduce = true;            // integrate the kappa = 0, eta = 1 system and shift back
  bool keep_lagrangian = false;  // store Lagrangian states in the snapshots

  /// Throws ConfigError.
  void validate() const;
};

struct Snapshot {
  double t = 0.0;
  EulerianState state;
  EnergyReport energy;
  LagrangianState lagrangian;  // empty unless keep_lagrangian
};

struct RunStats {
  std::size_t steps = 0;
  std::size_t projections = 0;
  double max_compat_rate = 0.0;  // residual before re-projection per unit time
  double max_kernel_jump = 0.0;
  double max_plateau_spread = 0.0;
};

struct TimeSeries {
  std::vector<Snapshot> snapshots;
  std::vector<BreakEvent> events;
  std::string config_hash;
  RunStats stats;
  LagrangianState final_state;
  bool aborted = false;
  std::string failure;
};

using StepObserver = std::function<void(const LagrangianState&, const StepInfo&)>;

/// Initial Eulerian data named by the config.
EulerianState initial_data(const SimulationConfig& config);

/// Freezes nodes that start with q = 0 and r = 0; returns their events.
std::vector<BreakEvent> freeze_initial(LagrangianState& X, const SolverSettings& settings);

/// Integrates X to time T with the CFL step, landing exactly on each of the
/// given stop times (sorted); stop(X) is called at each of them.
void integrate(LagrangianState& X, const SystemParams& sys, const SolverSettings& settings,
               const std::vector<double>& stop_times,
               const std::function<void(const LagrangianState&)>& stop,
               const StepObserver& observer = {}, std::vector<BreakEvent>* events = nullptr,
               RunStats* stats = nullptr);

/// L-transform, integrate, M-transform snapshots. Solver failures are caught
/// and reported through aborted/failure with the partial series kept.
TimeSeries solve(const SimulationConfig& config, const StepObserver& observer = {});

}  // namespace ch2
