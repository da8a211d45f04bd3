// Command-line front end: run, convert, metric, scenarios, sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ch2/diagnostics.hpp"
#include "ch2/errors.hpp"
#include "ch2/io.hpp"
#include "ch2/simulation.hpp"
#include "ch2/transform.hpp"

namespace fs = std::filesystem;
using namespace ch2;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kAborted = 3, kIo = 4 };

struct RunOutcome {
  int code = kOk;
  std::string message;
  TimeSeries series;
};

/// Validates, solves and writes outputs for one config.
RunOutcome run_one(const SimulationConfig& config, const std::string& dir) {
  RunOutcome out;
  try {
    config.validate();
    const EulerianState e0 = initial_data(config);
    const LagrangianState X0 = to_lagrangian(e0, config.xi, LagrangianOptions{config.eta});
    GTolerances tol;
    tol.eta = config.eta;
    const ValidationReport rep = validate_G(X0, tol);
    if (!rep.ok()) {
      out.code = kInvalid;
      out.message = "initial state rejected: " + rep.summary();
      return out;
    }
    out.series = solve(config);
    write_outputs(out.series, config, dir);
    if (out.series.aborted) {
      out.code = kAborted;
      out.message = "solver aborted: " + out.series.failure;
    }
  } catch (const IoError& e) {
    out.code = kIo;
    out.message = e.what();
  } catch (const Error& e) {
    out.code = kInvalid;
    out.message = e.what();
  } catch (const fs::filesystem_error& e) {
    out.code = kIo;
    out.message = e.what();
  }
  return out;
}

struct GridArgs {
  double lo, hi;
  std::size_t n;
  UniformGrid grid() const { return {lo, hi, n}; }
};

void add_grid_options(CLI::App* app, GridArgs& g, const std::string& name) {
  app->add_option("--" + name + "-min", g.lo, "left end of the " + name + " grid")->capture_default_str();
  app->add_option("--" + name + "-max", g.hi, "right end of the " + name + " grid")->capture_default_str();
  app->add_option("--" + name + "-n", g.n, "number of " + name + " nodes")->capture_default_str();
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

int cmd_run(const std::string& path, const std::string& dir_flag) {
  SimulationConfig config;
  try {
    config = read_config(path);
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  }
  const std::string dir = dir_flag.empty() ? resolve_output_dir(config) : dir_flag;
  RunOutcome r = run_one(config, dir);
  if (r.code != kOk) {
    std::cerr << r.message << '\n';
    return r.code;
  }
  std::cout << json{{"config_hash", r.series.config_hash},
                    {"output_dir", dir},
                    {"snapshots", r.series.snapshots.size()},
                    {"events", r.series.events.size()},
                    {"steps", r.series.stats.steps}}
                   .dump()
            << '\n';
  return kOk;
}

int cmd_convert(const std::string& in, const std::string& out, const GridArgs& xi,
                const GridArgs& x, double eta, bool round_trip) {
  const StateFile s = read_state(in);
  json report;
  if (s.lagrangian) {
    const EulerianState e = to_eulerian(s.lag, x.grid());
    write_json(out, to_json(e));
    if (round_trip) {
      const LagrangianState back = to_lagrangian(e, s.lag.xi, LagrangianOptions{eta});
      const MetricReport m = d_R(normalize(s.lag), back);
      report = {{"direction", "lagrangian_to_eulerian"}, {"d_R_to_normalized", m.total}};
    }
  } else {
    const LagrangianState X = to_lagrangian(s.eul, xi.grid(), LagrangianOptions{eta});
    write_json(out, to_json(X));
    if (round_trip) {
      const EulerianState back = to_eulerian(X, s.eul.x);
      std::vector<double> u0(s.eul.x.n), u1(s.eul.x.n), r0(s.eul.x.n), r1(s.eul.x.n);
      for (std::size_t i = 0; i < s.eul.x.n; ++i) {
        u0[i] = s.eul.u(i);
        u1[i] = back.u(i);
        r0[i] = s.eul.rho(i);
        r1[i] = back.rho(i);
      }
      report = {{"direction", "eulerian_to_lagrangian"},
                {"sup_u", sup_diff(u0, u1)},
                {"sup_rho", sup_diff(r0, r1)}};
    }
  }
  if (round_trip) std::cout << report.dump() << '\n';
  return kOk;
}

int cmd_metric(const std::string& a, const std::string& b, const GridArgs& xi, double eta) {
  const StateFile sa = read_state(a), sb = read_state(b);
  if (sa.lagrangian != sb.lagrangian) throw ConfigError("both files must hold the same kind of state");
  MetricReport m;
  std::string name;
  if (sa.lagrangian) {
    m = d_R(sa.lag, sb.lag);
    name = "d_R";
  } else {
    m = d_D(sa.eul, sb.eul, xi.grid(), LagrangianOptions{eta});
    name = "d_D";
  }
  std::cout << json{{"metric", name},
                    {"total", m.total},
                    {"v_norm", m.v_norm},
                    {"v_sup", m.v_sup},
                    {"v_l2", m.v_l2},
                    {"v_const", m.v_const},
                    {"g_l2", m.g_l2},
                    {"kappa", m.kappa}}
                   .dump()
            << '\n';
  return kOk;
}

int cmd_scenarios() {
  for (const auto& s : list_scenarios()) std::cout << s.name << "\t" << s.description << '\n';
  return kOk;
}

int cmd_sweep(const std::string& dir, const std::string& out_flag, unsigned workers) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::string root = out_flag;
  if (root.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    root = env && *env ? env : (fs::path(dir) / "results").string();
  }

  struct Result {
    std::string file, hash, message;
    int code = kOk;
    std::size_t events = 0;
    double final_F = 0.0;
  };
  std::vector<Result> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      Result& r = results[i];
      r.file = files[i].filename().string();
      try {
        SimulationConfig config = read_config(files[i].string());
        r.hash = config_hash(config);
        RunOutcome o = run_one(config, (fs::path(root) / r.hash).string());
        r.code = o.code;
        r.message = o.message;
        r.events = o.series.events.size();
        if (!o.series.snapshots.empty()) r.final_F = o.series.snapshots.back().energy.F;
      } catch (const IoError& e) {
        r.code = kIo;
        r.message = e.what();
      } catch (const Error& e) {
        r.code = kInvalid;
        r.message = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, files.size()); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json summary = json::object();
  int worst = kOk;
  for (const auto& r : results) {
    json entry = {{"config", r.file}, {"exit_code", r.code}, {"events", r.events}, {"final_F", r.final_F}};
    if (!r.message.empty()) entry["message"] = r.message;
    summary[r.hash.empty() ? r.file : r.hash] = entry;
    worst = std::max(worst, r.code);
  }
  fs::create_directories(root);
  write_json((fs::path(root) / "summary.json").string(), summary);
  std::cout << summary.dump(1) << '\n';
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative solver for the two-component Camassa-Holm system"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "integrate a configuration and write CSV outputs");
  run->add_option("config", config_path, "configuration JSON")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", out_dir, "output directory (overrides the config)");

  std::string in_path, out_path;
  GridArgs xi{-30.0, 30.0, 4096}, x{-15.0, 15.0, 4096};
  double eta = 1.0;
  bool round_trip = false;
  auto* convert = app.add_subcommand("convert", "Eulerian <-> Lagrangian state conversion");
  convert->add_option("input", in_path, "state JSON")->required()->check(CLI::ExistingFile);
  convert->add_option("output", out_path, "converted state JSON")->required();
  add_grid_options(convert, xi, "xi");
  add_grid_options(convert, x, "x");
  convert->add_option("--eta", eta, "coupling weight of rhobar^2 in the energy")->capture_default_str();
  convert->add_flag("--round-trip", round_trip, "convert back and print the discrepancy");

  std::string a_path, b_path;
  auto* metric = app.add_subcommand("metric", "distance between two states (d_R or d_D)");
  metric->add_option("a", a_path, "first state JSON")->required()->check(CLI::ExistingFile);
  metric->add_option("b", b_path, "second state JSON")->required()->check(CLI::ExistingFile);
  add_grid_options(metric, xi, "xi");
  metric->add_option("--eta", eta, "coupling weight for Eulerian inputs")->capture_default_str();

  app.add_subcommand("scenarios", "list built-in initial data");

  std::string sweep_dir;
  unsigned workers = 0;
  auto* sweep = app.add_subcommand("sweep", "run every *.json config in a directory");
  sweep->add_option("dir", sweep_dir, "directory of configs")->required()->check(CLI::ExistingDirectory);
  sweep->add_option("-o,--output-dir", out_dir, "root directory for per-config outputs");
  sweep->add_option("-j,--jobs", workers, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*convert) return cmd_convert(in_path, out_path, xi, x, eta, round_trip);
    if (*metric) return cmd_metric(a_path, b_path, xi, eta);
    if (app.got_subcommand("scenarios")) return cmd_scenarios();
    if (*sweep) return cmd_sweep(sweep_dir, out_dir, workers);
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  } catch (const fs::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
