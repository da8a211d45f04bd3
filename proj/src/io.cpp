#include "ch2/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "ch2/errors.hpp"

namespace ch2 {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json grid_json(const UniformGrid& g, const char* prefix) {
  const std::string p = prefix;
  return {{p + "_min", g.lo}, {p + "_max", g.hi}, {"n", g.n}};
}

UniformGrid grid_from(const json& j, const char* prefix) {
  const std::string p = prefix;
  UniformGrid g;
  g.lo = j.at(p + "_min").get<double>();
  g.hi = j.at(p + "_max").get<double>();
  g.n = j.at("n").get<std::size_t>();
  if (g.n < 2 || !(g.hi > g.lo)) throw ConfigError("invalid grid in state file");
  return g;
}

std::vector<double> array_of(const json& j, const char* key, std::size_t n) {
  auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != n)
    throw ConfigError(std::string("field '") + key + "' has " + std::to_string(v.size()) +
                      " entries, expected " + std::to_string(n));
  return v;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const LagrangianState& X) {
  json j = grid_json(X.xi, "xi");
  j["kind"] = "lagrangian";
  j["zeta"] = X.zeta;
  j["Ubar"] = X.Ubar;
  j["c"] = X.c;
  j["q"] = X.q;
  j["w"] = X.w;
  j["h"] = X.h;
  j["rbar"] = X.rbar;
  j["k"] = X.k;
  json tau = json::array();
  for (double t : X.tau) tau.push_back(std::isinf(t) ? json(nullptr) : json(t));
  j["tau"] = tau;
  j["t"] = X.t;
  return j;
}

json to_json(const EulerianState& e) {
  json j = grid_json(e.x, "x");
  j["kind"] = "eulerian";
  j["ubar"] = e.ubar;
  j["c"] = e.c;
  j["rhobar"] = e.rhobar;
  j["k"] = e.k;
  json atoms = json::array();
  for (const auto& a : e.mu.atoms) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  j["mu"] = {{"density", e.mu.density}, {"atoms", atoms}};
  return j;
}

LagrangianState lagrangian_from_json(const json& j) {
  return guarded("lagrangian state", [&] {
    LagrangianState X;
    X.xi = grid_from(j, "xi");
    const std::size_t n = X.xi.n;
    X.zeta = array_of(j, "zeta", n);
    X.Ubar = array_of(j, "Ubar", n);
    X.q = array_of(j, "q", n);
    X.w = array_of(j, "w", n);
    X.h = array_of(j, "h", n);
    X.rbar = array_of(j, "rbar", n);
    X.c = j.at("c").get<double>();
    X.k = j.at("k").get<double>();
    X.t = j.value("t", 0.0);
    X.tau.assign(n, kNever);
    if (j.contains("tau")) {
      const json& tau = j.at("tau");
      if (tau.size() != n) throw ConfigError("field 'tau' has the wrong length");
      for (std::size_t i = 0; i < n; ++i)
        if (!tau[i].is_null()) X.tau[i] = tau[i].get<double>();
    }
    return X;
  });
}

EulerianState eulerian_from_json(const json& j) {
  return guarded("eulerian state", [&] {
    EulerianState e;
    e.x = grid_from(j, "x");
    const std::size_t n = e.x.n;
    e.ubar = array_of(j, "ubar", n);
    e.rhobar = array_of(j, "rhobar", n);
    e.c = j.at("c").get<double>();
    e.k = j.at("k").get<double>();
    const json& mu = j.at("mu");
    e.mu.density = array_of(mu, "density", n);
    for (const auto& a : mu.value("atoms", json::array()))
      e.mu.atoms.push_back({a.at("location").get<double>(), a.at("mass").get<double>()});
    return e;
  });
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

StateFile read_state(const std::string& path) {
  const json j = read_json(path);
  StateFile s;
  const std::string kind = j.value("kind", "");
  if (kind == "lagrangian") {
    s.lagrangian = true;
    s.lag = lagrangian_from_json(j);
  } else if (kind == "eulerian") {
    s.eul = eulerian_from_json(j);
  } else {
    throw ConfigError(path + ": \"kind\" must be \"lagrangian\" or \"eulerian\"");
  }
  return s;
}

EulerianState read_eulerian(const std::string& path) {
  StateFile s = read_state(path);
  if (s.lagrangian) throw ConfigError(path + " holds a Lagrangian state, expected Eulerian");
  return s.eul;
}

// ---------------------------------------------------------------------------
// Configuration

json config_to_json(const SimulationConfig& c) {
  json atoms = json::array();
  for (const auto& a : c.params.atoms) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  const SolverSettings& s = c.solver;
  return {
      {"scenario", c.scenario},
      {"params",
       {{"alpha", c.params.alpha},
        {"epsilon", c.params.epsilon},
        {"p", c.params.p},
        {"a", c.params.a},
        {"c", c.params.c},
        {"k", c.params.k},
        {"cap_cells", c.params.cap_cells},
        {"atoms", atoms}}},
      {"kappa", c.kappa},
      {"eta", c.eta},
      {"xi", {{"min", c.xi.lo}, {"max", c.xi.hi}, {"n", c.xi.n}}},
      {"x", {{"min", c.x.lo}, {"max", c.x.hi}, {"n", c.x.n}}},
      {"T", c.T},
      {"snapshot_dt", c.snapshot_dt},
      {"mode", s.mode == Mode::Dissipative ? "dissipative" : "conservative"},
      {"solver",
       {{"dt", s.dt},
        {"cfl", s.cfl},
        {"q_tol", s.q_tol},
        {"event_refine", s.event_refine},
        {"break_ratio", s.break_ratio},
        {"tol_compat", s.tol_compat},
        {"neg_tol", s.neg_tol},
        {"tol_r", s.tol_r},
        {"order", s.order}}},
      {"reduce", c.reduce},
      {"output_dir", c.output_dir},
  };
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void take_grid(const json& j, const char* key, UniformGrid& g) {
  if (!j.contains(key)) return;
  const json& s = j.at(key);
  reject_unknown(s, {"min", "max", "n"}, key);
  take(s, "min", g.lo);
  take(s, "max", g.hi);
  take(s, "n", g.n);
}

}  // namespace

SimulationConfig config_from_json(const json& j) {
  return guarded("config", [&] {
    SimulationConfig c;
    reject_unknown(j,
                   {"scenario", "params", "kappa", "eta", "xi", "x", "T", "snapshot_dt", "mode",
                    "solver", "reduce", "output_dir"},
                   "config");
    take(j, "scenario", c.scenario);
    if (j.contains("params")) {
      const json& p = j.at("params");
      reject_unknown(p, {"alpha", "epsilon", "p", "a", "c", "k", "cap_cells", "atoms"}, "params");
      take(p, "alpha", c.params.alpha);
      take(p, "epsilon", c.params.epsilon);
      take(p, "p", c.params.p);
      take(p, "a", c.params.a);
      take(p, "c", c.params.c);
      take(p, "k", c.params.k);
      take(p, "cap_cells", c.params.cap_cells);
      if (p.contains("atoms"))
        for (const auto& a : p.at("atoms"))
          c.params.atoms.push_back({a.at("location").get<double>(), a.at("mass").get<double>()});
    }
    take(j, "kappa", c.kappa);
    take(j, "eta", c.eta);
    take_grid(j, "xi", c.xi);
    take_grid(j, "x", c.x);
    take(j, "T", c.T);
    take(j, "snapshot_dt", c.snapshot_dt);
    if (j.contains("mode")) {
      const std::string m = j.at("mode").get<std::string>();
      if (m == "dissipative")
        c.solver.mode = Mode::Dissipative;
      else if (m == "conservative")
        c.solver.mode = Mode::Conservative;
      else
        throw ConfigError("mode must be dissipative or conservative, got '" + m + "'");
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      reject_unknown(s,
                     {"dt", "cfl", "q_tol", "event_refine", "break_ratio", "tol_compat", "neg_tol",
                      "tol_r", "order"},
                     "solver");
      take(s, "dt", c.solver.dt);
      take(s, "cfl", c.solver.cfl);
      take(s, "q_tol", c.solver.q_tol);
      take(s, "event_refine", c.solver.event_refine);
      take(s, "break_ratio", c.solver.break_ratio);
      take(s, "tol_compat", c.solver.tol_compat);
      take(s, "neg_tol", c.solver.neg_tol);
      take(s, "tol_r", c.solver.tol_r);
      take(s, "order", c.solver.order);
    }
    take(j, "reduce", c.reduce);
    take(j, "output_dir", c.output_dir);
    return c;
  });
}

SimulationConfig read_config(const std::string& path) { return config_from_json(read_json(path)); }

std::string config_hash(const SimulationConfig& config) {
  json j = config_to_json(config);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string resolve_output_dir(const SimulationConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return config.output_dir;
}

// ---------------------------------------------------------------------------
// Run outputs

namespace {

std::ofstream open_csv(const fs::path& path, const std::string& hash, const char* header) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# config_hash=" << hash << '\n' << header << '\n';
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_outputs(const TimeSeries& ts, const SimulationConfig& config, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  const std::string& hash = ts.config_hash;
  const auto f = format_double;

  {
    const fs::path p = root / "snapshots.csv";
    auto out = open_csv(p, hash, "t,x,u,rho,mu_ac_density");
    for (const auto& s : ts.snapshots) {
      const EulerianState& e = s.state;
      for (std::size_t i = 0; i < e.x.n; ++i)
        out << f(s.t) << ',' << f(e.x.node(i)) << ',' << f(e.u(i)) << ',' << f(e.rho(i)) << ','
            << f(e.mu.density[i]) << '\n';
    }
    finish(out, p);
  }
  {
    const fs::path p = root / "atoms.csv";
    auto out = open_csv(p, hash, "t,location,mass");
    for (const auto& s : ts.snapshots)
      for (const auto& a : s.state.mu.atoms)
        out << f(s.t) << ',' << f(a.location) << ',' << f(a.mass) << '\n';
    finish(out, p);
  }
  {
    const fs::path p = root / "energy.csv";
    auto out = open_csv(p, hash, "t,sigma,mu_total,eulerian_energy,F");
    for (const auto& s : ts.snapshots) {
      const EnergyReport& e = s.energy;
      out << f(s.t) << ',' << f(e.sigma) << ',' << f(e.mu_total) << ',' << f(e.eulerian_energy)
          << ',' << f(e.F) << '\n';
    }
    finish(out, p);
  }
  {
    const fs::path p = root / "events.csv";
    auto out = open_csv(p, hash, "node,tau,y_at_break,h_at_break");
    for (const auto& e : ts.events)
      out << e.node << ',' << f(e.tau) << ',' << f(e.y_at_break) << ',' << f(e.h_at_break) << '\n';
    finish(out, p);
  }
  {
    json j = to_json(ts.final_state);
    j["config_hash"] = hash;
    j["reduced"] = config.reduce && (config.kappa != 0.0 || config.eta != 1.0);
    if (ts.aborted) j["failure"] = ts.failure;
    write_json((root / "final_state.json").string(), j);
  }
}

}  // namespace ch2
