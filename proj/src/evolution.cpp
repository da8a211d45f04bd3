#include "ch2/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ch2/errors.hpp"
#include "ch2/partition.hpp"
#include "interp.hpp"

namespace ch2 {

void Rates::resize(std::size_t n) {
  zeta.resize(n);
  Ubar.resize(n);
  q.resize(n);
  w.resize(n);
  h.resize(n);
  rbar.resize(n);
}

namespace {

void rhs_with(const LagrangianState& X, const SystemParams& sys, const KernelOptions& opt,
              KernelWorkspace& ws, PQ& pq, Rates& out) {
  compute_PQ(X, sys, opt, ws, pq);
  const std::size_t n = X.size();
  out.resize(n);
  const double c = X.c, k = X.k;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = X.y(i);
    const double u = sys.u_left + X.Ubar[i] + c * partition::chi(y);
    out.zeta[i] = u;
    out.Ubar[i] = -pq.Q[i] - c * partition::dchi(y) * u;
    if (ws.active[i]) {
      const double pm = pq.Pminus[i];
      out.q[i] = X.w[i];
      out.w[i] = 0.5 * X.h[i] - pm * X.q[i] + sys.eta * k * X.rbar[i];
      out.h[i] = -2.0 * pm * X.w[i];
      out.rbar[i] = -k * X.w[i];
    } else {
      out.q[i] = out.w[i] = out.h[i] = out.rbar[i] = 0.0;
    }
  }
}

}  // namespace

void rhs(const LagrangianState& X, const SystemParams& sys, Mode mode, KernelWorkspace& ws, PQ& pq,
         Rates& out) {
  KernelOptions opt;
  opt.mode = mode;
  rhs_with(X, sys, opt, ws, pq, out);
}

Rates rhs(const LagrangianState& X, const SystemParams& sys, Mode mode) {
  KernelWorkspace ws;
  PQ pq;
  Rates out;
  rhs(X, sys, mode, ws, pq, out);
  return out;
}

namespace {

/// Cubic Hermite interpolant on [0, dt] from end values and end slopes.
struct Hermite {
  double f0, f1, d0, d1, dt;

  double operator()(double s) const {
    const double a = s / dt;
    const double a2 = a * a, a3 = a2 * a;
    return (2.0 * a3 - 3.0 * a2 + 1.0) * f0 + (a3 - 2.0 * a2 + a) * dt * d0 +
           (-2.0 * a3 + 3.0 * a2) * f1 + (a3 - a2) * dt * d1;
  }
};

/// Bisection for a sign change of phi on [0, dt]; phi(0) and phi(dt) must differ in sign.
template <class F>
double bisect(const F& phi, double dt, int depth) {
  double lo = 0.0, hi = dt;
  const bool lo_neg = phi(lo) < 0.0;
  for (int it = 0; it < depth; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((phi(mid) < 0.0) == lo_neg ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool broken_candidate(const LagrangianState& pre, const LagrangianState& post, std::size_t i,
                      const SolverSettings& s) {
  if (pre.frozen(i)) return false;
  if (r_nonzero(pre.rbar[i], pre.k, pre.q[i], s.tol_r)) return false;
  return pre.q[i] <= s.q_tol || post.q[i] <= s.q_tol || (pre.w[i] < 0.0 && post.w[i] >= 0.0);
}

}  // namespace

Stepper::Stepper(SystemParams sys, SolverSettings settings)
    : sys_(sys), settings_(settings) {}

double Stepper::suggested_dt(const LagrangianState& X) const {
  double umax = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) umax = std::max(umax, std::abs(sys_.u_left + X.U(i)));
  const double cfl = settings_.cfl * X.xi.spacing() / (1.0 + umax);
  return settings_.dt > 0.0 ? settings_.dt : cfl;
}

std::vector<BreakEvent> Stepper::detect_events(const LagrangianState& pre, LagrangianState& post,
                                               double dt, const Rates& pre_rates) {
  std::vector<BreakEvent> events;
  const std::size_t n = pre.size();
  kopt_.mode = settings_.mode;
  kopt_.monotone_tol = settings_.stage_slack * pre.xi.spacing();
  bool any = false;
  for (std::size_t i = 0; i < n && !any; ++i) any = broken_candidate(pre, post, i, settings_);
  if (!any) return events;

  // slopes at the end of the step, still with the step-start mask
  const double t0 = pre.t;
  post.t = t0;
  rhs_with(post, sys_, kopt_, ws_, pq_, end_rates_);

  for (std::size_t i = 0; i < n; ++i) {
    if (!broken_candidate(pre, post, i, settings_)) continue;
    const Hermite qh{pre.q[i], post.q[i], pre_rates.q[i], end_rates_.q[i], dt};
    const Hermite wh{pre.w[i], post.w[i], pre_rates.w[i], end_rates_.w[i], dt};
    const Hermite hh{pre.h[i], post.h[i], pre_rates.h[i], end_rates_.h[i], dt};
    const Hermite zh{pre.zeta[i], post.zeta[i], pre_rates.zeta[i], end_rates_.zeta[i], dt};

    double s = 0.0;
    bool hit = false;
    if (pre.q[i] <= settings_.q_tol) {
      hit = true;
    } else if (post.q[i] <= settings_.q_tol) {
      s = bisect([&](double x) { return qh(x) - settings_.q_tol; }, dt, settings_.event_refine);
      hit = true;
    } else {
      s = bisect(wh, dt, settings_.event_refine);
      const double qs = std::max(0.0, qh(s)), hs = std::max(0.0, hh(s));
      hit = qs + hs > 0.0 && qs / (qs + hs) <= settings_.break_ratio;
    }
    if (!hit) continue;

    BreakEvent ev;
    ev.node = i;
    ev.tau = t0 + s;
    ev.y_at_break = pre.xi.node(i) + zh(s);
    ev.h_at_break = s == 0.0 ? pre.h[i] : std::max(0.0, hh(s));
    events.push_back(ev);

    post.q[i] = 0.0;
    post.w[i] = 0.0;
    post.rbar[i] = 0.0;
    post.h[i] = ev.h_at_break;
    post.tau[i] = ev.tau;
  }
  post.t = t0 + dt;
  std::stable_sort(events.begin(), events.end(),
                   [](const BreakEvent& a, const BreakEvent& b) { return a.tau < b.tau; });
  return events;
}

StepInfo Stepper::step(LagrangianState& X, double dt) {
  const std::size_t n = X.size();
  const Mode mode = settings_.mode;
  StepInfo info;
  info.dt = dt;
  kopt_.mode = mode;
  kopt_.monotone_tol = settings_.stage_slack * X.xi.spacing();

  auto axpy = [&](const Rates& r, double a) {
    stage_ = X;
    for (std::size_t i = 0; i < n; ++i) {
      stage_.zeta[i] += a * r.zeta[i];
      stage_.Ubar[i] += a * r.Ubar[i];
      stage_.q[i] += a * r.q[i];
      stage_.w[i] += a * r.w[i];
      stage_.h[i] += a * r.h[i];
      stage_.rbar[i] += a * r.rbar[i];
    }
  };

  rhs_with(X, sys_, kopt_, ws_, pq_, k1_);
  axpy(k1_, 0.5 * dt);
  rhs_with(stage_, sys_, kopt_, ws_, pq_, k2_);
  axpy(k2_, 0.5 * dt);
  rhs_with(stage_, sys_, kopt_, ws_, pq_, k3_);
  axpy(k3_, dt);
  rhs_with(stage_, sys_, kopt_, ws_, pq_, k4_);

  LagrangianState post = X;
  const double w6 = dt / 6.0;
  auto combine = [&](std::vector<double>& v, const std::vector<double>& a,
                     const std::vector<double>& b, const std::vector<double>& c,
                     const std::vector<double>& d) {
    for (std::size_t i = 0; i < n; ++i) v[i] += w6 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  };
  combine(post.zeta, k1_.zeta, k2_.zeta, k3_.zeta, k4_.zeta);
  combine(post.Ubar, k1_.Ubar, k2_.Ubar, k3_.Ubar, k4_.Ubar);
  combine(post.q, k1_.q, k2_.q, k3_.q, k4_.q);
  combine(post.w, k1_.w, k2_.w, k3_.w, k4_.w);
  combine(post.h, k1_.h, k2_.h, k3_.h, k4_.h);
  combine(post.rbar, k1_.rbar, k2_.rbar, k3_.rbar, k4_.rbar);
  post.t = X.t + dt;

  if (mode == Mode::Dissipative) {
    info.events = detect_events(X, post, dt, k1_);
    if (!info.events.empty()) {
      // Pminus with the pre-freeze mask was left in pq_ by detect_events
      const std::vector<double> before = pq_.Pminus;
      compute_PQ(post, sys_, kopt_, ws_, pq_);
      for (std::size_t i = 0; i < n; ++i)
        info.kernel_jump = std::max(info.kernel_jump, std::abs(pq_.Pminus[i] - before[i]));
    }
  }

  const double eta = sys_.eta;
  for (std::size_t i = 0; i < n; ++i) {
    if (post.frozen(i)) continue;
    const double q = post.q[i], h = post.h[i], w = post.w[i], rb = post.rbar[i];
    const double res = std::abs(q * h - (w * w + eta * rb * rb)) / (1.0 + std::abs(q * h));
    info.compat_residual = std::max(info.compat_residual, res);
  }
  if (info.compat_residual > settings_.tol_compat) {
    info.projected = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (post.frozen(i)) continue;
      const double q = post.q[i];
      if (q <= 1e-8 * (q + std::abs(post.h[i]))) continue;
      const double target = (post.w[i] * post.w[i] + eta * post.rbar[i] * post.rbar[i]) / q;
      info.projection_size = std::max(info.projection_size, std::abs(target - post.h[i]));
      post.h[i] = target;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const bool check_q = mode == Mode::Dissipative && !post.frozen(i);
    if (post.h[i] < -settings_.neg_tol || (check_q && post.q[i] < -settings_.neg_tol)) {
      std::ostringstream os;
      os << "step to t=" << post.t << " left node " << i << " with q=" << post.q[i]
         << ", h=" << post.h[i];
      throw StepRejectedError(os.str());
    }
    if (post.h[i] < 0.0) post.h[i] = 0.0;
  }

  X = std::move(post);
  info.t = X.t;
  return info;
}

StepInfo step(LagrangianState& X, const SystemParams& sys, const SolverSettings& settings,
              double dt) {
  Stepper s(sys, settings);
  return s.step(X, dt);
}

std::vector<BreakEvent> detect_and_freeze(const LagrangianState& X_pre, LagrangianState& X_post,
                                          double t0, double dt, const SystemParams& sys,
                                          const SolverSettings& settings) {
  LagrangianState pre = X_pre;
  pre.t = t0;
  const Rates pre_rates = rhs(pre, sys, settings.mode);
  Stepper s(sys, settings);
  return s.detect_events(pre, X_post, dt, pre_rates);
}

// ---------------------------------------------------------------------------

Reduction reduce_parameters(const EulerianState& e, double kappa, double eta) {
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  Reduction red;
  red.alpha = 0.5 * kappa;
  red.sqrt_eta = std::sqrt(eta);
  red.params = SystemParams{0.0, 1.0, red.alpha};
  red.data = e;
  for (double& r : red.data.rhobar) r *= red.sqrt_eta;
  red.data.k *= red.sqrt_eta;
  return red;
}

EulerianState shift_back(const EulerianState& reduced, const Reduction& red, double t) {
  const UniformGrid& g = reduced.x;
  const double s = red.alpha * t;
  EulerianState out = EulerianState::zero(g);
  out.c = reduced.c;
  out.k = reduced.k / red.sqrt_eta;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    const double xs = x + s;
    out.ubar[j] = detail::interp_uniform(g, reduced.ubar, xs, 0.0) +
                  reduced.c * (partition::chi(xs) - partition::chi(x));
    out.rhobar[j] = detail::interp_uniform(g, reduced.rhobar, xs, 0.0) / red.sqrt_eta;
    out.mu.density[j] = detail::interp_uniform(g, reduced.mu.density, xs, 0.0);
  }
  out.mu.atoms = reduced.mu.atoms;
  for (auto& a : out.mu.atoms) a.location -= s;
  return out;
}

}  // namespace ch2
