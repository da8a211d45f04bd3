#include "ch2/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "ch2/errors.hpp"

namespace ch2 {

namespace {

double l2_diff(const UniformGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double d = a[i] - b[i];
    s += g.weight(i) * d * d;
  }
  return std::sqrt(s);
}

void require_same_grid(const LagrangianState& X, const LagrangianState& Y) {
  if (!X.xi.same_as(Y.xi) || X.size() != Y.size()) {
    std::ostringstream os;
    os << "label grids differ: [" << X.xi.lo << ", " << X.xi.hi << "] n=" << X.xi.n << " vs ["
       << Y.xi.lo << ", " << Y.xi.hi << "] n=" << Y.xi.n;
    throw GridMismatchError(os.str());
  }
}

}  // namespace

double kappa_term(const LagrangianState& X, const LagrangianState& Y, const MetricOptions& opt,
                  std::size_t* mismatch) {
  require_same_grid(X, Y);
  std::size_t count = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const bool a = r_nonzero(X.rbar[i], X.k, X.q[i], opt.tol_r);
    const bool b = r_nonzero(Y.rbar[i], Y.k, Y.q[i], opt.tol_r);
    if (a != b) ++count;
  }
  if (mismatch) *mismatch = count;
  const double d = X.xi.spacing();
  const double meas_tol = opt.meas_tol < 0.0 ? 2.0 * d : opt.meas_tol;
  return static_cast<double>(count) * d > meas_tol ? 1.0 : 0.0;
}

MetricReport d_R(const LagrangianState& X, const LagrangianState& Y, const MetricOptions& opt) {
  require_same_grid(X, Y);
  const UniformGrid& g = X.xi;
  MetricReport m;
  for (std::size_t i = 0; i < X.size(); ++i)
    m.v_sup = std::max(m.v_sup, std::abs(X.zeta[i] - Y.zeta[i]));
  m.v_l2 = l2_diff(g, X.Ubar, Y.Ubar) + l2_diff(g, X.q, Y.q) + l2_diff(g, X.w, Y.w) +
           l2_diff(g, X.h, Y.h) + l2_diff(g, X.rbar, Y.rbar);
  m.v_const = std::abs(X.c - Y.c) + std::abs(X.k - Y.k);
  m.v_norm = m.v_sup + m.v_l2 + m.v_const;
  m.g_l2 = l2_diff(g, g_values(X, opt.tol_r), g_values(Y, opt.tol_r));
  m.kappa = kappa_term(X, Y, opt, &m.r_mismatch);
  m.total = m.v_norm + m.g_l2 + m.kappa;
  return m;
}

MetricReport d_D(const EulerianState& a, const EulerianState& b, const UniformGrid& xi,
                 const LagrangianOptions& lopt, const MetricOptions& opt) {
  return d_R(to_lagrangian(a, xi, lopt), to_lagrangian(b, xi, lopt), opt);
}

std::vector<std::size_t> kappa_set(const LagrangianState& X, double gamma, double tol_r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double qh = X.q[i] + X.h[i];
    if (qh <= 0.0) continue;
    if (X.h[i] / qh >= 1.0 - gamma && X.w[i] <= 0.0 && !r_nonzero(X.rbar[i], X.k, X.q[i], tol_r))
      out.push_back(i);
  }
  return out;
}

EnergyReport energy_report(const LagrangianState& X) {
  EnergyReport e;
  e.t = X.t;
  const UniformGrid& g = X.xi;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double w = g.weight(i);
    e.sigma += w * (X.Ubar[i] * X.Ubar[i] * X.q[i] + X.h[i]);
    e.mu_total += w * X.h[i];
    if (!X.frozen(i) && X.q[i] > 0.0) e.eulerian_energy += w * X.h[i];
  }
  e.F = e.mu_total - e.eulerian_energy;
  return e;
}

}  // namespace ch2
