#include "ch2/kernels.hpp"

#include <cmath>
#include <sstream>

#include "ch2/errors.hpp"
#include "ch2/partition.hpp"

namespace ch2 {

void KernelWorkspace::resize(std::size_t n) {
  forward.resize(n);
  backward.resize(n);
  density.resize(n);
  active.resize(n);
  chi1_sq.resize(n);
  chi_chi2.resize(n);
}

void compute_PQ(const LagrangianState& X, const SystemParams& sys, const KernelOptions& opt,
                KernelWorkspace& ws, PQ& out) {
  const std::size_t n = X.size();
  ws.resize(n);
  out.Pminus.resize(n);
  out.Q.resize(n);

  const double c = X.c, k = X.k, ke = sys.kappa_eff(), eta = sys.eta;
  const UniformGrid& g = X.xi;

  for (std::size_t j = 0; j < n; ++j) {
    const double y = X.y(j);
    const double chi = partition::chi(y);
    const double d1 = partition::dchi(y);
    const double d2 = partition::d2chi(y);
    ws.chi1_sq[j] = d1 * d1;
    ws.chi_chi2[j] = chi * d2;
    ws.active[j] = opt.mode == Mode::Conservative || X.tau[j] > X.t;

    const double ub = X.Ubar[j], q = X.q[j];
    double a = 0.0;
    if (ws.active[j])
      a = (2.0 * c * chi * ub + ub * ub + ke * ub) * q + 0.5 * X.h[j] + eta * k * X.rbar[j];
    const double b = (2.0 * c * c * (ws.chi1_sq[j] + ws.chi_chi2[j]) + ke * c * d2) * q;
    ws.density[j] = g.weight(j) * (a + b);
  }

  // forward[i] = sum_{j<i} e^{-(y_i - y_j)} F_j, backward[i] = sum_{j>i} e^{-(y_j - y_i)} F_j
  ws.forward[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double d = X.y(i) - X.y(i - 1);
    if (d < 0.0) {
      if (d < -opt.monotone_tol) {
        std::ostringstream os;
        os << "y decreases between nodes " << i - 1 << " and " << i << " by " << -d;
        throw NonMonotoneError(os.str());
      }
      d = 0.0;
    }
    const double e = std::exp(-d);
    ws.forward[i] = e * (ws.forward[i - 1] + ws.density[i - 1]);
  }
  ws.backward[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double d = std::max(0.0, X.y(i + 1) - X.y(i));
    ws.backward[i] = std::exp(-d) * (ws.backward[i + 1] + ws.density[i + 1]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double y = X.y(i);
    const double chi = partition::chi(y);
    const double ub = X.Ubar[i];
    out.Pminus[i] = -2.0 * c * chi * ub - ub * ub - ke * ub +
                    0.5 * (ws.forward[i] + ws.backward[i] + ws.density[i]);
    out.Q[i] = 2.0 * c * c * chi * partition::dchi(y) + ke * c * partition::dchi(y) -
               0.5 * (ws.forward[i] - ws.backward[i]);
  }
}

PQ compute_PQ(const LagrangianState& X, const SystemParams& sys) {
  KernelWorkspace ws;
  PQ out;
  compute_PQ(X, sys, KernelOptions{}, ws, out);
  return out;
}

PQ compute_PQ_conservative(const LagrangianState& X, const SystemParams& sys) {
  KernelWorkspace ws;
  PQ out;
  KernelOptions opt;
  opt.mode = Mode::Conservative;
  compute_PQ(X, sys, opt, ws, out);
  return out;
}

}  // namespace ch2
