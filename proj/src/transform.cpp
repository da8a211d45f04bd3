#include "ch2/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ch2/errors.hpp"
#include "ch2/partition.hpp"
#include "interp.hpp"

namespace ch2 {

using detail::interp_sorted;
using detail::interp_uniform;
using detail::interp_uniform_clamped;

// ---------------------------------------------------------------------------
// Relabeling

Relabeling Relabeling::identity(const UniformGrid& grid) {
  Relabeling r;
  r.f = grid.nodes();
  r.f_inv = r.f;
  r.df.assign(grid.n, 1.0);
  return r;
}

Relabeling Relabeling::from_function(const UniformGrid& grid,
                                     const std::function<double(double)>& f,
                                     const std::function<double(double)>& df) {
  Relabeling r;
  r.f.resize(grid.n);
  r.f_inv.resize(grid.n);
  r.df.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double xi = grid.node(i);
    r.f[i] = f(xi);
    r.df[i] = df(xi);
    double lo = xi - 1.0, hi = xi + 1.0;
    while (f(lo) > xi) lo -= 2.0 * (hi - lo);
    while (f(hi) < xi) hi += 2.0 * (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(xi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < xi ? lo : hi) = mid;
    }
    r.f_inv[i] = 0.5 * (lo + hi);
  }
  return r;
}

double Relabeling::slope_bound() const {
  double k = 0.0;
  for (double d : df) k = std::max({k, d - 1.0, 1.0 / d - 1.0});
  return k;
}

bool Relabeling::strictly_increasing() const {
  for (std::size_t i = 1; i < f.size(); ++i)
    if (!(f[i] > f[i - 1])) return false;
  return std::all_of(df.begin(), df.end(), [](double d) { return d > 0.0; });
}

// ---------------------------------------------------------------------------
// Eulerian -> Lagrangian

namespace {

/// Eulerian data as functions of x: u is the cubic Hermite interpolant of the
/// samples with the centered-difference slopes, rhobar and the part of the mu
/// density not accounted for by u_x^2 + eta rhobar^2 are linear. Zero density
/// beyond the grid.
class Profile {
 public:
  Profile(const EulerianState& e, double eta)
      : e_(e), eta_(eta), h_(e.x.spacing()), u_(e.x.n), m_(e.ux()), excess_(e.x.n) {
    for (std::size_t j = 0; j < e.x.n; ++j) {
      u_[j] = e.u(j);
      excess_[j] = std::max(0.0, e.mu.density[j] - m_[j] * m_[j] - eta * e.rhobar[j] * e.rhobar[j]);
    }
  }

  struct Sample {
    double u = 0.0, ux = 0.0, rhobar = 0.0, density = 0.0;
  };

  Sample at(double x) const {
    const UniformGrid& g = e_.x;
    if (x < g.lo || x > g.hi) return {e_.c * partition::chi(x), e_.c * partition::dchi(x), 0.0, 0.0};
    const double s = (x - g.lo) / h_;
    auto j = std::min(static_cast<std::size_t>(s), g.n - 2);
    const double a = s - static_cast<double>(j);
    const double a2 = a * a, a3 = a2 * a;
    Sample out;
    out.u = (2 * a3 - 3 * a2 + 1) * u_[j] + (a3 - 2 * a2 + a) * h_ * m_[j] +
            (-2 * a3 + 3 * a2) * u_[j + 1] + (a3 - a2) * h_ * m_[j + 1];
    out.ux = (6 * a2 - 6 * a) / h_ * (u_[j] - u_[j + 1]) + (3 * a2 - 4 * a + 1) * m_[j] +
             (3 * a2 - 2 * a) * m_[j + 1];
    out.rhobar = (1 - a) * e_.rhobar[j] + a * e_.rhobar[j + 1];
    const double ex = (1 - a) * excess_[j] + a * excess_[j + 1];
    out.density = out.ux * out.ux + eta_ * out.rhobar * out.rhobar + ex;
    return out;
  }

  /// int_a^b (1 + density); exact when [a, b] lies in one grid cell.
  double mass(double a, double b) const {
    static constexpr double node[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double weight[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) sum += weight[k] * (1.0 + at(mid + half * node[k]).density);
    return half * sum;
  }

 private:
  const EulerianState& e_;
  double eta_, h_;
  std::vector<double> u_, m_, excess_;
};

/// G(x) = x + mu((-inf, x)) at the grid nodes and atoms; G jumps by the atom
/// mass at an atom.
struct CumulativeTable {
  struct Vertex {
    double x = 0.0;
    double g_before = 0.0;  // G(x-)
    double g_after = 0.0;   // G(x+)
  };
  std::vector<Vertex> v;
};

CumulativeTable build_cumulative(const EulerianState& e, const Profile& prof) {
  std::vector<double> xs = e.x.nodes();
  for (const auto& a : e.mu.atoms) xs.push_back(a.location);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  CumulativeTable tab;
  tab.v.resize(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    auto& vx = tab.v[j];
    vx.x = xs[j];
    double m = 0.0;
    for (const auto& a : e.mu.atoms)
      if (a.location == xs[j]) m += a.mass;
    vx.g_before = j == 0 ? vx.x : tab.v[j - 1].g_after + prof.mass(xs[j - 1], xs[j]);
    vx.g_after = vx.g_before + m;
  }
  return tab;
}

/// y with G(y-) <= s <= G(y+), and whether s lies on an atom.
struct Inverse {
  double y = 0.0;
  bool plateau = false;
};

Inverse invert_cumulative(const CumulativeTable& tab, const Profile& prof, double s) {
  const auto& v = tab.v;
  if (s < v.front().g_before) return {v.front().x + (s - v.front().g_before), false};
  const auto it = std::upper_bound(v.begin(), v.end(), s,
                                   [](double val, const auto& vx) { return val < vx.g_before; });
  const auto j = static_cast<std::size_t>(it - v.begin()) - 1;
  const auto& a = v[j];
  if (s <= a.g_after && a.g_after > a.g_before) return {a.x, true};
  if (j + 1 == v.size()) return {a.x + (s - a.g_after), false};
  // Newton on G(x) = s inside [a.x, b.x]; G' = 1 + density >= 1.
  double lo = a.x, hi = v[j + 1].x;
  const double target = s - a.g_after;
  double x = lo + (hi - lo) * target / (v[j + 1].g_before - a.g_after);
  for (int it = 0; it < 60; ++it) {
    const double r = prof.mass(a.x, x) - target;
    if (r == 0.0) break;
    (r < 0.0 ? lo : hi) = x;
    const double next = x - r / (1.0 + prof.at(x).density);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) break;
    x = next > lo && next < hi ? next : 0.5 * (lo + hi);
    if (hi - lo < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return {x, false};
}

}  // namespace

LagrangianState to_lagrangian(const EulerianState& e, const UniformGrid& xi,
                              const LagrangianOptions& opt) {
  const double dxi = xi.spacing();
  for (const auto& atom : e.mu.atoms) {
    if (atom.mass < 2.0 * dxi) {
      std::ostringstream os;
      os << "atom at x=" << atom.location << " has mass " << atom.mass
         << " < 2 dxi = " << 2.0 * dxi << "; refine the label grid";
      throw GridTooCoarseError(os.str());
    }
  }

  const Profile prof(e, opt.eta);
  const CumulativeTable tab = build_cumulative(e, prof);

  LagrangianState X = LagrangianState::identity(xi, e.k);
  X.c = e.c;
  for (std::size_t i = 0; i < xi.n; ++i) {
    const double s = xi.node(i);
    const Inverse inv = invert_cumulative(tab, prof, s);
    const double y = inv.y;
    const Profile::Sample p = prof.at(y);
    X.zeta[i] = y - s;
    X.Ubar[i] = p.u - e.c * partition::chi(y);
    if (inv.plateau) {
      X.q[i] = 0.0;
      X.w[i] = 0.0;
      X.h[i] = 1.0;
      X.rbar[i] = 0.0;
      continue;
    }
    // q = y_xi and w = U_xi; density beyond u_x^2 + eta rhobar^2 goes into |w|
    // so that q h = w^2 + eta rbar^2.
    const double q = 1.0 / (1.0 + p.density);
    const double rb = p.rhobar * q;
    const double w_abs = std::sqrt(std::max(0.0, p.density * q * q - opt.eta * rb * rb));
    X.q[i] = q;
    X.h[i] = p.density * q;
    X.w[i] = p.ux < 0.0 ? -w_abs : w_abs;
    X.rbar[i] = rb;
  }
  return X;
}

// ---------------------------------------------------------------------------
// Lagrangian -> Eulerian

EulerianState to_eulerian(const LagrangianState& X, const UniformGrid& xg,
                          const EulerianOptions& opt, EulerianReport* report) {
  const std::size_t n = X.size();
  const double dxi = X.xi.spacing();
  const double dx = xg.spacing();

  std::vector<double> ym(n);
  for (std::size_t i = 0; i < n; ++i) ym[i] = i == 0 ? X.y(0) : std::max(ym[i - 1], X.y(i));

  std::vector<char> degenerate(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    degenerate[i] = X.q[i] < opt.q_tol;
    if (degenerate[i] && std::abs(X.rbar[i]) > opt.r_tol) {
      std::ostringstream os;
      os << "node " << i << " has q=" << X.q[i] << " but rbar=" << X.rbar[i]
         << "; the density pushforward would not be absolutely continuous";
      throw InconsistentStateError(os.str());
    }
  }

  EulerianReport rep;

  // u: one sample per distinct y; degenerate runs collapse to their mean.
  std::vector<double> yc, uc;
  yc.reserve(n);
  uc.reserve(n);
  auto push_point = [&](double y, double u, std::size_t weight) {
    const double eps = 1e-13 * (1.0 + std::abs(y));
    if (!yc.empty() && y - yc.back() <= eps) {
      // merge with the previous sample, weighted by the number of nodes it holds
      (void)weight;
      uc.back() = 0.5 * (uc.back() + u);
      return;
    }
    yc.push_back(y);
    uc.push_back(u);
  };
  for (std::size_t i = 0; i < n;) {
    if (degenerate[i]) {
      std::size_t j = i;
      while (j + 1 < n && degenerate[j + 1]) ++j;
      double ysum = 0.0, usum = 0.0, umin = X.U(i), umax = X.U(i);
      for (std::size_t m = i; m <= j; ++m) {
        ysum += ym[m];
        const double u = X.U(m);
        usum += u;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
      }
      const double cnt = static_cast<double>(j - i + 1);
      push_point(ysum / cnt, usum / cnt, j - i + 1);
      rep.plateau_u_spread = std::max(rep.plateau_u_spread, umax - umin);
      i = j + 1;
    } else {
      push_point(ym[i], X.U(i), 1);
      ++i;
    }
  }

  // rhobar = rbar / q on nondegenerate nodes.
  std::vector<double> yr, rr;
  for (std::size_t i = 0; i < n; ++i) {
    if (degenerate[i]) continue;
    if (!yr.empty() && ym[i] <= yr.back()) continue;
    yr.push_back(ym[i]);
    rr.push_back(X.rbar[i] / X.q[i]);
  }

  EulerianState e = EulerianState::zero(xg);
  e.c = X.c;
  e.k = X.k;
  for (std::size_t j = 0; j < xg.n; ++j) {
    const double x = xg.node(j);
    e.ubar[j] = interp_sorted(yc, uc, x) - X.c * partition::chi(x);
    if (!yr.empty() && x >= yr.front() && x <= yr.back()) e.rhobar[j] = interp_sorted(yr, rr, x);
  }

  // mu: each label cell carries trapezoid mass dxi (h_i + h_{i+1}) / 2, spread
  // uniformly over [y_i, y_{i+1}] into dual cells [x_j - dx/2, x_j + dx/2].
  auto deposit_point = [&](double loc, double mass) {
    const double s = std::round((loc - xg.lo) / dx);
    if (s < 0.0 || s > static_cast<double>(xg.n - 1)) return;
    e.mu.density[static_cast<std::size_t>(s)] += mass / dx;
  };
  auto deposit_interval = [&](double a, double b, double mass) {
    if (b - a <= 1e-14 * (1.0 + std::abs(a))) {
      deposit_point(0.5 * (a + b), mass);
      return;
    }
    const double lo = xg.lo - 0.5 * dx;
    const double hi = xg.hi + 0.5 * dx;
    const double aa = std::max(a, lo), bb = std::min(b, hi);
    if (bb <= aa) return;
    const double rate = mass / (b - a);
    auto j = static_cast<std::size_t>(std::floor((aa - lo) / dx));
    for (; j < xg.n; ++j) {
      const double cl = lo + static_cast<double>(j) * dx;
      const double cr = cl + dx;
      if (cl >= bb) break;
      const double ov = std::min(cr, bb) - std::max(cl, aa);
      if (ov > 0.0) e.mu.density[j] += rate * ov / dx;
    }
  };

  const double atom_min = opt.atom_min_cells * dxi;
  for (std::size_t i = 0; i + 1 < n;) {
    if (degenerate[i] && degenerate[i + 1]) {
      std::size_t j = i;
      while (j + 1 < n && degenerate[j + 1]) ++j;
      double mass = 0.0, ysum = 0.0;
      for (std::size_t m = i; m < j; ++m) mass += 0.5 * dxi * (X.h[m] + X.h[m + 1]);
      for (std::size_t m = i; m <= j; ++m) ysum += ym[m];
      const double loc = ysum / static_cast<double>(j - i + 1);
      if (mass >= atom_min) {
        if (!e.mu.atoms.empty() && loc - e.mu.atoms.back().location <= 1e-12 * (1.0 + std::abs(loc)))
          e.mu.atoms.back().mass += mass;
        else
          e.mu.atoms.push_back({loc, mass});
      } else if (mass > 0.0) {
        deposit_point(loc, mass);
        ++rep.smeared_clusters;
      }
      i = j;
      continue;
    }
    deposit_interval(ym[i], ym[i + 1], 0.5 * dxi * (X.h[i] + X.h[i + 1]));
    ++i;
  }

  if (report) *report = rep;
  return e;
}

// ---------------------------------------------------------------------------
// Relabeling action and normalization

LagrangianState relabel(const LagrangianState& X, const Relabeling& f) {
  const UniformGrid& g = X.xi;
  LagrangianState out = X;
  const double zl = X.zeta.front(), zr = X.zeta.back();
  for (std::size_t i = 0; i < g.n; ++i) {
    const double s = f.f[i];
    const double d = f.df[i];
    double zeta_s;
    if (s <= g.lo)
      zeta_s = zl;
    else if (s >= g.hi)
      zeta_s = zr;
    else
      zeta_s = interp_uniform(g, X.zeta, s, 0.0);
    out.zeta[i] = s + zeta_s - g.node(i);
    out.Ubar[i] = interp_uniform_clamped(g, X.Ubar, s);
    out.q[i] = interp_uniform_clamped(g, X.q, s) * d;
    out.w[i] = interp_uniform_clamped(g, X.w, s) * d;
    out.h[i] = interp_uniform_clamped(g, X.h, s) * d;
    out.rbar[i] = interp_uniform_clamped(g, X.rbar, s) * d;
    const double pos = std::clamp((s - g.lo) / g.spacing(), 0.0, static_cast<double>(g.n - 1));
    out.tau[i] = X.tau[static_cast<std::size_t>(std::lround(pos))];
    if (out.frozen(i)) {
      out.q[i] = 0.0;
      out.w[i] = 0.0;
      out.rbar[i] = 0.0;
    }
  }
  return out;
}

Relabeling compose(const Relabeling& f, const Relabeling& g, const UniformGrid& grid) {
  // f o g: sample f at g(xi); beyond the grid f - id is continued as a constant.
  auto eval = [&](const std::vector<double>& vals, double s) {
    if (s <= grid.lo) return s + (vals.front() - grid.lo);
    if (s >= grid.hi) return s + (vals.back() - grid.hi);
    return interp_uniform(grid, vals, s, 0.0);
  };
  Relabeling out;
  out.f.resize(grid.n);
  out.f_inv.resize(grid.n);
  out.df.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double gi = g.f[i];
    out.f[i] = eval(f.f, gi);
    out.df[i] = interp_uniform_clamped(grid, f.df, gi) * g.df[i];
    out.f_inv[i] = eval(g.f_inv, f.f_inv[i]);
  }
  return out;
}

std::vector<double> cumulative_h(const LagrangianState& X) {
  std::vector<double> H(X.size(), 0.0);
  const double d = X.xi.spacing();
  for (std::size_t i = 1; i < X.size(); ++i) H[i] = H[i - 1] + 0.5 * d * (X.h[i - 1] + X.h[i]);
  return H;
}

LagrangianState normalize(const LagrangianState& X) {
  const UniformGrid& g = X.xi;
  const std::vector<double> H = cumulative_h(X);
  std::vector<double> labels = g.nodes();
  std::vector<double> G(g.n);
  for (std::size_t i = 0; i < g.n; ++i) G[i] = X.y(i) + H[i];
  for (std::size_t i = 1; i < g.n; ++i) {
    if (!(G[i] > G[i - 1])) G[i] = std::nextafter(G[i - 1], kNever);
  }

  Relabeling f;
  f.f.resize(g.n);
  f.df.resize(g.n);
  f.f_inv = G;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double s = detail::invert_sorted_unit_tails(labels, G, g.node(i));
    f.f[i] = s;
    const double qh = interp_uniform_clamped(g, X.q, s) + interp_uniform_clamped(g, X.h, s);
    f.df[i] = qh > 0.0 ? 1.0 / qh : 1.0;
  }
  return relabel(X, f);
}

double normalization_defect(const LagrangianState& X) {
  const std::vector<double> H = cumulative_h(X);
  double m = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) m = std::max(m, std::abs(X.zeta[i] + H[i]));
  return m;
}

}  // namespace ch2
