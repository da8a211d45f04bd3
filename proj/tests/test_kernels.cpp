#include <cmath>
#include <random>

#include <doctest.h>

#include "ch2/errors.hpp"
#include "ch2/kernels.hpp"
#include "oracles.hpp"

using namespace ch2;

namespace {

LagrangianState block_state(std::size_t n) {
  // y = id on [-4, 4], h = 1 on [0, 1], everything else zero
  LagrangianState X = LagrangianState::identity({-4.0, 4.0, n});
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = X.xi.node(i);
    if (xi >= -1e-12 && xi <= 1.0 + 1e-12) X.h[i] = 1.0;
  }
  return X;
}

std::size_t nearest(const UniformGrid& g, double x) {
  return static_cast<std::size_t>(std::lround((x - g.lo) / g.spacing()));
}

}  // namespace

TEST_CASE("constant density is an equilibrium of the kernels") {
  LagrangianState X = LagrangianState::identity({-5.0, 5.0, 101}, 2.0);
  for (Mode m : {Mode::Dissipative, Mode::Conservative}) {
    KernelOptions opt;
    opt.mode = m;
    KernelWorkspace ws;
    PQ pq;
    compute_PQ(X, {}, opt, ws, pq);
    for (std::size_t i = 0; i < X.size(); ++i) {
      CHECK(pq.Pminus[i] == doctest::Approx(0.0));
      CHECK(pq.Q[i] == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("block of energy on [0, 1]") {
  // Pminus(0) = Q(0) = (1 - e^{-1}) / 4, up to trapezoid error
  const double exact = 0.25 * (1.0 - std::exp(-1.0));
  double prev = 1.0;
  for (std::size_t n : {801, 1601, 3201}) {
    const LagrangianState X = block_state(n);
    const PQ pq = compute_PQ(X);
    const std::size_t i0 = nearest(X.xi, 0.0);
    const double err = std::abs(pq.Pminus[i0] - exact) + std::abs(pq.Q[i0] - exact);
    CHECK(err < 5e-3);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("even h gives even Pminus and odd Q") {
  LagrangianState X = LagrangianState::identity({-6.0, 6.0, 241});
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double xi = X.xi.node(i);
    X.h[i] = std::exp(-xi * xi);
  }
  const PQ pq = compute_PQ(X);
  const oracle::PQ ref = oracle::direct_PQ(X, {}, false);
  const std::size_t n = X.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(pq.Pminus[i] == doctest::Approx(pq.Pminus[n - 1 - i]).epsilon(1e-12));
    CHECK(pq.Q[i] == doctest::Approx(-pq.Q[n - 1 - i]).epsilon(1e-12));
  }
  CHECK(oracle::relative_error(pq.Q, ref.Q) < 1e-12);
}

TEST_CASE("sweeps agree with the direct double sum on random states") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const LagrangianState X = oracle::random_state(200, rng, 0.2);
    const SystemParams sys{0.3, 1.5, 0.2};
    const PQ dis = compute_PQ(X, sys);
    const PQ con = compute_PQ_conservative(X, sys);
    const oracle::PQ rd = oracle::direct_PQ(X, sys, false);
    const oracle::PQ rc = oracle::direct_PQ(X, sys, true);
    CHECK(oracle::relative_error(dis.Pminus, rd.Pminus) < 1e-12);
    CHECK(oracle::relative_error(dis.Q, rd.Q) < 1e-12);
    CHECK(oracle::relative_error(con.Pminus, rc.Pminus) < 1e-12);
    CHECK(oracle::relative_error(con.Q, rc.Q) < 1e-12);
  }
}

TEST_CASE("masks coincide when nothing is frozen") {
  std::mt19937_64 rng(11);
  const LagrangianState X = oracle::random_state(128, rng, 0.0);
  const PQ a = compute_PQ(X), b = compute_PQ_conservative(X);
  for (std::size_t i = 0; i < X.size(); ++i) {
    CHECK(a.Pminus[i] == b.Pminus[i]);
    CHECK(a.Q[i] == b.Q[i]);
  }
}

TEST_CASE("frozen nodes differ from the conservative kernel by their h contribution") {
  std::mt19937_64 rng(13);
  const LagrangianState X = oracle::random_state(128, rng, 0.3);
  const PQ a = compute_PQ(X), b = compute_PQ_conservative(X);
  // conservative minus dissipative = (1/2) sum over frozen j of w_j e^{-|y_i - y_j|} (h_j / 2)
  const std::size_t n = X.size();
  const double d = X.xi.spacing();
  for (std::size_t i = 0; i < n; i += 7) {
    double p = 0.0, s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!X.frozen(j)) continue;
      const double wt = (j == 0 || j + 1 == n) ? 0.5 * d : d;
      const double e = wt * std::exp(-std::abs(X.y(i) - X.y(j))) * 0.5 * X.h[j];
      p += e;
      s += j < i ? e : (j > i ? -e : 0.0);
    }
    CHECK(b.Pminus[i] - a.Pminus[i] == doctest::Approx(0.5 * p).epsilon(1e-10));
    CHECK(b.Q[i] - a.Q[i] == doctest::Approx(-0.5 * s).epsilon(1e-10));
  }
}

TEST_CASE("frozen node values do not enter the dissipative kernel") {
  std::mt19937_64 rng(17);
  LagrangianState X = oracle::random_state(96, rng, 0.3);
  const PQ a = compute_PQ(X);
  for (std::size_t i = 0; i < X.size(); ++i)
    if (X.frozen(i)) X.h[i] *= 3.0;
  const PQ b = compute_PQ(X);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X.frozen(i)) continue;
    CHECK(a.Q[i] == doctest::Approx(b.Q[i]).epsilon(1e-14));
  }
}

TEST_CASE("P differentiates to Q y_xi on smooth states") {
  double prev = 1.0;
  for (std::size_t n : {401, 801}) {
    LagrangianState X = LagrangianState::identity({-10.0, 10.0, n});
    const double d = X.xi.spacing();
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = X.xi.node(i);
      X.Ubar[i] = std::exp(-xi * xi) * std::sin(xi);
      X.h[i] = std::exp(-xi * xi / 2.0);
    }
    const PQ pq = compute_PQ(X);
    // P = Pminus + U^2, with y = id so y_xi = 1
    double err = 0.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
      const double p1 = pq.Pminus[i + 1] + X.Ubar[i + 1] * X.Ubar[i + 1];
      const double p0 = pq.Pminus[i - 1] + X.Ubar[i - 1] * X.Ubar[i - 1];
      err = std::max(err, std::abs((p1 - p0) / (2.0 * d) - pq.Q[i]));
    }
    CHECK(err < prev / 3.0);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("decreasing y is rejected") {
  LagrangianState X = LagrangianState::identity({-1.0, 1.0, 21});
  X.zeta[10] = -0.2;
  CHECK_THROWS_AS(compute_PQ(X), NonMonotoneError);
}
