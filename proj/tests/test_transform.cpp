#include <cmath>
#include <random>

#include <doctest.h>

#include "ch2/diagnostics.hpp"
#include "ch2/errors.hpp"
#include "ch2/scenarios.hpp"
#include "ch2/transform.hpp"
#include "oracles.hpp"

using namespace ch2;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

EulerianState unit_atom(const UniformGrid& x) {
  EulerianState e = EulerianState::zero(x);
  e.mu.atoms = {{0.0, 1.0}};
  return e;
}

EulerianState smooth_data(std::size_t n, double eps = 0.05) {
  ScenarioParams p;
  p.epsilon = eps;
  return build_scenario("gaussian-cubic", p, {-15.0, 15.0, n});
}

/// f(xi) = xi + a sin(xi) / (1 + xi^2 / 16), a smooth relabeling with f - id bounded.
Relabeling wiggle(const UniformGrid& g, double a) {
  return Relabeling::from_function(
      g, [a](double s) { return s + a * std::sin(s) / (1.0 + s * s / 16.0); },
      [a](double s) {
        const double den = 1.0 + s * s / 16.0;
        return 1.0 + a * (std::cos(s) * den - std::sin(s) * s / 8.0) / (den * den);
      });
}

}  // namespace

TEST_CASE("L of empty data is the identity") {
  const UniformGrid x{-5.0, 5.0, 101}, xi{-10.0, 10.0, 201};
  const LagrangianState X = to_lagrangian(EulerianState::zero(x), xi);
  for (std::size_t i = 0; i < xi.n; ++i) {
    CHECK(X.zeta[i] == doctest::Approx(0.0));
    CHECK(X.Ubar[i] == 0.0);
    CHECK(X.q[i] == 1.0);
    CHECK(X.h[i] == 0.0);
    CHECK(X.rbar[i] == 0.0);
  }
}

TEST_CASE("L of a unit atom at the origin") {
  const UniformGrid x{-5.0, 5.0, 101}, xi{-10.0, 10.0, 401};
  const LagrangianState X = to_lagrangian(unit_atom(x), xi);
  for (std::size_t i = 0; i < xi.n; ++i) {
    const double s = xi.node(i);
    const double y = s <= 0.0 ? s : (s <= 1.0 ? 0.0 : s - 1.0);
    CHECK(X.y(i) == doctest::Approx(y).epsilon(1e-12));
    if (s > 1e-9 && s < 1.0 - 1e-9) {
      CHECK(X.h[i] == 1.0);
      CHECK(X.q[i] == 0.0);
    }
    if (s < -1e-9 || s > 1.0 + 1e-9) CHECK(X.h[i] == 0.0);
  }
  CHECK(validate_G(X).ok());
}

TEST_CASE("L of the exponential profile against scalar bisection") {
  // u = e^{-|x|}, mu = u_x^2 dx: G(y) = e^{2y}/2 + y for y <= 0, so y(1/2) = 0
  const UniformGrid x{-15.0, 15.0, 6001}, xi{-20.0, 20.0, 4001};
  EulerianState e = EulerianState::zero(x);
  for (std::size_t j = 0; j < x.n; ++j) {
    e.ubar[j] = std::exp(-std::abs(x.node(j)));
    e.mu.density[j] = std::exp(-2.0 * std::abs(x.node(j)));
  }
  const LagrangianState X = to_lagrangian(e, xi);
  double err = 0.0;
  for (std::size_t i = 0; i < xi.n; ++i) {
    const double s = xi.node(i);
    if (s > 0.5 || s < -14.0) continue;
    const double y = oracle::bisect_increasing([](double v) { return 0.5 * std::exp(2.0 * v) + v; },
                                               s, -30.0, 1.0);
    err = std::max(err, std::abs(X.y(i) - y));
  }
  CHECK(err < 2e-3);
  const std::size_t half = static_cast<std::size_t>(std::lround((0.5 - xi.lo) / xi.spacing()));
  CHECK(X.y(half) == doctest::Approx(0.0).epsilon(2e-3));
}

TEST_CASE("L produces admissible normalized states") {
  const EulerianState e = smooth_data(2048);
  const UniformGrid xi{-30.0, 30.0, 4096};
  const LagrangianState X = to_lagrangian(e, xi);
  CHECK(validate_G(X).ok());
  CHECK(normalization_defect(X) < 1e-4);
  for (std::size_t i = 1; i < xi.n; ++i) CHECK(X.y(i) >= X.y(i - 1));
  // mass: sum h dxi = mu(R) up to the quadrature error of the sampled density
  double mass = 0.0;
  for (std::size_t i = 0; i < xi.n; ++i) mass += xi.weight(i) * X.h[i];
  CHECK(std::abs(mass - e.mu.total(e.x)) < 0.1 * xi.spacing());
}

TEST_CASE("light atoms are rejected") {
  const UniformGrid x{-5.0, 5.0, 101}, xi{-10.0, 10.0, 11};
  EulerianState e = EulerianState::zero(x);
  e.mu.atoms = {{0.0, 1.0}};
  CHECK_THROWS_AS(to_lagrangian(e, xi), GridTooCoarseError);
}

TEST_CASE("M of the identity is empty data") {
  const UniformGrid xi{-10.0, 10.0, 201}, x{-5.0, 5.0, 101};
  const EulerianState e = to_eulerian(LagrangianState::identity(xi, 0.7), x);
  for (std::size_t j = 0; j < x.n; ++j) {
    CHECK(e.u(j) == doctest::Approx(0.0));
    CHECK(e.rho(j) == doctest::Approx(0.7));
    CHECK(e.mu.density[j] == doctest::Approx(0.0));
  }
  CHECK(e.mu.atoms.empty());
}

TEST_CASE("M recovers the unit atom") {
  const UniformGrid x{-5.0, 5.0, 101}, xi{-10.0, 10.0, 401};
  const EulerianState e = to_eulerian(to_lagrangian(unit_atom(x), xi), x);
  REQUIRE(e.mu.atoms.size() == 1);
  CHECK(e.mu.atoms[0].location == doctest::Approx(0.0));
  CHECK(std::abs(e.mu.atoms[0].mass - 1.0) <= xi.spacing());
  for (std::size_t j = 0; j < x.n; ++j) CHECK(e.u(j) == doctest::Approx(0.0));
}

TEST_CASE("M rejects degenerate nodes carrying density") {
  const UniformGrid xi{-10.0, 10.0, 201}, x{-5.0, 5.0, 101};
  LagrangianState X = LagrangianState::identity(xi);
  X.q[100] = 0.0;
  X.h[100] = 1.0;
  X.rbar[100] = 0.5;
  CHECK_THROWS_AS(to_eulerian(X, x), InconsistentStateError);
}

TEST_CASE("M o L converges to the identity") {
  double prev = 1.0;
  for (std::size_t n : {1024, 2048, 4096}) {
    const EulerianState e = smooth_data(n);
    const EulerianState back = to_eulerian(to_lagrangian(e, {-30.0, 30.0, n}), e.x);
    std::vector<double> u0(n), u1(n), r0(n), r1(n);
    for (std::size_t j = 0; j < n; ++j) {
      u0[j] = e.u(j);
      u1[j] = back.u(j);
      r0[j] = e.rho(j);
      r1[j] = back.rho(j);
    }
    const double err = sup_diff(u0, u1) + sup_diff(r0, r1);
    CHECK(err < prev / 2.0);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("L o M is the normalization") {
  // first order in dxi: M samples by linear interpolation in the labels
  double prev = 0.0;
  for (std::size_t n : {2048, 4096}) {
    const UniformGrid xi{-30.0, 30.0, n}, x{-15.0, 15.0, n};
    const LagrangianState X = to_lagrangian(smooth_data(n), xi);
    const LagrangianState Y = relabel(X, wiggle(xi, 0.2));
    const double err = d_R(normalize(Y), to_lagrangian(to_eulerian(Y, x), xi)).total;
    if (prev > 0.0) CHECK(err < prev / 1.8);
    prev = err;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("relabeling basics") {
  const UniformGrid xi{-20.0, 20.0, 801};
  LagrangianState X = to_lagrangian(smooth_data(1024), xi);
  X.c = 0.3;
  X.k = 0.4;
  SUBCASE("identity map") {
    const LagrangianState Y = relabel(X, Relabeling::identity(xi));
    CHECK(sup_diff(Y.zeta, X.zeta) < 1e-12);
    CHECK(sup_diff(Y.h, X.h) < 1e-12);
    CHECK(sup_diff(Y.w, X.w) < 1e-12);
  }
  SUBCASE("constants are untouched") {
    const LagrangianState Y = relabel(X, wiggle(xi, 0.3));
    CHECK(Y.c == X.c);
    CHECK(Y.k == X.k);
  }
  SUBCASE("relabeled maps are admissible") {
    const Relabeling f = wiggle(xi, 0.3);
    CHECK(f.strictly_increasing());
    CHECK(f.slope_bound() < 0.5);
  }
}

TEST_CASE("relabeling keeps q h = w^2 + rbar^2 up to interpolation error") {
  // the fields are interpolated separately, so the identity holds to O(dxi^2)
  double prev = 0.0;
  for (std::size_t n : {2048, 4096}) {
    const UniformGrid xi{-30.0, 30.0, n};
    const LagrangianState Y = relabel(to_lagrangian(smooth_data(n), xi), wiggle(xi, 0.3));
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      res = std::max(res, std::abs(Y.q[i] * Y.h[i] - Y.w[i] * Y.w[i] - Y.rbar[i] * Y.rbar[i]));
    if (prev > 0.0) CHECK(res < prev / 3.0);
    prev = res;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("M is invariant under relabeling") {
  const UniformGrid xi{-30.0, 30.0, 4096}, x{-15.0, 15.0, 1024};
  const LagrangianState X = to_lagrangian(smooth_data(2048), xi);
  const EulerianState a = to_eulerian(X, x);
  const EulerianState b = to_eulerian(relabel(X, wiggle(xi, 0.25)), x);
  CHECK(sup_diff(a.ubar, b.ubar) < 5e-4);
  CHECK(sup_diff(a.rhobar, b.rhobar) < 5e-4);
  CHECK(sup_diff(a.mu.density, b.mu.density) < 5e-3);
}

TEST_CASE("relabeling is a group action") {
  const UniformGrid xi{-30.0, 30.0, 4096};
  const LagrangianState X = to_lagrangian(smooth_data(2048), xi);
  const Relabeling f = wiggle(xi, 0.2), g = wiggle(xi, -0.15);
  const LagrangianState a = relabel(relabel(X, f), g);
  const LagrangianState b = relabel(X, compose(f, g, xi));
  CHECK(d_R(a, b).total < 2e-3);
}

TEST_CASE("normalization") {
  const UniformGrid xi{-30.0, 30.0, 4096};
  const LagrangianState X = to_lagrangian(smooth_data(2048), xi);
  SUBCASE("states with y + H = id are fixed") { CHECK(d_R(normalize(X), X).total < 2e-3); }
  SUBCASE("identity") {
    const LagrangianState I = LagrangianState::identity(xi);
    CHECK(d_R(normalize(I), I).total < 1e-12);
  }
  SUBCASE("invariant under relabeling and idempotent") {
    const LagrangianState Y = relabel(X, wiggle(xi, 0.3));
    CHECK(normalization_defect(Y) > 1e-2);
    const LagrangianState N = normalize(Y);
    CHECK(normalization_defect(N) < 1e-3);
    CHECK(d_R(N, normalize(X)).total < 5e-3);
    CHECK(d_R(normalize(N), N).total < 2e-3);
  }
}
