#include <cmath>
#include <random>

#include <doctest.h>

#include "ch2/partition.hpp"
#include "ch2/scenarios.hpp"
#include "ch2/state.hpp"

using namespace ch2;

namespace {

Point8 pt(double q, double w, double h, double rbar, double k = 0.0) {
  return {0.0, 0.0, 0.0, q, w, h, rbar, k};
}

}  // namespace

TEST_CASE("chi is a C2 partition function") {
  using namespace partition;
  CHECK(chi(-1.0) == 0.0);
  CHECK(chi(0.0) == 0.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(2.5) == 1.0);
  CHECK(chi(0.5) == doctest::Approx(0.5));
  for (double x : {-0.5, 0.0, 1.0, 1.5}) {
    CHECK(dchi(x) == 0.0);
    CHECK(chi(x) * d2chi(x) == 0.0);
  }
  const double h = 1e-6;
  for (double x = 0.05; x < 1.0; x += 0.1) {
    CHECK(dchi(x) >= 0.0);
    CHECK(dchi(x) == doctest::Approx((chi(x + h) - chi(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d2chi(x) == doctest::Approx((dchi(x + h) - dchi(x - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("validate_G") {
  const UniformGrid g{-1.0, 1.0, 21};
  SUBCASE("identity passes") { CHECK(validate_G(LagrangianState::identity(g)).ok()); }
  SUBCASE("negative q") {
    LagrangianState X = LagrangianState::identity(g);
    X.q[4] = -0.1;
    const ValidationReport rep = validate_G(X);
    REQUIRE(rep.has(Invariant::Sign));
    CHECK(rep.violations.front().node == 4);
  }
  SUBCASE("incompatible q h") {
    LagrangianState X = LagrangianState::identity(g);
    X.h[7] = 1.0;
    X.w[7] = 0.5;
    CHECK(validate_G(X).has(Invariant::Compatibility));
  }
  SUBCASE("frozen node with nonzero q") {
    LagrangianState X = LagrangianState::identity(g);
    X.tau[3] = 0.0;
    CHECK(validate_G(X).has(Invariant::FrozenNode));
  }
  SUBCASE("q + h floor") {
    LagrangianState X = LagrangianState::identity(g);
    X.q[5] = 0.0;
    CHECK(validate_G(X).has(Invariant::Nondegeneracy));
  }
  SUBCASE("left decay") {
    LagrangianState X = LagrangianState::identity(g);
    X.zeta[0] = 0.1;
    CHECK(validate_G(X).has(Invariant::LeftDecay));
  }
  SUBCASE("eta enters the compatibility identity") {
    LagrangianState X = LagrangianState::identity(g);
    X.q[2] = 0.5;
    X.h[2] = 0.5;
    X.rbar[2] = 0.25;  // q h = 0.25 = eta rbar^2 with eta = 4
    CHECK(validate_G(X).has(Invariant::Compatibility));
    GTolerances tol;
    tol.eta = 4.0;
    CHECK(validate_G(X, tol).ok());
  }
}

TEST_CASE("region classifier examples") {
  CHECK(classify_region(pt(0, 0, 1, 0)) == Region::Omega1);
  CHECK(classify_region(pt(1, 0, 0, 0)) == Region::Omega2);
  CHECK(classify_region(pt(1, 0, 1, 1)) == Region::Omega3);
  CHECK(g_value(pt(0, 0, 1, 0)) == 0.0);
  CHECK(g_value(pt(1, 0, 0, 0)) == 1.0);
  CHECK(g_value(pt(1, 0, 1, 1)) == 2.0);
  // r = rbar + k q: rbar = -k q is Omega1/Omega2
  CHECK(classify_region(pt(0.5, -0.1, 0.5, -1.0, 2.0)) != Region::Omega3);
}

TEST_CASE("region classifier is a partition and g is continuous across g1 = g2") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    Point8 x{u(rng), u(rng), u(rng), std::abs(u(rng)), u(rng), std::abs(u(rng)), 0.0, 0.0};
    if (i % 2) x[6] = u(rng);
    const Region r = classify_region(x);
    const bool zero_r = std::abs(x[6] + x[7] * x[3]) == 0.0;
    CHECK((r == Region::Omega3) == !zero_r);
    if (r == Region::Omega1) CHECK(g1(x) <= g2(x));
    CHECK(std::isfinite(g_value(x)));
  }
  // on the interface g1 = g2 with w <= 0: |w| + 2q = q + h
  for (double q : {0.1, 0.5, 1.0}) {
    const double w = -0.3;
    Point8 x = pt(q, w, std::abs(w) + q, 0.0);
    CHECK(g1(x) == doctest::Approx(g2(x)));
    CHECK(g_value(x) == doctest::Approx(g2(x)));
    x[5] = std::nextafter(x[5], 0.0);  // just inside Omega2 side
    CHECK(g_value(x) == doctest::Approx(g1(x)));
  }
}

TEST_CASE("g on Eulerian rows") {
  EulerianRow zero;
  CHECK(g_eulerian(zero) == 1.0);
  EulerianRow steep;
  steep.ux = -3.0;
  CHECK(g_eulerian(steep) == 5.0);
  EulerianRow dense;
  dense.rhobar = 1.0;
  CHECK(g_eulerian(dense) == 2.0);
}

TEST_CASE("g(X_e) - 1 is integrable and converges under refinement") {
  ScenarioParams p;
  p.epsilon = 0.1;
  double prev = -1.0, diff_prev = 1.0;
  for (std::size_t n : {512, 1024, 2048}) {
    const EulerianState e = build_scenario("gaussian-cubic", p, {-15.0, 15.0, n});
    const double v = g_eulerian_l1_defect(e);
    CHECK(std::isfinite(v));
    if (prev >= 0.0) {
      const double diff = std::abs(v - prev);
      CHECK(diff <= diff_prev);
      diff_prev = diff;
    }
    prev = v;
  }
  CHECK(diff_prev < 1e-2);
}

TEST_CASE("frozen Omega1 points with r = 0 have w = 0") {
  // q = 0 and q h = w^2 force w = 0, and g is g1 = 0
  const Point8 x = pt(0.0, 0.0, 0.7, 0.0);
  CHECK(classify_region(x) == Region::Omega1);
  CHECK(g_value(x) == 0.0);
}

TEST_CASE("measure totals") {
  const UniformGrid g{0.0, 1.0, 11};
  Measure m;
  m.density.assign(11, 2.0);
  m.atoms = {{0.3, 0.5}, {0.7, 0.25}};
  CHECK(m.ac_mass(g) == doctest::Approx(2.0));
  CHECK(m.atom_mass() == doctest::Approx(0.75));
  CHECK(m.total(g) == doctest::Approx(2.75));
}

TEST_CASE("decomposition norms") {
  const UniformGrid g{-10.0, 10.0, 2001};
  EulerianState e = EulerianState::zero(g);
  e.c = 0.5;
  e.k = 2.0;
  CHECK(h_infinity_norm(e) == doctest::Approx(0.5));
  CHECK(l2_const_norm(e) == doctest::Approx(2.0));
  for (std::size_t i = 0; i < g.n; ++i) e.rhobar[i] = std::exp(-g.node(i) * g.node(i));
  // |exp(-x^2)|_{L2} = (pi/2)^{1/4}
  CHECK(l2_const_norm(e) == doctest::Approx(2.0 + std::pow(M_PI / 2.0, 0.25)).epsilon(1e-4));
}
