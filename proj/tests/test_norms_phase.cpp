#include <doctest.h>

#include "lapnum/norms.hpp"
#include "lapnum/phase.hpp"

#include <cmath>
#include <random>

using namespace lapnum;

TEST_CASE("norms: single-shell indicator and zero state") {
  const RadialGrid g = build_grid(1, 64.0, 12801);
  CVec psi = CVec::Zero(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (g.coord[j] >= 0.0 && g.coord[j] <= 1.0) psi[j] = 1.0;
  const double n = g.norm(psi);
  const BesovProfile p = dyadic_profile(g, psi);
  CHECK(p.besov == doctest::Approx(std::sqrt(2.0) * n));
  CHECK(p.besov_star == doctest::Approx(n / std::sqrt(2.0)));
  const BesovProfile z = dyadic_profile(g, CVec::Zero(g.size()));
  CHECK(z.besov == 0.0);
  CHECK(z.besov_star == 0.0);
  CHECK_THROWS_AS(dyadic_profile(build_grid(1, 1.5, 32), CVec::Zero(32)), Error);
}

TEST_CASE("norms: blocks partition the L2 norm") {
  const RadialGrid g = build_grid(1, 100.0, 4001);
  CVec psi(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) psi[j] = std::exp(-std::abs(g.coord[j]) / 30.0);
  const BesovProfile p = dyadic_profile(g, psi);
  double sq = 0.0;
  for (double b : p.block_norms) sq += b * b;
  CHECK(std::sqrt(sq) == doctest::Approx(g.norm(psi)));
  CHECK(p.has_partial_shell);
  CHECK(p.k_max == 6);
  CHECK(p.besov_star <= p.besov);
}

TEST_CASE("norms: tail classification") {
  const RadialGrid g = build_grid(1, 4096.0, 81921);
  CVec plane(g.size()), inv(g.size()), gauss(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    plane[j] = std::polar(1.0, 1.3 * g.coord[j]);
    inv[j] = 1.0 / g.r[j];
    gauss[j] = std::exp(-g.coord[j] * g.coord[j]);
  }
  const BesovProfile pp = dyadic_profile(g, plane);
  for (int k = 3; k <= pp.k_max; ++k) CHECK(pp.tail[k - 1] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(tail_class(pp) == TailClass::BStarOnly);
  CHECK(tail_class(dyadic_profile(g, inv)) == TailClass::BStar0);
  CHECK(tail_class(dyadic_profile(g, gauss)) == TailClass::BStar0);
  CVec grow(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) grow[j] = g.r[j];
  CHECK(tail_class(dyadic_profile(g, grow)) == TailClass::Unbounded);
  const RadialGrid small = build_grid(1, 12.0, 241);
  CHECK_THROWS_AS(tail_class(dyadic_profile(small, CVec::Ones(small.size()))), Refusal);
}

TEST_CASE("norms: duality, scaling, inclusion") {
  const RadialGrid g = build_grid(1, 512.0, 10241);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  double worst_ratio = 0.0;
  for (int t = 0; t < 20; ++t) {
    CVec a(g.size()), b(g.size());
    const double c1 = 100 * nd(rng), c2 = 100 * nd(rng), w1 = 2 + 50 * std::abs(nd(rng));
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double x = g.coord[j];
      a[j] = Complex(nd(rng), nd(rng)) * std::exp(-(x - c1) * (x - c1) / (2 * w1 * w1));
      b[j] = Complex(nd(rng), nd(rng)) / std::sqrt(g.r[j]) * std::polar(1.0, c2 * x);
    }
    const BesovProfile pa = dyadic_profile(g, a), pb = dyadic_profile(g, b);
    CHECK(std::abs(g.dot(a, b)) <= pa.besov * pb.besov_star * (1 + 1e-12));
    const BesovProfile sa = dyadic_profile(g, Complex(0, -3.5) * a);
    CHECK(sa.besov == doctest::Approx(3.5 * pa.besov));
    CHECK(sa.besov_star == doctest::Approx(3.5 * pa.besov_star));
    worst_ratio = std::max(worst_ratio, pb.besov_star / weighted_norm(g, b, -0.5));
  }
  CHECK(worst_ratio <= 1.0 + 1e-12);  // 2^{-k/2} <= r^{-1/2}... up to the factor sqrt(2) bound
}

TEST_CASE("phase: r_lambda selection") {
  const RadialGrid g = build_grid(1, 256.0, 51201);
  CHECK(select_r_lambda(builtin_potential("free"), g, 1.0) == 1.0);
  CHECK(select_r_lambda(builtin_potential("coulomb_like", {{"c", -2.0}}), g, 1.0) == 1.0);
  const PotentialModel rep = builtin_potential("coulomb_like", {{"c", 2.0}});
  CHECK(select_r_lambda(rep, g, 1.0) == doctest::Approx(8.0).epsilon(0.01));
  double prev = 1e300;
  for (double lam = 0.2; lam < 5; lam += 0.1) {
    const double r = select_r_lambda(rep, g, lam);
    CHECK(r <= prev);
    prev = r;
  }
  CHECK_THROWS_AS(select_r_lambda(rep, g, -1.0), Error);
  CHECK_THROWS_AS(select_r_lambda(builtin_potential("coulomb_like", {{"c", 400.0}}), g, 1.0), Error);
}

TEST_CASE("phase: free values, branches, conjugation") {
  const RadialGrid g1 = build_grid(1, 64.0, 1281);
  const Phase p = build_phase(builtin_potential("free"), g1, 2.0, 1);
  for (Eigen::Index j = 0; j < g1.size(); ++j) CHECK(std::abs(p.a[j] - std::sqrt(2.0)) < 1e-15);
  const RadialGrid g2 = build_grid(2, 64.0, 640);
  const Phase p2 = build_phase(builtin_potential("free"), g2, 2.0, 1);
  for (Eigen::Index j = 0; j < g2.size(); ++j)
    CHECK(p2.a[j].real() == doctest::Approx(std::sqrt(2.0 + 0.25 / (g2.r[j] * g2.r[j]))));
  CHECK_THROWS_AS(build_phase(builtin_potential("free"), g1, Complex(1, 0.1), -1), Error);
  CHECK_THROWS_AS(build_phase(builtin_potential("free"), g1, Complex(-1, 0.1), 1), Error);
  for (const char* name : {"free", "coulomb_like", "log_borderline"}) {
    const PotentialModel pot = builtin_potential(name);
    for (double eps : {0.0, 0.01, 0.5}) {
      const Phase plus = build_phase(pot, g1, Complex(1.5, eps), 1);
      const Phase minus = build_phase(pot, g1, Complex(1.5, -eps), -1);
      for (Eigen::Index j = 0; j < g1.size(); ++j) {
        CHECK(plus.a[j].imag() >= 0.0);
        CHECK(minus.a[j].imag() >= 0.0);
        if (plus.eta[j] == 1.0) CHECK(std::abs(std::conj(minus.a[j]) + plus.a[j]) < 1e-14);
        if (eps > 0 && plus.eta[j] == 1.0) CHECK(plus.a[j].imag() > 0.0);
        if (plus.eta[j] == 0.0) CHECK(plus.a[j] == Complex(0.0));
      }
    }
  }
}

TEST_CASE("phase: derivative and Riccati residual") {
  const RadialGrid g = build_grid(1, 512.0, 20481);
  const PotentialModel coul = builtin_potential("coulomb_like", {{"c", 2.0}});
  const Phase ph = build_phase(coul, g, Complex(1.0, 0.2), 1);
  for (Eigen::Index j = 1; j + 1 < g.size(); j += 97) {
    if (g.coord[j] < 2.0) continue;
    const Complex fd = (ph.a[j + 1] - ph.a[j - 1]) / (g.r[j + 1] - g.r[j - 1]);
    CHECK(std::abs(fd - ph.grad_a[j]) < 1e-3 * (std::abs(ph.grad_a[j]) + 1e-3));
  }
  const RicattiProfile rp = ricatti_residual(ph, coul, g);
  CHECK(std::isfinite(rp.fitted_c));
  CHECK(rp.fitted_c < 10.0);
  CHECK(rp.residual[g.size() - 1] < 1e-4);
  const RicattiProfile rf = ricatti_residual(build_phase(builtin_potential("free"), g, 1.0, 1),
                                             builtin_potential("free"), g);
  CHECK(rf.residual.maxCoeff() < 1e-14);
  const RadialGrid g2 = build_grid(2, 512.0, 4096);
  const Phase p2 = build_phase(builtin_potential("free"), g2, 1.0, 1);
  const RicattiProfile r2 = ricatti_residual(p2, builtin_potential("free"), g2);
  for (Eigen::Index j = 100; j < g2.size(); j += 500)
    CHECK(r2.residual[j] * std::pow(g2.r[j], 3) < 0.3);
  CHECK(grad_a_bound(ph, coul, g) < 50.0);
}

TEST_CASE("phase: factored decomposition converges") {
  for (int d : {1, 2}) {
    double prev = 0;
    for (Eigen::Index n : {1024, 2048, 4096}) {
      const RadialGrid g = build_grid(d, 64.0, d == 1 ? 2 * n + 1 : n);
      CVec psi(g.size());
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double x = g.coord[j] - 30.0;
        psi[j] = std::exp(-x * x / 18.0) * std::polar(1.0, 0.7 * g.coord[j]);
      }
      const E2Residual r =
          e2_decomposition_residual(builtin_potential("coulomb_like", {{"c", 2.0}}), g, Complex(2, 0.1), 1, psi);
      CHECK_FALSE(r.touches_boundary);
      if (prev > 0) CHECK(std::log2(prev / r.value) > 1.0);
      prev = r.value;
    }
  }
}
