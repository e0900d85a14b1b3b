#include <doctest.h>

#include "lapnum/grid.hpp"
#include "lapnum/states.hpp"
#include "lapnum/suites.hpp"

#include <cmath>

using namespace lapnum;

namespace {

WeightFn decay_weight(double p) {
  return analytic_weight(
      WeightClass::W, "decay", [p](double r) { return std::pow(1.0 + r, -p); },
      [p](double r) { return -p * std::pow(1.0 + r, -p - 1.0); });
}

}  // namespace

TEST_CASE("operator_norm recovers the largest diagonal entry") {
  CVec d(50);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = 0.1 * static_cast<double>(i % 7) + 0.05;
  const LinearMap T = [&](const CVec& x) { return CVec(d.cwiseProduct(x)); };
  const LinearMap Ta = [&](const CVec& y) { return CVec(d.conjugate().cwiseProduct(y)); };
  const PowerResult p = operator_norm(T, Ta, d.size(), 3, 500, 1e-12);
  CHECK(p.converged);
  CHECK(p.norm == doctest::Approx(0.65).epsilon(1e-6));
}

TEST_CASE("validate_w separates integrable and slow decay") {
  CHECK(validate_w(decay_weight(1.5), 4096.0).verdict == Verdict::Pass);
  CHECK(validate_w(decay_weight(0.5), 4096.0).verdict == Verdict::Fail);
}

TEST_CASE("lap_suite statistics on a small free case") {
  const RadialGrid g = build_grid_spacing(1, 512.0, 0.2);
  const auto psis = gaussian_set(g, 2, 7);
  const auto rep = lap_suite(builtin_potential("free"), g, {1.0}, psis, {1.0, 0.3, 0.1, 0.03});
  REQUIRE(rep.stats.eps.size() == 4);
  CHECK(rep.sweeps.size() == 2);
  CHECK(rep.stats.decade_max.size() == 2);
  CHECK(rep.stats.variation >= 1.0);
  CHECK(rep.p_extension_worst <= 1e-10);
  for (double m : rep.stats.max_ratio) CHECK(m > 0.0);
}

TEST_CASE("radiation_suite refuses a potential without the long-range bound") {
  const RadialGrid g = build_grid_spacing(1, 256.0, 0.2);
  const auto psis = gaussian_set(g, 1, 7);
  const PotentialModel pot = builtin_potential("wvn_like");
  const WeightFn h = power_weight(WeightClass::H, 1.0, 0.2);
  CHECK_THROWS_AS(radiation_suite(pot, g, {1.0}, psis, {1.0, 0.1}, h, 0.5), Refusal);
}

TEST_CASE("smoothing_suite: swap symmetry of item d and zero weight") {
  const RadialGrid g = build_grid_spacing(1, 128.0, 0.2);
  const PotentialModel pot = builtin_potential("free");
  const WeightFn w1 = decay_weight(1.5), w2 = decay_weight(1.2);
  SmoothingOptions opt;
  opt.tol = 1e-8;
  opt.max_iter = 600;
  auto a = smoothing_suite(pot, g, {1.0}, w1, w2, {0.3}, opt);
  auto b = smoothing_suite(pot, g, {1.0}, w2, w1, {0.3}, opt);
  CHECK(a.rows[0].norms["d_R"] == doctest::Approx(b.rows[0].norms["d_R"]).epsilon(1e-4));
  const WeightFn zero = analytic_weight(
      WeightClass::W, "zero", [](double) { return 0.0; }, [](double) { return 0.0; });
  auto z = smoothing_suite(pot, g, {1.0}, zero, zero, {0.3}, opt);
  for (const auto& [item, v] : z.rows[0].norms) CHECK(v == 0.0);
}

TEST_CASE("hoelder_suite refuses when the truncation cut leaves too little range") {
  const RadialGrid g = build_grid_spacing(1, 200.0, 0.5);
  const PotentialModel pot = builtin_potential("short_range_power");
  const WeightFn w = power_weight(WeightClass::W, 1.0, -1.4), h = power_weight(WeightClass::H, 1.0, 0.15);
  CHECK_THROWS_AS(hoelder_suite(pot, g, 1.0, w, h, 0.5, {1e-3, 1e-2, 1e-1}), Refusal);
}

TEST_CASE("rellich_scan: free is clean, well has bound states, wvn is flagged") {
  RellichOptions opt;
  opt.dlambda = 0.01;
  const auto f = rellich_scan(builtin_potential("free"), 1, opt);
  CHECK(f.candidates.empty());
  CHECK(f.verdict == Verdict::Pass);
  CHECK(f.bound_states.empty());

  const auto w = rellich_scan(builtin_potential("well"), 1, opt);
  REQUIRE(w.bound_states.size() == 2);
  // Poeschl-Teller: -(nu - n)^2 with nu (nu + 1) = 5
  const double nu = 0.5 * (std::sqrt(21.0) - 1.0);
  CHECK(w.bound_states[0] == doctest::Approx(-nu * nu).epsilon(1e-5));
  CHECK(w.bound_states[1] == doctest::Approx(-(nu - 1) * (nu - 1)).epsilon(1e-5));

  const auto v = rellich_scan(builtin_potential("wvn_like"), 1, opt);
  REQUIRE(v.candidates.size() == 1);
  CHECK(v.candidates[0].lambda == doctest::Approx(1.0).epsilon(0.02));
  CHECK(v.verdict == Verdict::Informational);
}

TEST_CASE("commutator_diagnostic: zero f is trivial and c is scale invariant") {
  const RadialGrid g = build_grid_spacing(1, 128.0, 0.05);
  const PotentialModel pot = builtin_potential("free");
  auto states = gaussian_set(g, 5, 11);
  const WeightFn zero = analytic_weight(
      WeightClass::F, "zero", [](double) { return 0.0; }, [](double) { return 0.0; });
  const auto t = commutator_diagnostic(pot, g, zero, states);
  CHECK(t.verdict == Verdict::Pass);
  for (const auto& s : t.states) CHECK(s.trivial);

  const WeightFn f = named_f_family("lap_fk", {{"k", 1.0}});
  const auto a = commutator_diagnostic(pot, g, f, states);
  for (auto& s : states) s *= 3.0;
  const auto b = commutator_diagnostic(pot, g, f, states);
  CHECK(a.verdict == Verdict::Pass);
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i].c == doctest::Approx(b.states[i].c).epsilon(1e-10));

  CommutatorOptions rad;
  rad.lemma = Lemma::RadBound;
  rad.beta = 2.0;
  rad.eps = 0.01;
  const auto r = commutator_diagnostic(pot, g, power_weight(WeightClass::F, 1.0, 2.0), states, rad);
  for (const auto& s : r.states) CHECK(s.fixed == 0.0);
  rad.beta = 1.0;
  CHECK_THROWS_AS(commutator_diagnostic(pot, g, power_weight(WeightClass::F, 1.0, 2.0), states, rad), Error);
}
