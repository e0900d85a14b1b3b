#include <doctest.h>

#include "lapnum/weights.hpp"

#include <cmath>

using namespace lapnum;

TEST_CASE("validate_h: constant, power, boundary exponent") {
  const RadialFn w0 = [](double r) { return std::pow(1.0 + r, -1.5); };
  const HReport one = validate_h(power_weight(WeightClass::H, 1.0, 0.0), w0, 0.5, 1024.0);
  CHECK(one.verdict == Verdict::Pass);
  const HReport p = validate_h(power_weight(WeightClass::H, 1.0, 0.2), w0, 0.3, 1024.0);
  CHECK(p.verdict == Verdict::Pass);
  CHECK(p.decay.verdict == Verdict::Pass);
  CHECK(p.integrable.verdict == Verdict::Pass);
  const HReport lin = validate_h(power_weight(WeightClass::H, 1.0, 1.0), w0, 1.0, 1024.0);
  CHECK(lin.verdict == Verdict::Fail);
  const HReport fast = validate_h(power_weight(WeightClass::H, 1.0, 0.5), w0, 0.3, 1024.0);
  CHECK(fast.verdict == Verdict::Fail);
  WeightFn neg = power_weight(WeightClass::H, -1.0, 0.0);
  CHECK_THROWS_AS(validate_h(neg, w0, 0.5, 64.0), Error);
}

TEST_CASE("escort: zero envelope gives constant h") {
  const RadialFn zero = [](double) { return 0.0; };
  const EscortResult e = construct_escort_h(zero, zero, 0.9, EscortTarget::Bounded, 1024.0);
  for (Eigen::Index i = 0; i < e.h.values.size(); ++i) CHECK(e.h.values[i] == 1.0);
  CHECK(e.status.rfind("constant", 0) == 0);
}

TEST_CASE("escort: every Condition-1 family passes validate_h") {
  for (const char* name : {"free", "short_range_power", "coulomb_like", "log_borderline", "well"}) {
    const PotentialModel p = builtin_potential(name);
    for (EscortTarget t : {EscortTarget::Bounded, EscortTarget::Divergent}) {
      const EscortResult e = construct_escort_h(p.w0, p.w0_tail, 0.9, t, 1024.0);
      const HReport rep = validate_h(e.h, p.w0, 0.9, 1024.0);
      CHECK_MESSAGE(rep.verdict == Verdict::Pass, name, " ", rep.reason);
      if (t == EscortTarget::Divergent) CHECK_MESSAGE(e.divergent_ok, name, " growth ", e.growth);
      else CHECK(e.growth < 3.0);
    }
  }
}

TEST_CASE("escort: power envelope gives power growth; log envelope diverges") {
  const RadialFn w = [](double r) { return std::pow(r, -1.5); };
  const RadialFn wt = [](double r) { return 2.0 / std::sqrt(r); };
  const EscortResult e = construct_escort_h(w, wt, 0.9, EscortTarget::Divergent, 4096.0);
  // beyond the burn-in the rate is kappa * (1/2) / r
  const double slope = std::log(e.h.value(4096.0) / e.h.value(512.0)) / std::log(8.0);
  CHECK(slope == doctest::Approx(0.45 * 0.5).epsilon(0.02));
  CHECK(validate_h(e.h, w, 0.9, 4096.0).verdict == Verdict::Pass);
  const PotentialModel lb = builtin_potential("log_borderline");
  const EscortResult d = construct_escort_h(lb.w0, lb.w0_tail, 0.9, EscortTarget::Divergent, 1024.0);
  CHECK(d.growth >= 10.0);
  const PotentialModel wvn = builtin_potential("wvn_like");
  CHECK_THROWS_AS(construct_escort_h(wvn.w0, wvn.w0_tail, 0.9, EscortTarget::Divergent, 1024.0), Error);
}

TEST_CASE("escort: Gronwall sandwich on sampled weights") {
  const PotentialModel p = builtin_potential("coulomb_like");
  const EscortResult e = construct_escort_h(p.w0, p.w0_tail, 0.9, EscortTarget::Divergent, 2048.0);
  const HReport rep = validate_h(e.h, p.w0, 0.9, 2048.0, 99);
  CHECK(rep.gronwall_pairs == 1000);
  CHECK(rep.gronwall_worst <= 1e-6);
}

TEST_CASE("named families") {
  const WeightFn f = named_f_family("lap_fk", {{"k", 5.0}});
  CHECK(f.value(32.0) == doctest::Approx(0.5));
  const FamilyCheck c = check_f_family(f, 4096.0);
  CHECK(c.max_negative <= 0.0);
  CHECK(c.max_growth_ratio <= 1.0 + 1e-12);
  CHECK(c.max_curvature_ratio <= 2.0 + 1e-3);
  const WeightFn t = named_f_family("theta_alpha", {{"k", 1e6}, {"alpha", 1.0}});
  CHECK(t.value(100.0) == doctest::Approx(1e-6).epsilon(1e-4));
  CHECK(t.deriv(100.0) < 1e-15);
  CHECK_THROWS_AS(named_f_family("theta_alpha", {{"k", 1.0}, {"alpha", 0.2}}), Error);
  CHECK_THROWS_AS(named_f_family("lap_fk", {{"k", 0.0}}), Error);
  CHECK_THROWS_AS(named_f_family("nope", {}), Error);
  const WeightFn h = power_weight(WeightClass::H, 1.0, 0.3);
  const WeightFn hs = named_f_family("h_squared_theta", {{"k", 3.0}, {"beta1", 0.5}}, &h);
  const FamilyCheck hc = check_f_family(hs, 4096.0);
  CHECK(hc.max_growth_ratio <= 2 * 0.3 + 0.5 + 1e-9);
  for (double r : {2.0, 9.0, 50.0}) {
    const double fd = (hs.value(r + 1e-5) - hs.value(r - 1e-5)) / 2e-5;
    CHECK(hs.deriv(r) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("exponential weight") {
  const WeightFn one = power_weight(WeightClass::F, 1.0, 0.0);
  const WeightFn e0 = exponential_weight(one, 3.0, [](double) { return 0.0; }, 256.0);
  for (double r : {1.0, 7.0, 200.0}) CHECK(e0.value(r) == doctest::Approx(1.0));
  const RadialFn w = [](double r) { return std::pow(1.0 + r, -1.5); };
  const WeightFn lap = named_f_family("lap_fk", {{"k", 4.0}});
  for (double K : {0.5, 2.0}) {
    const WeightFn ft = exponential_weight(lap, K, w, 4096.0);
    const FamilyCheck c = check_f_family(ft, 4096.0);
    CHECK(c.max_negative <= 1e-12);
    CHECK(c.max_growth_ratio <= 1.0 + K * 1.0);
    const double exact = std::exp(K * (2.0 / std::sqrt(2.0) - 2.0 / std::sqrt(11.0)));
    CHECK(ft.value(10.0) / lap.value(10.0) == doctest::Approx(exact).epsilon(1e-5));
  }
}
