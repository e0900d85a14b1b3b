// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff every line passes.
#include "lapnum/checks.hpp"
#include "lapnum/states.hpp"
#include "lapnum/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace lapnum;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  bool ok = true;
  std::ostringstream detail;
  void require(bool c, const std::string& why) {
    if (!c) {
      ok = false;
      detail << " [fails: " << why << "]";
    }
  }
};

const std::vector<double> kEps{1, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001};

// Direct quadrature of the closed-form free kernel; deliberately separate from the library copy.
double kernel_oracle(const RadialGrid& g, Complex z, const CVec& psi, const CVec& u, double window) {
  Complex k = std::sqrt(z);
  if (k.imag() < 0) k = -k;
  double err = 0, ref = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(g.coord[i]) > window) continue;
    Complex acc = 0;
    for (Eigen::Index j = 0; j < g.size(); ++j)
      if (std::abs(psi[j]) > 1e-300)
        acc += Complex(0, 0.5) / k * std::exp(Complex(0, 1) * k * std::abs(g.coord[i] - g.coord[j])) * psi[j];
    acc *= g.spacing;
    err = std::max(err, std::abs(acc - u[i]));
    ref = std::max(ref, std::abs(acc));
  }
  return err / ref;
}

PotentialModel named(const char* name) {
  if (std::string(name) == "coulomb_like") return builtin_potential(name, {{"c", -2.0}});
  return builtin_potential(name);
}

void criterion1(Line& L) {
  const auto t0 = Clock::now();
  for (const char* name : {"free", "coulomb_like"}) {
    const OperatorCheckReport r = operators_check(named(name), 1);
    L.detail << name << " min order " << r.min_order << "; ";
    L.require(r.verdict == Verdict::Pass && r.min_order >= 1.8, std::string(name) + " order");
    L.require(r.rows.back().nodes <= 32769, "node budget");
  }
  const double t = seconds_since(t0);
  L.detail << "runtime " << t << " s";
  L.require(t < 30.0, "runtime");
}

void criterion2(Line& L) {
  const auto t0 = Clock::now();
  for (Complex z : {Complex(1.0, 0.5), Complex(2.0, 0.01)}) {
    // the eps = 0.01 kernel decays over 1 / Im sqrt z ~ 280, so its box is larger
    const RadialGrid g = build_grid_spacing(1, z.imag() > 0.1 ? 80.0 : 2000.0, 0.02);
    const CVec psi = gaussian_state(g, 0.0, 0.5);
    const SolveResult s = solve(assemble_H(g, named("free")), {z.real(), z.imag(), 1}, psi);
    const double err = kernel_oracle(g, z, psi, s.u, 10.0);
    L.detail << "z=" << z.real() << "+" << z.imag() << "i error " << err << "; ";
    L.require(!s.failed && err <= 1e-3, "kernel error");
  }
  const double t = seconds_since(t0);
  L.detail << "runtime " << t << " s";
  L.require(t < 10.0, "runtime");
}

void criterion3(Line& L) {
  const auto t0 = Clock::now();
  const RadialGrid g = build_grid_spacing(1, 8192.0, 0.1);
  const auto psis = gaussian_set(g, 3, 7);
  for (const char* name : {"free", "coulomb_like", "log_borderline"}) {
    const LapSuiteReport r = lap_suite(named(name), g, {1.0, 2.0}, psis, kEps);
    L.detail << name << " variation " << r.stats.variation << " L2 contrast " << r.stats.contrast_growth << "; ";
    L.require(r.verdict == Verdict::Pass, std::string(name) + ": " + r.reason);
    L.require(r.stats.variation < 10.0 && r.stats.contrast_growth > 100.0, std::string(name) + " thresholds");
  }
  const double t = seconds_since(t0);
  L.detail << "runtime " << t << " s";
  L.require(t < 300.0, "runtime");
}

void criterion4(Line& L) {
  const auto t0 = Clock::now();
  const RadialGrid g = build_grid_spacing(1, 8192.0, 0.1);
  const auto psis = gaussian_set(g, 3, 7);
  for (const char* name : {"free", "coulomb_like", "log_borderline"}) {
    const PotentialModel pot = named(name);
    const EscortResult esc = construct_escort_h(pot.w0, pot.w0_tail, 0.9, EscortTarget::Divergent, g.r.maxCoeff());
    const RadiationSuiteReport r = radiation_suite(pot, g, {1.0, 2.0}, psis, kEps, esc.h, 0.9);
    L.detail << name << " variation " << r.stats.variation << " (A+a) growth " << r.stats.contrast_growth << "; ";
    L.require(r.verdict == Verdict::Pass, std::string(name) + ": " + r.reason);
    L.require(r.stats.variation < 10.0 && r.stats.contrast_growth > 100.0, std::string(name) + " thresholds");
  }
  const double t = seconds_since(t0);
  L.detail << "runtime " << t << " s";
  L.require(t < 300.0, "runtime");
}

void criterion5(Line& L) {
  const auto t0 = Clock::now();
  const PotentialModel pot = builtin_potential("short_range_power", {{"alpha", 1.4}, {"c", 1.0}});
  const RadialGrid g = build_grid_spacing(1, 1e5, 0.5);
  const WeightFn w = power_weight(WeightClass::W, 1.0, -1.4), h = power_weight(WeightClass::H, 1.0, 0.15);
  std::vector<double> deltas;
  for (int i = 0; i <= 12; ++i) deltas.push_back(std::pow(10.0, -3.0 + 0.25 * i));
  HoelderOptions opt;
  opt.target_slope = 0.15;
  opt.slope_tol = 0.05;
  opt.tol = 1e-6;
  const HoelderReport r = hoelder_suite(pot, g, 1.0, w, h, 0.5, deltas, opt);
  L.detail << "slope " << r.slope << " over " << r.decades << " decades (raw extent " << g.extent << ": "
           << r.slope_outer << "); ";
  L.require(r.decades >= 3.0 - 1e-9, "decades");
  L.require(std::abs(r.slope - 0.15) <= 0.05, "slope");
  L.require(r.verdict == Verdict::Pass, r.reason);
  const double t = seconds_since(t0);
  L.detail << "runtime " << t << " s";
  L.require(t < 600.0, "runtime");
}

void criterion6(Line& L) {
  const RadialGrid g = build_grid_spacing(1, 256.0, 0.1);
  const WeightFn h = power_weight(WeightClass::H, 1.0, 0.2);
  for (const char* name : {"free", "coulomb_like"}) {
    const UniquenessReport r =
        uniqueness_compare(named(name), g, 1.0, 1, gaussian_state(g, 0.0, 2.0), {0.016, 0.008, 0.004, 0.002}, h);
    L.detail << name << " discrepancy " << r.discrepancy << " tails " << to_string(r.tail_radiation) << "/"
             << to_string(r.tail_u) << "; ";
    L.require(r.accepted && r.discrepancy <= 1e-2, std::string(name) + " discrepancy");
    L.require(r.tail_radiation == TailClass::BStar0 && r.tail_u == TailClass::BStarOnly, std::string(name) + " tails");
  }
}

void criterion7(Line& L) {
  for (const char* name : {"free", "short_range_power", "coulomb_like", "log_borderline", "well"}) {
    const PotentialModel pot = named(name);
    if (!pot.claims_condition1) continue;
    const RellichReport r = rellich_scan(pot, 1);
    L.detail << name << " " << r.candidates.size() << " candidates; ";
    L.require(r.candidates.empty() && r.failures == 0, std::string(name) + " candidates");
  }
  const RellichReport w = rellich_scan(builtin_potential("wvn_like", {{"c", -8.0}, {"lambda0", 1.0}}), 1);
  bool near = false;
  for (const RellichCandidate& c : w.candidates) near = near || std::abs(c.lambda - 1.0) <= 0.1;
  L.detail << "wvn_like " << w.candidates.size() << " candidate(s)"
           << (w.candidates.empty() ? "" : " at " + std::to_string(w.candidates.front().lambda)) << "; ";
  L.require(near, "wvn_like flag");
  // -depth sech^2: E_n = -(nu - n)^2 with nu (nu + 1) = depth
  const RellichReport b = rellich_scan(builtin_potential("well", {{"depth", 5.0}}), 1);
  const double nu = 0.5 * (std::sqrt(21.0) - 1.0);
  L.detail << "well bound states";
  for (double e : b.bound_states) L.detail << " " << e;
  L.require(b.bound_states.size() == 2, "well count");
  if (b.bound_states.size() == 2) {
    L.require(std::abs(b.bound_states[0] + nu * nu) < 1e-4, "well ground state");
    L.require(std::abs(b.bound_states[1] + (nu - 1) * (nu - 1)) < 1e-4, "well excited state");
  }
}

void criterion8(Line& L) {
  for (const char* name : {"free", "short_range_power", "coulomb_like", "log_borderline", "well"}) {
    const PotentialModel pot = named(name);
    for (EscortTarget t : {EscortTarget::Bounded, EscortTarget::Divergent}) {
      const EscortResult e = construct_escort_h(pot.w0, pot.w0_tail, 0.9, t, 1024.0);
      const HReport v = validate_h(e.h, pot.w0, 0.9, 1024.0);
      L.require(v.verdict == Verdict::Pass, std::string(name) + " validate_h: " + v.reason);
    }
  }
  const PotentialModel lb = named("log_borderline");
  const EscortResult d = construct_escort_h(lb.w0, lb.w0_tail, 0.9, EscortTarget::Divergent, 1024.0);
  L.detail << "all escorts valid; log_borderline h(1024)/h(1) = " << d.growth;
  L.require(d.growth >= 10.0, "log_borderline divergence");
}

void criterion9(Line& L) {
  const RadialGrid g = build_grid_spacing(1, 256.0, 0.05);
  const auto states = gaussian_set(g, 100, 11);
  for (const char* name : {"free", "coulomb_like", "log_borderline"}) {
    const bool gating = std::string(name) != "log_borderline";
    CommutatorOptions k1;
    k1.gating = gating;
    const CommutatorReport a = commutator_diagnostic(named(name), g, named_f_family("lap_fk", {{"k", 1.0}}), states, k1);
    CommutatorOptions rb;
    rb.lemma = Lemma::RadBound;
    rb.beta = 1.0;
    rb.eps = 0.01;
    rb.gating = gating;
    const CommutatorReport b = commutator_diagnostic(named(name), g, power_weight(WeightClass::F, 1.0, 1.0), states, rb);
    L.detail << name << (gating ? "" : " (informational)") << " key1 c_min " << a.c_min << " rad_bound c_min "
             << b.c_min << "; ";
    if (gating) {
      L.require(a.excluded == 0 && b.excluded == 0, std::string(name) + " excluded states");
      L.require(a.verdict == Verdict::Pass && a.c_min > 0.0, std::string(name) + " key1");
      L.require(b.verdict == Verdict::Pass && b.c_min > 0.0, std::string(name) + " rad_bound");
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Line&)>>> criteria{
      {"1 operator identities", criterion1},  {"2 free-resolvent oracle", criterion2},
      {"3 LAP plateau", criterion3},          {"4 radiation plateau", criterion4},
      {"5 Hoelder modulus", criterion5},      {"6 Sommerfeld uniqueness", criterion6},
      {"7 Rellich dichotomy", criterion7},    {"8 weight machinery", criterion8},
      {"9 commutator diagnostics", criterion9},
  };
  int failed = 0;
  for (const auto& [label, run] : criteria) {
    Line L;
    try {
      run(L);
    } catch (const std::exception& e) {
      L.ok = false;
      L.detail << " [exception: " << e.what() << "]";
    }
    failed += L.ok ? 0 : 1;
    std::printf("%s %s: %s\n", L.ok ? "PASS" : "FAIL", label.c_str(), L.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
