#include "lapnum/suites.hpp"

#include "lapnum/operators.hpp"
#include "lapnum/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lapnum {

Lemma lemma_from_string(const std::string& name) {
  if (name == "key1") return Lemma::Key1;
  if (name == "key2") return Lemma::Key2;
  if (name == "rad_bound") return Lemma::RadBound;
  throw Error("commutator_diagnostic: unknown lemma '" + name + "' (key1, key2, rad_bound)");
}

const char* to_string(Lemma l) {
  switch (l) {
    case Lemma::Key1: return "key1";
    case Lemma::Key2: return "key2";
    case Lemma::RadBound: return "rad_bound";
  }
  return "?";
}

namespace {

double sum_weighted(const RadialGrid& g, const Vec& w, const CVec& v) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) acc += w[j] * std::norm(v[j]);
  return g.spacing * acc;
}

}  // namespace

CommutatorReport commutator_diagnostic(const PotentialModel& pot, const RadialGrid& g, const WeightFn& f,
                                       const std::vector<CVec>& states, const CommutatorOptions& opt) {
  if (!(opt.lambda > 0.0)) throw Error("commutator_diagnostic: lambda must be positive");
  const double r_end = g.r.maxCoeff();
  const bool rad = opt.lemma == Lemma::RadBound;
  if (rad && !(opt.beta >= 0.0 && opt.beta <= 2.0)) throw Error("commutator_diagnostic: beta must lie in [0, 2]");
  const FamilyCheck fc = check_f_family(f, r_end);
  if (fc.max_negative > 1e-9) throw Error("commutator_diagnostic: f must be non-negative and non-decreasing");
  if (rad && fc.max_growth_ratio > opt.beta * (1.0 + 1e-6) + 1e-12)
    throw Error("commutator_diagnostic: f violates f' <= beta f / r");

  CommutatorReport rep;
  const Complex z = opt.lemma == Lemma::Key1 ? Complex(opt.lambda, 0.0) : Complex(opt.lambda, opt.sign * opt.eps);
  const Vec fv = f.value_on(g), fp = f.deriv_on(g);
  const Vec w0 = sample(g, pot.w0);
  const RadialFn wfn = [&](double r) { return pot.w0(r) + std::pow(1.0 + r, -1.5); };
  const Vec W = sample(g, wfn);
  const Vec r = g.r;
  const Vec r2 = r.cwiseInverse().cwiseAbs2(), r3 = r2.cwiseProduct(r.cwiseInverse());
  const DiscreteOperator H = assemble_H(g, pot);
  const DiscreteOperator A = assemble_A(g);
  const DiscreteOperator G = assemble_radial_gradient(g);
  Vec ft = fv;
  if (!rad) ft = exponential_weight(f, opt.K, wfn, r_end).value_on(g);
  CVec a;
  if (rad) a = build_phase(pot, g, z, opt.sign).a_grid;
  const double f_sup = fv.cwiseAbs().maxCoeff();

  rep.states.resize(states.size());
  double c_min = std::numeric_limits<double>::infinity(), c_common = 0.0;
  int included = 0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const CVec& phi = states[s];
    CommutatorState& st = rep.states[s];
    if (phi.size() != g.size() || !interior_supported(g, phi)) {
      st.excluded = true;
      ++rep.excluded;
      continue;
    }
    const CVec hz = H * phi - z * phi;
    const CVec aphi = A * phi;
    const CVec gphi = G * phi;
    if (rad) {
      const CVec am = aphi - a.cwiseProduct(phi);
      st.lhs = 2.0 * (g.spacing * am.dot(fv.cast<Complex>().cwiseProduct(hz))).imag();
      st.positive = sum_weighted(g, fp, am);
      st.fixed = (2.0 - opt.beta) * hessian_form(g, fv, phi);
      const Vec fw = fv.cwiseProduct(w0), fr = fv.cwiseProduct(r3);
      st.error = sum_weighted(g, fw, phi) + sum_weighted(g, fw, gphi) + sum_weighted(g, fr, phi) +
                 sum_weighted(g, fr, gphi);
    } else {
      st.lhs = quadratic_form(FormKind::Commutator, g, ft, phi, &H, z).real();
      const Vec fw = fv.cwiseProduct(W);
      st.positive = sum_weighted(g, fp, phi) + sum_weighted(g, fw, phi) + sum_weighted(g, fp, aphi) +
                    sum_weighted(g, fw, aphi) + hessian_form(g, fv, phi);
      // most favourable gamma: |gamma| <= C r^-1 f real (key1) or |gamma| <= C sup f complex (key2)
      double gamma_term = 0.0;
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const Complex d = std::conj(phi[j]) * hz[j];
        gamma_term += opt.lemma == Lemma::Key1 ? fv[j] / r[j] * std::abs(d.real()) : f_sup * std::abs(d);
      }
      st.error = sum_weighted(g, fv.cwiseProduct(r2), phi) + g.spacing * gamma_term;
    }
    const double slack = st.lhs - st.fixed;
    st.c_needed = slack >= 0.0 ? 0.0
                  : st.error > 0.0 ? -slack / st.error
                                   : std::numeric_limits<double>::infinity();
    c_common = std::max(c_common, st.c_needed);
    if (st.positive > 0.0) {
      st.c = (slack + opt.c_cap * st.error) / st.positive;
      c_min = std::min(c_min, st.c);
      ++included;
    } else {
      st.trivial = true;
    }
  }
  rep.c_min = included > 0 ? c_min : 0.0;
  rep.c_common = c_common;
  const bool all_trivial = included == 0 && rep.excluded < static_cast<int>(states.size());
  rep.note = "exploratory: feasibility on sampled states is evidence, not proof";
  if (all_trivial) rep.note += "; every state is trivially feasible (the c-weighted side vanishes)";
  if (rep.excluded > 0) rep.note += "; states touching the boundary layer were excluded";
  if (!rad) rep.note += "; gamma is the most favourable admissible multiplier per state";
  const bool ok = all_trivial ? c_common == 0.0 : (included > 0 && rep.c_min > 0.0);
  rep.verdict = opt.gating ? pass_if(ok) : Verdict::Informational;
  return rep;
}

}  // namespace lapnum
