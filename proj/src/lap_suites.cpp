#include "lapnum/suites.hpp"

#include "lapnum/norms.hpp"
#include "lapnum/operators.hpp"
#include "lapnum/parallel.hpp"
#include "lapnum/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace lapnum {

PowerResult operator_norm(const LinearMap& T, const LinearMap& T_adj, Eigen::Index n, std::uint64_t seed,
                          int max_iter, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CVec x(n);
  for (Eigen::Index j = 0; j < n; ++j) x[j] = Complex(gauss(rng), gauss(rng));
  x /= x.norm();
  PowerResult out;
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const CVec y = T(x);
    const double est = y.norm();
    out.iterations = it;
    out.norm = std::max(out.norm, est);
    if (est == 0.0) {
      out.converged = true;
      return out;
    }
    // est is non-decreasing in exact arithmetic; stop once it settles
    if (it > 1 && std::abs(est - prev) <= tol * est) {
      out.converged = true;
      return out;
    }
    prev = est;
    CVec z = T_adj(y);
    const double zn = z.norm();
    if (zn == 0.0) {
      out.converged = true;
      return out;
    }
    x = z / zn;
  }
  return out;
}

WeightValidation validate_w(const WeightFn& w, double r_end) {
  const Vec r = log_axis(r_end);
  Vec v(r.size());
  WeightValidation out;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    v[i] = w.value(r[i]);
    out.nonnegative = out.nonnegative && v[i] >= 0.0 && std::isfinite(v[i]);
  }
  out.decay = inverse_r_decay_trend(r, v);
  out.integrable = integrability_trend(r, v);
  if (!out.nonnegative || out.decay.verdict == Verdict::Fail || out.integrable.verdict == Verdict::Fail)
    out.verdict = Verdict::Fail;
  else if (out.decay.verdict == Verdict::Withheld || out.integrable.verdict == Verdict::Withheld)
    out.verdict = Verdict::Withheld;
  return out;
}

namespace {

// Decade d collects eps in (10^-(d+1) eps_max, 10^-d eps_max]; the plateau compares the
// family sup per decade, the contrast compares the family sup of the control at both ends.
template <typename Ratio, typename Control>
PlateauStats plateau_stats(const std::vector<SweepRecord>& sweeps, Ratio ratio, Control control) {
  PlateauStats st;
  if (sweeps.empty()) return st;
  const std::size_t m = sweeps.front().rows.size();
  st.max_ratio.assign(m, 0.0);
  std::vector<double> max_control(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) st.eps.push_back(sweeps.front().rows[i].eps);
  for (const SweepRecord& s : sweeps) {
    for (std::size_t i = 0; i < m; ++i) {
      st.max_ratio[i] = std::max(st.max_ratio[i], ratio(s.rows[i]));
      max_control[i] = std::max(max_control[i], control(s.rows[i]));
    }
    const double first = control(s.rows.front()), last = control(s.rows.back());
    st.contrast.push_back(first > 0.0 ? last / first : 0.0);
  }
  const double top = st.eps.front();
  std::map<int, double> decade;
  for (std::size_t i = 0; i < m; ++i) {
    const int d = static_cast<int>(std::floor(std::log10(top / st.eps[i]) + 1e-9));
    decade[d] = std::max(decade[d], st.max_ratio[i]);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [d, v] : decade) {
    st.decade_max.push_back(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  st.variation = lo > 0.0 ? hi / lo : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  st.control_max = max_control;
  st.contrast_growth = max_control.front() > 0.0 ? max_control.back() / max_control.front() : 0.0;
  return st;
}

struct SweepJob {
  double lambda;
  int sign;
  std::size_t psi;
};

std::vector<SweepJob> sweep_jobs(const std::vector<double>& lambdas, const std::vector<int>& signs,
                                 std::size_t psis) {
  std::vector<SweepJob> jobs;
  for (double l : lambdas)
    for (int s : signs)
      for (std::size_t p = 0; p < psis; ++p) jobs.push_back({l, s, p});
  return jobs;
}

// Worst relative breach of 2^-k |F_k G u|^2 <= <G* F_k hess G>_u + 2^-k |F_k omega G u|^2 over full shells.
double p_extension_breach(const RadialGrid& g, const CVec& u, const std::vector<int>& shells, int k_max) {
  const CVec gu = assemble_radial_gradient(g) * u;
  std::vector<double> lhs(k_max + 1, 0.0), rhs(k_max + 1, 0.0);
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const int k = shells[static_cast<std::size_t>(j)];
    if (k > k_max) continue;
    const double w = std::ldexp(1.0, -k), n2 = std::norm(gu[j]);
    lhs[k] += w * n2;
    rhs[k] += g.hess_r[j] * n2 + w * g.omega[j] * g.omega[j] * n2;
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k)
    if (rhs[k] > 0.0) worst = std::max(worst, (lhs[k] - rhs[k]) / rhs[k]);
  return worst;
}

void mask_boundary(const RadialGrid& g, CVec& v) {
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (!g.interior(j)) v[j] = 0.0;
}

std::string plateau_reason(const PlateauStats& st, const PlateauOptions& opt, const std::string& control) {
  std::ostringstream os;
  os << "max-ratio variation " << st.variation << " (limit " << opt.plateau_factor << "), family-max " << control
     << " growth " << st.contrast_growth << " (needs > " << opt.contrast_factor << ")";
  return os.str();
}

}  // namespace

LapSuiteReport lap_suite(const PotentialModel& pot, const RadialGrid& g, const std::vector<double>& lambdas,
                         const std::vector<CVec>& psis, const std::vector<double>& eps_list,
                         const PlateauOptions& opt) {
  if (lambdas.empty() || psis.empty()) throw Error("lap_suite: empty lambda or psi set");
  const std::vector<SweepJob> jobs = sweep_jobs(lambdas, opt.signs, psis.size());
  LapSuiteReport rep;
  rep.sweeps.resize(jobs.size());
  const std::vector<int> shells = shell_index(g);
  const int k_max = full_shell_count(g);
  std::vector<double> breach(jobs.size(), -std::numeric_limits<double>::infinity());
  SweepOptions so = opt.sweep;
  so.keep_states = true;
  so.workers = 1;
  parallel_for(jobs.size(), opt.sweep.workers, [&](std::size_t i) {
    SweepRecord rec = eps_sweep(pot, g, jobs[i].lambda, jobs[i].sign, psis[jobs[i].psi], eps_list, so);
    for (const CVec& u : rec.states) breach[i] = std::max(breach[i], p_extension_breach(g, u, shells, k_max));
    rec.states.clear();
    rep.sweeps[i] = std::move(rec);
  });
  rep.p_extension_worst = *std::max_element(breach.begin(), breach.end());
  rep.p_extension_checked = static_cast<int>(jobs.size() * eps_list.size()) * k_max;
  rep.stats = plateau_stats(
      rep.sweeps, [](const SweepRow& r) { return r.ratio; },
      [](const SweepRow& r) { return r.besov_psi > 0.0 ? r.l2_u * r.l2_u / (r.besov_psi * r.besov_psi) : 0.0; });
  for (const SweepRecord& s : rep.sweeps) rep.truncation_limited = rep.truncation_limited || s.truncation_limited;

  const bool p_ok = rep.p_extension_worst <= 1e-10;
  if (rep.truncation_limited) {
    rep.verdict = Verdict::Withheld;
    rep.reason = "truncation-limited: smallest-eps solution changes when the domain is doubled";
    return rep;
  }
  rep.verdict = pass_if(rep.stats.variation < opt.plateau_factor && rep.stats.contrast_growth > opt.contrast_factor && p_ok);
  rep.reason = plateau_reason(rep.stats, opt, "L2 contrast");
  if (!p_ok) rep.reason += "; p-extension inequality breached";
  return rep;
}

RadiationSuiteReport radiation_suite(const PotentialModel& pot, const RadialGrid& g,
                                     const std::vector<double>& lambdas, const std::vector<CVec>& psis,
                                     const std::vector<double>& eps_list, const WeightFn& h, double beta0,
                                     const PlateauOptions& opt) {
  if (lambdas.empty() || psis.empty()) throw Error("radiation_suite: empty lambda or psi set");
  RadiationSuiteReport rep;
  rep.condition2 = validate_conditions(pot, g).condition2;
  if (rep.condition2 != Verdict::Pass)
    throw Refusal("radiation_suite: potential '" + pot.name + "' does not pass Condition 2 on this grid");
  const double r_end = g.r.maxCoeff();
  const HReport hr = validate_h(h, pot.w0, beta0, r_end);
  rep.h_valid = hr.verdict;
  if (hr.verdict != Verdict::Pass) throw Refusal("radiation_suite: escort weight rejected: " + hr.reason);
  rep.h_kind = h.kind;
  rep.h_growth = h.value(r_end) / h.value(1.0);
  rep.item_c = "not applicable: h carries no lower bound h' >= alpha h / r";

  const std::vector<SweepJob> jobs = sweep_jobs(lambdas, opt.signs, psis.size());
  rep.sweeps.resize(jobs.size());
  const DiscreteOperator A = assemble_A(g);
  const Vec hv = h.value_on(g);
  // Only r <= X/2 is certified by the truncation audit; the reflected wave beyond is amplified by h.
  const double r_cut = 0.5 * g.extent;
  Vec window_h2 = hv.cwiseProduct(hv);
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (std::abs(g.coord[j]) > r_cut) window_h2[j] = 0.0;
  SweepOptions so = opt.sweep;
  so.keep_states = true;
  so.workers = 1;
  parallel_for(jobs.size(), opt.sweep.workers, [&](std::size_t i) {
    const SweepJob& job = jobs[i];
    SweepRecord rec = eps_sweep(pot, g, job.lambda, job.sign, psis[job.psi], eps_list, so);
    const double hb = dyadic_profile(g, hv.cast<Complex>().cwiseProduct(psis[job.psi])).besov;
    for (std::size_t e = 0; e < rec.rows.size(); ++e) {
      const CVec& u = rec.states[e];
      const Phase ph = build_phase(pot, g, Complex(job.lambda, job.sign * rec.rows[e].eps), job.sign);
      const CVec au = A * u;
      const CVec au_a = ph.a_grid.cwiseProduct(u);
      CVec minus = hv.cast<Complex>().cwiseProduct(au - au_a);
      CVec plus = hv.cast<Complex>().cwiseProduct(au + au_a);
      mask_boundary(g, minus);
      mask_boundary(g, plus);
      const double hess = hessian_form(g, window_h2, u);
      const double bm = besov_star_within(g, minus, r_cut), bp = besov_star_within(g, plus, r_cut);
      SweepRow& row = rec.rows[e];
      row.extra["h_besov_psi"] = hb;
      row.extra["radiation"] = hb > 0.0 ? (bm * bm + hess) / (hb * hb) : 0.0;
      row.extra["control"] = hb > 0.0 ? (bp * bp + hess) / (hb * hb) : 0.0;
    }
    rec.states.clear();
    rep.sweeps[i] = std::move(rec);
  });
  rep.stats = plateau_stats(
      rep.sweeps, [](const SweepRow& r) { return r.extra.at("radiation"); },
      [](const SweepRow& r) { return r.extra.at("control"); });
  for (const SweepRecord& s : rep.sweeps) rep.truncation_limited = rep.truncation_limited || s.truncation_limited;
  if (rep.truncation_limited) {
    rep.verdict = Verdict::Withheld;
    rep.reason = "truncation-limited: smallest-eps solution changes when the domain is doubled";
    return rep;
  }
  rep.verdict = pass_if(rep.stats.variation < opt.plateau_factor && rep.stats.contrast_growth > opt.contrast_factor);
  rep.reason = plateau_reason(rep.stats, opt, "(A + a) control");
  return rep;
}

SmoothingReport smoothing_suite(const PotentialModel& pot, const RadialGrid& g, const std::vector<double>& lambdas,
                                const WeightFn& w1, const WeightFn& w2, const std::vector<double>& eps_list,
                                const SmoothingOptions& opt) {
  if (lambdas.empty() || eps_list.empty()) throw Error("smoothing_suite: empty lambda or eps list");
  SmoothingReport rep;
  const double r_end = g.r.maxCoeff();
  rep.w1_valid = validate_w(w1, r_end).verdict;
  rep.w2_valid = validate_w(w2, r_end).verdict;

  const DiscreteOperator H = assemble_H(g, pot);
  const ComplexBand G = assemble_radial_gradient(g).matrix;
  const ComplexBand Gadj = G.adjoint();
  const CVec s1 = w1.value_on(g).cwiseMax(0.0).cwiseSqrt().cast<Complex>();
  const CVec s2 = w2.value_on(g).cwiseMax(0.0).cwiseSqrt().cast<Complex>();
  const CVec sh = g.hess_r.cwiseSqrt().cast<Complex>();
  const std::vector<int> shells = shell_index(g);
  const int k_max = full_shell_count(g);
  std::vector<CVec> masks(static_cast<std::size_t>(k_max) + 1, CVec::Zero(g.size()));
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const int k = shells[static_cast<std::size_t>(j)];
    if (k <= k_max) masks[static_cast<std::size_t>(k)][j] = 1.0;
  }

  for (double l : lambdas)
    for (int s : {1, -1})
      for (double e : eps_list) rep.rows.push_back({l, s, e, {}, {}});

  parallel_for(rep.rows.size(), opt.workers, [&](std::size_t i) {
    SmoothingRow& row = rep.rows[i];
    const BandSolver S(shifted(H, SpectralParam{row.lambda, row.eps, row.sign}.z()), Boundary::Dirichlet);
    const LinearMap R = [&](const CVec& x) { return CVec(S.solve(x).u); };
    const LinearMap Ra = [&](const CVec& x) { return S.solve_adjoint(x); };
    auto norm = [&](const std::string& item, const LinearMap& T, const LinearMap& Ta) {
      const PowerResult p = operator_norm(T, Ta, g.size(), opt.seed, opt.max_iter, opt.tol);
      if (!p.converged) row.nonconverged.push_back(item);
      return p.norm;
    };
    const double a = norm(
        "a", [&](const CVec& x) { return CVec(sh.cwiseProduct(G * R(s2.cwiseProduct(x)))); },
        [&](const CVec& y) { return CVec(s2.cwiseProduct(Ra(Gadj * sh.cwiseProduct(y)))); });
    row.norms["a"] = a * a;
    double bR = 0.0, bpR = 0.0, cR = 0.0, cpR = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      const CVec& F = masks[static_cast<std::size_t>(k)];
      const double w = std::sqrt(std::ldexp(1.0, -k));
      const std::string tag = "_k" + std::to_string(k);
      bR = std::max(bR, w * norm(
                                "b_R" + tag, [&](const CVec& x) { return CVec(s1.cwiseProduct(R(F.cwiseProduct(x)))); },
                                [&](const CVec& y) { return CVec(F.cwiseProduct(Ra(s1.cwiseProduct(y)))); }));
      bpR = std::max(bpR, w * norm(
                                  "b_pR" + tag,
                                  [&](const CVec& x) { return CVec(s1.cwiseProduct(G * R(F.cwiseProduct(x)))); },
                                  [&](const CVec& y) { return CVec(F.cwiseProduct(Ra(Gadj * s1.cwiseProduct(y)))); }));
      cR = std::max(cR, w * norm(
                                "c_R" + tag, [&](const CVec& x) { return CVec(F.cwiseProduct(R(s1.cwiseProduct(x)))); },
                                [&](const CVec& y) { return CVec(s1.cwiseProduct(Ra(F.cwiseProduct(y)))); }));
      cpR = std::max(cpR, w * norm(
                                  "c_pR" + tag,
                                  [&](const CVec& x) { return CVec(F.cwiseProduct(G * R(s1.cwiseProduct(x)))); },
                                  [&](const CVec& y) { return CVec(s1.cwiseProduct(Ra(Gadj * F.cwiseProduct(y)))); }));
    }
    row.norms["b_R"] = bR;
    row.norms["b_pR"] = bpR;
    row.norms["c_R"] = cR;
    row.norms["c_pR"] = cpR;
    row.norms["d_R"] = norm(
        "d_R", [&](const CVec& x) { return CVec(s1.cwiseProduct(R(s2.cwiseProduct(x)))); },
        [&](const CVec& y) { return CVec(s2.cwiseProduct(Ra(s1.cwiseProduct(y)))); });
    row.norms["d_pR"] = norm(
        "d_pR", [&](const CVec& x) { return CVec(s1.cwiseProduct(G * R(s2.cwiseProduct(x)))); },
        [&](const CVec& y) { return CVec(s2.cwiseProduct(Ra(Gadj * s1.cwiseProduct(y)))); });
  });

  bool ok = rep.w1_valid == Verdict::Pass && rep.w2_valid == Verdict::Pass;
  std::vector<std::string> nonconv;
  for (const auto& [item, unused] : rep.rows.front().norms) {
    (void)unused;
    std::vector<double> per_eps(eps_list.size(), 0.0);
    for (const SmoothingRow& row : rep.rows) {
      const auto pos = std::find(eps_list.begin(), eps_list.end(), row.eps) - eps_list.begin();
      per_eps[static_cast<std::size_t>(pos)] = std::max(per_eps[static_cast<std::size_t>(pos)], row.norms.at(item));
    }
    const auto [lo, hi] = std::minmax_element(per_eps.begin(), per_eps.end());
    const double v = *lo > 0.0 ? *hi / *lo : (*hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    rep.variation[item] = v;
    ok = ok && v < opt.plateau_factor;
  }
  for (const SmoothingRow& row : rep.rows) nonconv.insert(nonconv.end(), row.nonconverged.begin(), row.nonconverged.end());
  rep.verdict = pass_if(ok);
  std::ostringstream os;
  os << "items uniform within factor " << opt.plateau_factor << ": " << (ok ? "yes" : "no");
  if (rep.w1_valid != Verdict::Pass || rep.w2_valid != Verdict::Pass) os << "; a weight failed W-class validation";
  if (!nonconv.empty()) os << "; power iteration did not settle for " << nonconv.size() << " item evaluations";
  rep.reason = os.str();
  return rep;
}

}  // namespace lapnum
