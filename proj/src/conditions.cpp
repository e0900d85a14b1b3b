#include "lapnum/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lapnum {

namespace {

int full_windows(const Vec& r) {
  if (r.size() == 0) return 0;
  return static_cast<int>(std::floor(std::log2(r[r.size() - 1]) + 1e-12));
}

int window_of(double r) { return static_cast<int>(std::floor(std::log2(r))) + 1; }

double lsq_slope(const std::vector<double>& y, int first) {
  // slope of log2(y_j) vs j for j >= first (1-based indices)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int j = first; j <= static_cast<int>(y.size()); ++j) {
    const double v = std::log2(std::max(y[static_cast<std::size_t>(j - 1)], 1e-300));
    sx += j; sy += v; sxx += double(j) * j; sxy += j * v; ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

TrendEvidence decide_decay(std::vector<double> windows, double slope_tol) {
  TrendEvidence t;
  t.windows = std::move(windows);
  const int J = static_cast<int>(t.windows.size());
  const int first = outer_half_start(J);
  if (J - first + 1 < 2) {
    t.verdict = Verdict::Withheld;
    return t;
  }
  bool all_zero = true;
  for (int j = first; j <= J; ++j) all_zero = all_zero && t.windows[static_cast<std::size_t>(j - 1)] == 0.0;
  if (all_zero) return t;
  for (int j = first; j < J; ++j)
    t.monotone = t.monotone && t.windows[static_cast<std::size_t>(j)] <= t.windows[static_cast<std::size_t>(j - 1)] * (1 + 1e-9);
  t.slope = lsq_slope(t.windows, first);
  t.verdict = pass_if(t.monotone && t.slope <= -slope_tol);
  return t;
}

std::vector<double> window_max(const Vec& r, const Vec& f, bool times_r) {
  const int J = full_windows(r);
  std::vector<double> w(static_cast<std::size_t>(std::max(J, 0)), 0.0);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const int j = window_of(r[i]);
    if (j < 1 || j > J) continue;
    const double v = std::abs(f[i]) * (times_r ? r[i] : 1.0);
    w[static_cast<std::size_t>(j - 1)] = std::max(w[static_cast<std::size_t>(j - 1)], v);
  }
  return w;
}

std::vector<double> window_integrals(const Vec& r, const Vec& f) {
  const int J = full_windows(r);
  std::vector<double> w(static_cast<std::size_t>(std::max(J, 0)), 0.0);
  for (Eigen::Index i = 0; i + 1 < r.size(); ++i) {
    const double mid = 0.5 * (r[i] + r[i + 1]);
    const int j = window_of(mid);
    if (j < 1 || j > J) continue;
    w[static_cast<std::size_t>(j - 1)] += 0.5 * (f[i] + f[i + 1]) * (r[i + 1] - r[i]);
  }
  return w;
}

}  // namespace

TrendEvidence inverse_r_decay_trend(const Vec& r, const Vec& f, double slope_tol) {
  return decide_decay(window_max(r, f, true), slope_tol);
}

TrendEvidence vanishing_trend(const Vec& r, const Vec& f, double slope_tol) {
  return decide_decay(window_max(r, f, false), slope_tol);
}

TrendEvidence integrability_trend(const Vec& r, const Vec& f, double shrink_tol) {
  TrendEvidence t;
  t.windows = window_integrals(r, f);
  const int J = static_cast<int>(t.windows.size());
  const int first = outer_half_start(J);
  if (J - first + 1 < 2) {
    t.verdict = Verdict::Withheld;
    return t;
  }
  bool ok = true;
  for (int j = first; j < J; ++j) {
    const double prev = t.windows[static_cast<std::size_t>(j - 1)];
    const double next = t.windows[static_cast<std::size_t>(j)];
    if (prev == 0.0 && next == 0.0) continue;
    ok = ok && next <= prev * (1.0 - shrink_tol);
  }
  t.monotone = ok;
  t.slope = lsq_slope(t.windows, first);
  t.verdict = pass_if(ok);
  return t;
}

std::vector<Eigen::Index> radial_half(const RadialGrid& g) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (g.dim > 1 || g.coord[j] >= 0.0) idx.push_back(j);
  return idx;
}

EnvelopeReport validate_conditions(const PotentialModel& p, const RadialGrid& g, double tol) {
  EnvelopeReport rep;
  rep.potential = p.name;
  const auto half = radial_half(g);
  const auto m = static_cast<Eigen::Index>(half.size());
  Vec r(m), w0(m), vlr(m);
  double sup_sr = -std::numeric_limits<double>::infinity();
  double sup_lr = sup_sr, sup_grad = sup_sr;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = half[static_cast<std::size_t>(i)];
    const double rr = g.r[j];
    const double vs = p.v_sr(rr), vl = p.v_lr(rr), dv = p.grad_v_lr(rr), w = p.w0(rr);
    if (!std::isfinite(vs) || !std::isfinite(vl) || !std::isfinite(dv) || !std::isfinite(w)) {
      std::ostringstream os;
      os << "validate_conditions: potential '" << p.name << "' is not finite at r = " << rr;
      throw Error(os.str());
    }
    if (w < 0.0) {
      std::ostringstream os;
      os << "validate_conditions: envelope W0 is negative at r = " << rr;
      throw Error(os.str());
    }
    const double om = std::abs(g.omega[j]);
    r[i] = rr;
    w0[i] = w;
    vlr[i] = vl;
    sup_sr = std::max(sup_sr, std::abs(vs) - w);
    sup_lr = std::max(sup_lr, om * om * dv - w);  // omega . grad V_lr = |omega|^2 dV/dr
    sup_grad = std::max(sup_grad, om * std::abs(dv) - w);
  }
  rep.sup_violation_sr = sup_sr;
  rep.sup_violation_lr_derivative = sup_lr;
  rep.sup_violation_grad = sup_grad;
  rep.tail_decay = inverse_r_decay_trend(r, w0);
  rep.integral = integrability_trend(r, w0);
  rep.v_lr_vanishing = vanishing_trend(r, vlr);
  double acc = 0.0;
  for (double inc : rep.integral.windows) {
    acc += inc;
    rep.integral_estimate.push_back(acc);
  }

  rep.clauses["short_range_envelope"] = pass_if(sup_sr <= tol);
  rep.clauses["long_range_radial_derivative"] = pass_if(sup_lr <= tol);
  rep.clauses["long_range_gradient"] = pass_if(sup_grad <= tol);
  rep.clauses["w0_o_inverse_r"] = rep.tail_decay.verdict;
  rep.clauses["w0_integrable"] = rep.integral.verdict;
  rep.clauses["v_lr_vanishes"] = rep.v_lr_vanishing.verdict;

  auto all_pass = [&](std::initializer_list<const char*> keys) {
    bool withheld = false;
    for (const char* k : keys) {
      const Verdict v = rep.clauses[k];
      if (v == Verdict::Fail) return Verdict::Fail;
      withheld = withheld || v == Verdict::Withheld;
    }
    return withheld ? Verdict::Withheld : Verdict::Pass;
  };
  rep.condition1 = all_pass({"short_range_envelope", "long_range_radial_derivative", "w0_o_inverse_r",
                             "w0_integrable", "v_lr_vanishes"});
  rep.condition2 = rep.condition1 == Verdict::Pass ? rep.clauses["long_range_gradient"] : rep.condition1;
  rep.disclaimer =
      "Verdicts are evidence on a truncated grid: decay and integrability clauses are decided from "
      "monotone trends over the outer half of the dyadic windows, not proved.";
  return rep;
}

}  // namespace lapnum
