#include "lapnum/weights.hpp"

#include "lapnum/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lapnum {

namespace {

double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// Cumulative integral of f over the log axis, trapezoid in log r on f * r.
Vec cumulative(const Vec& axis, const Vec& f) {
  Vec out = Vec::Zero(axis.size());
  for (Eigen::Index i = 1; i < axis.size(); ++i) {
    const double dl = std::log(axis[i]) - std::log(axis[i - 1]);
    out[i] = out[i - 1] + 0.5 * (f[i] * axis[i] + f[i - 1] * axis[i - 1]) * dl;
  }
  return out;
}

}  // namespace

const char* to_string(WeightClass c) {
  switch (c) {
    case WeightClass::W: return "W_CLASS";
    case WeightClass::H: return "H_CLASS";
    case WeightClass::F: return "F_FAMILY";
  }
  return "?";
}

double WeightFn::value(double r) const {
  if (value_fn) return value_fn(r);
  if (axis.size() == 0) throw Error("WeightFn: no samples");
  if (r <= axis[0]) return values[0];
  const Eigen::Index n = axis.size();
  if (r >= axis[n - 1]) return values[n - 1];
  const auto it = std::upper_bound(axis.data(), axis.data() + n, r);
  const Eigen::Index i = (it - axis.data()) - 1;
  const double t = (std::log(r) - std::log(axis[i])) / (std::log(axis[i + 1]) - std::log(axis[i]));
  if (values[i] > 0.0 && values[i + 1] > 0.0)
    return std::exp((1 - t) * std::log(values[i]) + t * std::log(values[i + 1]));
  return (1 - t) * values[i] + t * values[i + 1];
}

double WeightFn::deriv(double r) const {
  if (deriv_fn) return deriv_fn(r);
  if (axis.size() == 0) throw Error("WeightFn: no samples");
  const Eigen::Index n = axis.size();
  if (r <= axis[0]) return derivs[0];
  if (r >= axis[n - 1]) return 0.0;
  const auto it = std::upper_bound(axis.data(), axis.data() + n, r);
  const Eigen::Index i = (it - axis.data()) - 1;
  const double t = (r - axis[i]) / (axis[i + 1] - axis[i]);
  return (1 - t) * derivs[i] + t * derivs[i + 1];
}

Vec WeightFn::value_on(const RadialGrid& g) const {
  Vec v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) v[j] = value(g.r[j]);
  return v;
}

Vec WeightFn::deriv_on(const RadialGrid& g) const {
  Vec v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) v[j] = deriv(g.r[j]);
  return v;
}

WeightFn analytic_weight(WeightClass tag, std::string kind, RadialFn value, RadialFn deriv, Params params) {
  WeightFn w;
  w.tag = tag;
  w.kind = std::move(kind);
  w.value_fn = std::move(value);
  w.deriv_fn = std::move(deriv);
  w.params = std::move(params);
  return w;
}

WeightFn power_weight(WeightClass tag, double scale, double power, double shift) {
  return analytic_weight(
      tag, "power", [=](double r) { return scale * std::pow(r + shift, power); },
      [=](double r) { return scale * power * std::pow(r + shift, power - 1.0); },
      {{"scale", scale}, {"power", power}, {"shift", shift}});
}

Vec log_axis(double r_end, int per_octave) {
  if (!(r_end > 1.0)) throw Error("log_axis: end radius must exceed 1");
  const double octaves = std::log2(r_end);
  const auto n = static_cast<Eigen::Index>(std::ceil(octaves * per_octave)) + 1;
  Vec a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = std::exp2(octaves * static_cast<double>(i) / static_cast<double>(n - 1));
  a[n - 1] = r_end;
  return a;
}

HReport validate_h(const WeightFn& h, const RadialFn& w0, double beta0, double r_end, std::uint64_t seed) {
  HReport rep;
  rep.beta0 = beta0;
  const Vec axis = log_axis(r_end);
  const Eigen::Index n = axis.size();
  Vec hv(n), dv(n), hw(n);
  rep.min_h = std::numeric_limits<double>::infinity();
  rep.max_negative_derivative = -std::numeric_limits<double>::infinity();
  rep.max_growth_excess = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = axis[i];
    hv[i] = h.value(r);
    dv[i] = h.deriv(r);
    if (!(hv[i] > 0.0)) throw Error("validate_h: h is not positive at r = " + std::to_string(r));
    rep.min_h = std::min(rep.min_h, hv[i]);
    rep.max_negative_derivative = std::max(rep.max_negative_derivative, -dv[i] / hv[i]);
    rep.max_growth_excess = std::max(rep.max_growth_excess, dv[i] / hv[i] - beta0 / r);
    hw[i] = hv[i] * hv[i] * w0(r);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, std::log(r_end));
  rep.gronwall_pairs = 1000;
  for (int k = 0; k < rep.gronwall_pairs; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double s = std::exp(a), t = std::exp(b);
    const double ratio = h.value(s) / h.value(t);
    const double lower = std::pow(s / t, beta0), upper = std::pow(t / s, beta0);
    rep.gronwall_worst = std::max({rep.gronwall_worst, lower / ratio - 1.0, ratio / upper - 1.0});
  }
  rep.decay = inverse_r_decay_trend(axis, hw);
  rep.integrable = integrability_trend(axis, hw);

  const double tol = 1e-9;
  if (!(beta0 < 1.0)) {
    rep.verdict = Verdict::Fail;
    rep.reason = "beta0 must be below 1";
  } else if (rep.max_negative_derivative > tol) {
    rep.verdict = Verdict::Fail;
    rep.reason = "h is decreasing somewhere";
  } else if (rep.max_growth_excess > tol) {
    rep.verdict = Verdict::Fail;
    rep.reason = "h' exceeds beta0 h / r";
  } else if (rep.gronwall_worst > 1e-6) {
    rep.verdict = Verdict::Fail;
    rep.reason = "Gronwall sandwich violated";
  } else if (rep.decay.verdict == Verdict::Fail || rep.integrable.verdict == Verdict::Fail) {
    rep.verdict = Verdict::Fail;
    rep.reason = rep.decay.verdict == Verdict::Fail ? "h^2 W0 is not o(1/r) on the grid" : "h^2 W0 is not integrable on the grid";
  } else if (rep.decay.verdict == Verdict::Withheld || rep.integrable.verdict == Verdict::Withheld) {
    rep.verdict = Verdict::Withheld;
    rep.reason = "too few dyadic windows";
  }
  return rep;
}

EscortResult construct_escort_h(const RadialFn& w0, const RadialFn& w0_tail, double beta0, EscortTarget target,
                                double r_end, const EscortOptions& opt) {
  if (!(beta0 > 0.0 && beta0 < 1.0)) throw Error("construct_escort_h: beta0 must lie in (0, 1)");
  const Vec axis = log_axis(r_end, opt.per_octave);
  const Eigen::Index n = axis.size();
  Vec w(n);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = w0(axis[i]);
    if (!(w[i] >= 0.0) || !std::isfinite(w[i]))
      throw Error("construct_escort_h: W0 is negative or non-finite at r = " + std::to_string(axis[i]));
    scale = std::max(scale, w[i]);
  }
  double tail = w0_tail(r_end);
  if (!std::isfinite(tail)) throw Error("construct_escort_h: W0 is not integrable (tail hook is infinite)");
  const bool divergent = target == EscortTarget::Divergent;
  if (divergent) {
    const double eps = opt.floor_scale * (scale > 0.0 ? scale : 1.0);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = std::max(w[i], eps / (axis[i] * axis[i]));
    tail += eps / r_end;
  }
  const Vec cum = cumulative(axis, w);
  Vec G(n);
  for (Eigen::Index i = 0; i < n; ++i) G[i] = cum[n - 1] - cum[i] + tail;

  EscortResult out;
  out.h.tag = WeightClass::H;
  out.h.kind = divergent ? "escort_divergent" : "escort_bounded";
  out.h.params = {{"beta0", beta0}, {"kappa", opt.kappa}, {"r_end", r_end}};
  out.h.axis = axis;
  out.h.values.resize(n);
  out.h.derivs.resize(n);
  if (!divergent && G[0] == 0.0) {
    out.h.values.setOnes();
    out.h.derivs.setZero();
    out.status = "constant: tail integral of W0 vanishes";
    out.h.note = out.status;
    return out;
  }
  const int windows = static_cast<int>(std::floor(std::log2(r_end)));
  const double r_burn = divergent ? std::max(1.0, std::ldexp(1.0, outer_half_start(windows) - 2)) : 0.0;
  Vec rate(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = axis[i];
    const double denom = divergent ? G[i] : G[i] + G[0];
    double rt = std::min(beta0 / r, denom > 0.0 ? opt.kappa * w[i] / denom : 0.0);
    if (divergent) {
      const double c = Cutoff::chi(r / r_burn);
      rt = c * beta0 / r + (1.0 - c) * rt;
    }
    rate[i] = rt;
  }
  double logh = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) logh += 0.5 * (rate[i] * axis[i] + rate[i - 1] * axis[i - 1]) * (std::log(axis[i]) - std::log(axis[i - 1]));
    out.h.values[i] = std::exp(logh);
    out.h.derivs[i] = rate[i] * out.h.values[i];
  }
  out.growth = out.h.values[n - 1] / out.h.values[0];
  out.status = "ok";
  if (divergent && out.growth < 10.0) {
    out.divergent_ok = false;
    out.status = "insufficient wiggle room on this grid";
  }
  out.h.note = out.status;
  return out;
}

WeightFn named_f_family(const std::string& kind, const Params& params, const WeightFn* h) {
  if (kind == "theta_alpha") {
    const double k = param(params, "k", 1.0), alpha = param(params, "alpha", 1.0);
    const double alpha0 = param(params, "alpha0", std::max(alpha, 1.0));
    if (!(k > 0.0)) throw Error("theta_alpha: k must be positive");
    if (!(alpha >= 0.5 && alpha <= alpha0)) throw Error("theta_alpha: alpha must lie in [1/2, alpha0]");
    return analytic_weight(
        WeightClass::F, kind, [=](double r) { return std::pow(r / (1.0 + k * r), alpha); },
        [=](double r) {
          const double t = r / (1.0 + k * r);
          return alpha * std::pow(t, alpha - 1.0) / ((1.0 + k * r) * (1.0 + k * r));
        },
        {{"k", k}, {"alpha", alpha}, {"alpha0", alpha0}});
  }
  if (kind == "lap_fk") {
    const double k = param(params, "k", 1.0);
    if (!(k > 0.0)) throw Error("lap_fk: k must be positive");
    const double s = std::exp2(k);
    return analytic_weight(
        WeightClass::F, kind, [=](double r) { return 1.0 - 1.0 / (1.0 + r / s); },
        [=](double r) { return 1.0 / (s * (1.0 + r / s) * (1.0 + r / s)); }, {{"k", k}});
  }
  if (kind == "h_squared_theta") {
    if (h == nullptr) throw Error("h_squared_theta: needs an escort weight h");
    const double k = param(params, "k", 1.0), beta1 = param(params, "beta1", 0.2);
    if (!(k > 0.0)) throw Error("h_squared_theta: k must be positive");
    if (!(beta1 > 0.0)) throw Error("h_squared_theta: beta1 must be positive");
    const double s = std::exp2(k);
    const WeightFn hh = *h;
    auto theta = [=](double r) { return 1.0 - 1.0 / (1.0 + r / s); };
    return analytic_weight(
        WeightClass::F, kind, [=](double r) { return std::pow(hh.value(r), 2) * std::pow(theta(r), beta1); },
        [=](double r) {
          const double hv = hh.value(r), th = theta(r);
          const double dth = 1.0 / (s * (1.0 + r / s) * (1.0 + r / s));
          return 2.0 * hv * hh.deriv(r) * std::pow(th, beta1) + beta1 * hv * hv * std::pow(th, beta1 - 1.0) * dth;
        },
        {{"k", k}, {"beta1", beta1}});
  }
  throw Error("named_f_family: unknown kind '" + kind + "'");
}

WeightFn exponential_weight(const WeightFn& f, double K, const RadialFn& w, double r_end) {
  if (!(K >= 0.0)) throw Error("exponential_weight: K must be non-negative");
  const Vec axis = log_axis(r_end);
  const Eigen::Index n = axis.size();
  Vec wv(n);
  for (Eigen::Index i = 0; i < n; ++i) wv[i] = w(axis[i]);
  const Vec cum = cumulative(axis, wv);
  WeightFn out;
  out.tag = WeightClass::F;
  out.kind = "exponential(" + f.kind + ")";
  out.params = f.params;
  out.params["K"] = K;
  out.axis = axis;
  out.values.resize(n);
  out.derivs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = std::exp(K * cum[i]);
    out.values[i] = f.value(axis[i]) * e;
    out.derivs[i] = (f.deriv(axis[i]) + K * wv[i] * f.value(axis[i])) * e;
  }
  return out;
}

FamilyCheck check_f_family(const WeightFn& f, double r_end) {
  FamilyCheck c;
  c.max_negative = -std::numeric_limits<double>::infinity();
  const Vec axis = log_axis(r_end);
  const Eigen::Index n = axis.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = axis[i], v = f.value(r), d = f.deriv(r);
    if (v <= 0.0) continue;
    c.max_negative = std::max(c.max_negative, -d / v);
    c.max_growth_ratio = std::max(c.max_growth_ratio, r * d / v);
    if (i > 0 && i + 1 < n) {
      const double dd = (f.deriv(axis[i + 1]) - f.deriv(axis[i - 1])) / (axis[i + 1] - axis[i - 1]);
      c.max_curvature_ratio = std::max(c.max_curvature_ratio, r * r * std::abs(dd) / v);
    }
  }
  return c;
}

}  // namespace lapnum
