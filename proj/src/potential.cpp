#include "lapnum/potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace lapnum {

namespace {

double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown(const std::string& name, const Params& p, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error("builtin_potential(" + name + "): unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw Error("builtin_potential(" + name + "): parameter '" + key + "' is not finite");
  }
}

RadialFn zero() {
  return [](double) { return 0.0; };
}

}  // namespace

PotentialModel builtin_potential(const std::string& name, const Params& params) {
  PotentialModel p;
  p.name = name;
  p.v_sr = zero();
  p.v_lr = zero();
  p.grad_v_lr = zero();
  p.w0 = zero();
  p.w0_tail = zero();
  constexpr double e = std::numbers::e;

  if (name == "free") {
    reject_unknown(name, params, {});
    p.short_range_only = true;
  } else if (name == "short_range_power") {
    reject_unknown(name, params, {"alpha", "c"});
    const double alpha = param(params, "alpha", 2.0);
    const double c = param(params, "c", 1.0);
    if (!(alpha > 1.0)) throw Error("short_range_power: alpha must exceed 1");
    p.params = {{"alpha", alpha}, {"c", c}};
    p.short_range_only = true;
    p.v_sr = [=](double r) { return c * std::pow(r, -alpha); };
    p.w0 = [=](double r) { return std::abs(c) * std::pow(r, -alpha); };
    p.w0_tail = [=](double R) { return std::abs(c) * std::pow(R, 1.0 - alpha) / (alpha - 1.0); };
  } else if (name == "coulomb_like") {
    reject_unknown(name, params, {"c"});
    const double c = param(params, "c", -2.0);
    p.params = {{"c", c}};
    p.v_lr = [=](double r) { return c / r; };
    p.grad_v_lr = [=](double r) { return -c / (r * r); };
    p.w0 = [=](double r) { return std::abs(c) / (r * r); };
    p.w0_tail = [=](double R) { return std::abs(c) / R; };
  } else if (name == "log_borderline") {
    reject_unknown(name, params, {"c"});
    const double c = param(params, "c", 1.0);
    p.params = {{"c", c}};
    p.v_lr = [=](double r) { return c / std::log(e + r); };
    p.grad_v_lr = [=](double r) {
      const double l = std::log(e + r);
      return -c / ((e + r) * l * l);
    };
    p.w0 = [=](double r) {
      const double l = std::log(e + r);
      return std::abs(c) / (r * l * l);
    };
    // 1/(r l^2) = 1/((e+r) l^2) + e/(r (e+r) l^2); the second piece is bounded by e/(R l(R)^2) * (1/R) integrated.
    p.w0_tail = [=](double R) {
      const double l = std::log(e + R);
      return std::abs(c) * (1.0 / l + e / (R * l * l));
    };
  } else if (name == "wvn_like") {
    reject_unknown(name, params, {"c", "lambda0"});
    const double c = param(params, "c", -8.0);
    const double lambda0 = param(params, "lambda0", 1.0);
    if (!(lambda0 > 0.0)) throw Error("wvn_like: lambda0 must be positive");
    const double k2 = 2.0 * std::sqrt(lambda0);
    p.params = {{"c", c}, {"lambda0", lambda0}};
    p.claims_condition1 = false;
    p.claims_condition2 = false;
    p.v_lr = [=](double r) { return c * std::sin(k2 * r) / r; };
    p.grad_v_lr = [=](double r) { return c * (k2 * std::cos(k2 * r) / r - std::sin(k2 * r) / (r * r)); };
    p.w0 = [=](double r) { return std::abs(c) * (k2 / r + 1.0 / (r * r)); };
    p.w0_tail = [](double) { return std::numeric_limits<double>::infinity(); };
  } else if (name == "well") {
    reject_unknown(name, params, {"depth"});
    const double depth = param(params, "depth", 5.0);
    if (depth < 0.0) throw Error("well: depth must be non-negative");
    p.params = {{"depth", depth}};
    p.short_range_only = true;
    auto sech2 = [](double r) {
      const double s = std::sqrt(std::max(0.0, r * r - 1.0));
      const double ch = std::cosh(s);
      return 1.0 / (ch * ch);
    };
    p.v_sr = [=](double r) { return -depth * sech2(r); };
    p.w0 = [=](double r) { return depth * sech2(r); };
    p.w0_tail = [=](double R) {
      const double s = std::sqrt(std::max(0.0, R * R - 1.0));
      return 2.0 * depth * std::exp(-2.0 * s);
    };
  } else {
    throw Error("builtin_potential: unknown potential '" + name + "'");
  }
  return p;
}

Vec sample(const RadialGrid& g, const RadialFn& f) {
  Vec out(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) out[j] = f(g.r[j]);
  return out;
}

}  // namespace lapnum
