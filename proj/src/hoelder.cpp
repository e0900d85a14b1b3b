#include "lapnum/suites.hpp"

#include "lapnum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lapnum {

namespace {

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

}  // namespace

HoelderReport hoelder_suite(const PotentialModel& pot, const RadialGrid& g, double lambda, const WeightFn& w,
                            const WeightFn& h, double beta0, const std::vector<double>& deltas,
                            const HoelderOptions& opt) {
  if (!(lambda > 0.0)) throw Error("hoelder_suite: lambda must be positive");
  HoelderReport rep;
  rep.lambda = lambda;
  const double r_end = g.r.maxCoeff();
  rep.w_valid = validate_w(w, r_end).verdict;
  rep.h_valid = validate_h(h, pot.w0, beta0, r_end).verdict;
  const WeightFn h2w = analytic_weight(
      WeightClass::W, "h2w", [&](double r) { return h.value(r) * h.value(r) * w.value(r); },
      [&](double r) { return 2.0 * h.value(r) * h.deriv(r) * w.value(r) + h.value(r) * h.value(r) * w.deriv(r); });
  rep.h2w_valid = validate_w(h2w, r_end).verdict;

  // The difference lives on the beat length 2 sqrt(lambda) / delta, which must fit in X / 4.
  rep.truncation_delta = 8.0 * std::sqrt(lambda) / g.extent;
  std::vector<double> kept;
  for (double d : deltas) {
    if (!(d > 0.0)) throw Error("hoelder_suite: deltas must be positive");
    if (d >= rep.truncation_delta) kept.push_back(d);
  }
  std::sort(kept.begin(), kept.end());
  if (kept.size() < 2 || std::log10(kept.back() / kept.front()) < 2.0)
    throw Refusal("hoelder_suite: fewer than 2 decades of delta survive the truncation cut");
  rep.decades = std::log10(kept.back() / kept.front());

  auto measure = [&](const RadialGrid& grid, std::vector<double>& out, std::vector<int>& iters, bool& conv) {
    const CVec sw = w.value_on(grid).cwiseMax(0.0).cwiseSqrt().cast<Complex>();
    const BandSolver S0 = radiation_system(pot, grid, lambda, 1, opt.radiation);
    out.assign(kept.size(), 0.0);
    iters.assign(kept.size(), 0);
    std::vector<char> ok(kept.size(), 0);
    parallel_for(kept.size(), opt.workers, [&](std::size_t i) {
      const BandSolver S1 = radiation_system(pot, grid, lambda + kept[i], 1, opt.radiation);
      const LinearMap T = [&](const CVec& x) {
        const CVec rhs = radiation_rhs(grid, sw.cwiseProduct(x));
        return CVec(sw.cwiseProduct(S0.solve(rhs).u - S1.solve(rhs).u));
      };
      const LinearMap Ta = [&](const CVec& y) {
        const CVec rhs = sw.cwiseProduct(y);
        return CVec(sw.cwiseProduct(radiation_rhs(grid, S0.solve_adjoint(rhs) - S1.solve_adjoint(rhs))));
      };
      const PowerResult p = operator_norm(T, Ta, grid.size(), opt.seed, opt.max_iter, opt.tol);
      out[i] = p.norm;
      iters[i] = p.iterations;
      ok[i] = p.converged;
    });
    for (char c : ok) conv = conv && c;
  };

  bool converged = true;
  std::vector<double> outer, inner;
  std::vector<int> it_outer, it_inner;
  measure(g, outer, it_outer, converged);
  const double x_outer = g.extent;
  double x_inner = 0.0;
  if (opt.extrapolate_domain) {
    if (!(opt.inner_fraction > 0.0 && opt.inner_fraction < 1.0))
      throw Error("hoelder_suite: inner_fraction must lie in (0, 1)");
    const RadialGrid gi = build_grid_spacing(g.dim, opt.inner_fraction * g.extent, g.spacing);
    x_inner = gi.extent;
    if (opt.inner_fraction * g.extent < 8.0 * std::sqrt(lambda) / kept.front())
      throw Refusal("hoelder_suite: inner domain is too small for the smallest delta");
    measure(gi, inner, it_inner, converged);
    rep.tail_power = std::log(w.value(0.5 * r_end) / w.value(r_end)) / std::log(2.0);
    if (!(rep.tail_power > 1.0)) throw Refusal("hoelder_suite: W is not integrable near the boundary");
  }
  rep.rows.resize(kept.size());
  bool extrapolated = opt.extrapolate_domain;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    HoelderRow& row = rep.rows[i];
    row.delta = kept[i];
    row.difference_outer = outer[i];
    row.difference = outer[i];
    row.iterations = it_outer[i];
    if (opt.extrapolate_domain) {
      row.difference_inner = inner[i];
      row.iterations += it_inner[i];
      const double t_out = std::pow(x_outer, 1.0 - rep.tail_power), t_in = std::pow(x_inner, 1.0 - rep.tail_power);
      const double d2 = (outer[i] * outer[i] * t_in - inner[i] * inner[i] * t_out) / (t_in - t_out);
      // the compression can only lose norm, so the limit must dominate both measurements
      if (d2 >= outer[i] * outer[i] && inner[i] <= outer[i]) row.difference = std::sqrt(d2);
      else extrapolated = false;
    }
    row.converged = converged;
    row.fitted_c = row.difference * h.value(1.0 / kept[i]);
  }
  if (opt.extrapolate_domain && !extrapolated)
    for (HoelderRow& row : rep.rows) {
      row.difference = row.difference_outer;
      row.fitted_c = row.difference * h.value(1.0 / row.delta);
    }

  std::vector<double> lx, ly, lo, li;
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (const HoelderRow& r : rep.rows) {
    lx.push_back(std::log(r.delta));
    ly.push_back(std::log(r.difference));
    lo.push_back(std::log(r.difference_outer));
    if (opt.extrapolate_domain) li.push_back(std::log(r.difference_inner));
    cmin = std::min(cmin, r.fitted_c);
    cmax = std::max(cmax, r.fitted_c);
  }
  rep.slope = lsq_slope(lx, ly);
  rep.slope_outer = lsq_slope(lx, lo);
  if (opt.extrapolate_domain) rep.slope_inner = lsq_slope(lx, li);
  rep.c_spread = cmin > 0.0 ? cmax / cmin : std::numeric_limits<double>::infinity();
  const bool weights_ok =
      rep.w_valid == Verdict::Pass && rep.h_valid == Verdict::Pass && rep.h2w_valid == Verdict::Pass;
  bool ok = weights_ok && rep.c_spread < opt.stability_factor;
  std::ostringstream os;
  os << "fitted C spread " << rep.c_spread << " over " << rep.decades << " decades (limit " << opt.stability_factor
     << "), log-log slope " << rep.slope;
  if (opt.target_slope >= 0.0) {
    ok = ok && std::abs(rep.slope - opt.target_slope) <= opt.slope_tol;
    os << " (target " << opt.target_slope << " +/- " << opt.slope_tol << ")";
  }
  if (opt.extrapolate_domain)
  {
    if (extrapolated) os << "; domain-extrapolated from extents " << x_inner << " and " << x_outer;
    else os << "; domain extrapolation refused, raw values on extent " << x_outer;
  }
  if (!weights_ok) os << "; weight validation failed";
  if (!converged) os << "; power iteration did not settle for every delta";
  rep.verdict = pass_if(ok);
  rep.reason = os.str();
  return rep;
}

}  // namespace lapnum
