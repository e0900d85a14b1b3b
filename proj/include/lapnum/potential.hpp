#pragma once

#include "lapnum/grid.hpp"

#include <functional>
#include <map>
#include <string>

namespace lapnum {

using RadialFn = std::function<double(double)>;
using Params = std::map<std::string, double>;

/// Radial potential V = V_sr + V_lr with envelope W0, all as functions of r >= 1.
struct PotentialModel {
  std::string name;
  Params params;
  RadialFn v_sr;
  RadialFn v_lr;
  RadialFn grad_v_lr;  // d V_lr / dr
  RadialFn w0;
  /// Analytic tail integral of W0 over [R, inf); +inf when W0 is not integrable.
  RadialFn w0_tail;
  bool claims_condition1 = true;
  bool claims_condition2 = true;
  bool short_range_only = false;

  double total(double r) const { return v_sr(r) + v_lr(r); }
};

/// Known names: free, short_range_power(alpha, c), coulomb_like(c),
/// log_borderline(c), wvn_like(c, lambda0), well(depth).
PotentialModel builtin_potential(const std::string& name, const Params& params = {});

/// Samples f(r_j) over the grid nodes.
Vec sample(const RadialGrid& g, const RadialFn& f);

}  // namespace lapnum
