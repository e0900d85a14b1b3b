#pragma once

#include "lapnum/phase.hpp"
#include "lapnum/resolvent.hpp"
#include "lapnum/weights.hpp"

#include <string>
#include <vector>

namespace lapnum {

struct RadiationOptions {
  bool second_order = true;  // midpoint closure; false gives the one-sided node closure
  SolveOptions solve;
  double eigen_condition_cap = 1e12;
};

/// System H - lambda with (A - a) u = 0 imposed on the outermost node(s):
/// both ends for d = 1, the outer end only for d >= 2.
/// Throws Refusal when the closed system is numerically singular (lambda near an eigenvalue).
BandSolver radiation_system(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign,
                            const RadiationOptions& opt = {});

/// Zeroes the boundary rows of psi to match the closure rows.
CVec radiation_rhs(const RadialGrid& g, const CVec& psi);

SolveResult solve_radiation_bc(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign,
                               const CVec& psi, const RadiationOptions& opt = {});

/// sign * Im(conj(u) u') at the outer boundary, positive for the chosen branch.
double boundary_flux(const RadialGrid& g, const CVec& u, int sign);

struct UniquenessReport {
  double discrepancy = 0.0;        // interior B* relative difference
  double extrapolation_error = 0.0;
  std::string comparison;          // "extrapolated" or "smallest-eps proximity"
  std::string refusal;
  double besov_star_u = 0.0;
  double besov_star_u_over_h = 0.0;
  double h_besov_psi = 0.0;
  TailClass tail_radiation = TailClass::BStar0;  // h (A - a) u
  TailClass tail_control = TailClass::BStarOnly; // h (A + a) u
  TailClass tail_u = TailClass::BStarOnly;
  double slope_radiation = 0.0, slope_control = 0.0, slope_u = 0.0;
  double flux = 0.0;
  double residual = 0.0;
  bool accepted = false;
};

struct UniquenessOptions {
  double compare_radius = 32.0;
  double sweep_extent = 0.0;  // 0: 2000 / min eps
  RadiationOptions radiation;
  int workers = 1;
};

/// Direct radiation solve on g against the eps -> 0 extrapolation of Dirichlet
/// solves on a larger grid with the same spacing.
UniquenessReport uniqueness_compare(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign,
                                    const CVec& psi, const std::vector<double>& eps_list, const WeightFn& h,
                                    const UniquenessOptions& opt = {});

}  // namespace lapnum
