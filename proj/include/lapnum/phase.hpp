#pragma once

#include "lapnum/potential.hpp"

namespace lapnum {

/// Phase a_z = sign * eta * sqrt(z - V_lr (+ r^-2/4 when d = 2)), principal branch.
struct Phase {
  Complex z;
  int sign = 1;
  double r_lambda = 1.0;
  Vec eta;
  CVec a;
  CVec grad_a;  // da/dr
  /// a sqrt(1 - (a h/2)^2): the symbol of the central difference on the discrete
  /// plane wave with the same energy.
  CVec a_grid;
};

/// Smallest grid r_lambda with lambda - V_lr(r) > lambda/2 for every grid r >= r_lambda/2.
/// Monotone non-increasing in lambda by construction.
double select_r_lambda(const PotentialModel& pot, const RadialGrid& g, double lambda);

/// sign must be +1 or -1 and agree with the sign of Im z when Im z != 0.
Phase build_phase(const PotentialModel& pot, const RadialGrid& g, Complex z, int sign);

struct RicattiProfile {
  Vec residual;     // |omega^2 a' + a^2 - target| per node
  double fitted_c = 0.0;  // max residual / (W0 + r^-2) over r >= r_lambda
};

/// Target is z - V_lr, plus r^-2/4 when d = 2.
RicattiProfile ricatti_residual(const Phase& ph, const PotentialModel& pot, const RadialGrid& g);

struct E2Residual {
  double value = 0.0;
  bool touches_boundary = false;
};

/// ||(H - z) psi - [(A + a)(A - a) + L + V_sr + E1 (+ eta^2 r^-2/4) + E2] psi|| / ||psi||
/// with E2 = (1 - eta^2)(V_lr - z) - i omega . grad a.
E2Residual e2_decomposition_residual(const PotentialModel& pot, const RadialGrid& g, Complex z, int sign,
                                     const CVec& psi);

/// max |a'| / (W0 + r^-3) over the grid.
double grad_a_bound(const Phase& ph, const PotentialModel& pot, const RadialGrid& g);

}  // namespace lapnum
