#include "lapnum/phase.hpp"

#include "lapnum/cutoff.hpp"
#include "lapnum/operators.hpp"

#include <cmath>
#include <sstream>

namespace lapnum {

double select_r_lambda(const PotentialModel& pot, const RadialGrid& g, double lambda) {
  if (!(lambda > 0.0)) throw Error("select_r_lambda: lambda must be positive");
  double r_bad = 0.0;
  double r_top = 1.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double r = g.r[j];
    r_top = std::max(r_top, r);
    if (!(lambda - pot.v_lr(r) > 0.5 * lambda)) r_bad = std::max(r_bad, r);
  }
  if (r_bad == 0.0) return 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (g.r[j] >= 2.0 * r_bad) best = std::min(best, g.r[j]);
  if (!std::isfinite(best)) {
    std::ostringstream os;
    os << "select_r_lambda: lambda - V_lr > lambda/2 fails up to r = " << r_bad << " on a grid ending at r = "
       << r_top;
    throw Error(os.str());
  }
  return best;
}

Phase build_phase(const PotentialModel& pot, const RadialGrid& g, Complex z, int sign) {
  if (sign != 1 && sign != -1) throw Error("build_phase: sign must be +1 or -1");
  if (!(z.real() > 0.0)) throw Error("build_phase: Re z must be positive");
  if (z.imag() * sign < 0.0) throw Error("build_phase: sign disagrees with Im z");
  Phase ph;
  ph.z = z;
  ph.sign = sign;
  ph.r_lambda = pot.short_range_only ? 1.0 : select_r_lambda(pot, g, z.real());
  const Eigen::Index n = g.size();
  ph.eta.resize(n);
  ph.a.resize(n);
  ph.grad_a.resize(n);
  ph.a_grid.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = g.r[j];
    double eta = 1.0, deta = 0.0;
    if (!pot.short_range_only) {
      eta = 1.0 - Cutoff::chi(2.0 * r / ph.r_lambda);
      deta = -Cutoff::chi_prime(2.0 * r / ph.r_lambda) * 2.0 / ph.r_lambda;
    }
    Complex q = z - pot.v_lr(r);
    Complex dq = -pot.grad_v_lr(r);
    if (g.dim == 2) {
      q += 0.25 / (r * r);
      dq -= 0.5 / (r * r * r);
    }
    const Complex s = std::sqrt(q);
    const double sg = static_cast<double>(sign);
    ph.eta[j] = eta;
    ph.a[j] = eta == 0.0 ? Complex(0.0) : sg * eta * s;
    ph.grad_a[j] = eta == 0.0 && deta == 0.0 ? Complex(0.0) : sg * (deta * s + eta * dq / (2.0 * s));
    const Complex half = 0.5 * ph.a[j] * g.spacing;
    ph.a_grid[j] = ph.a[j] * std::sqrt(1.0 - half * half);
  }
  return ph;
}

RicattiProfile ricatti_residual(const Phase& ph, const PotentialModel& pot, const RadialGrid& g) {
  RicattiProfile out;
  out.residual.resize(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double r = g.r[j], om = g.omega[j];
    Complex target = ph.z - pot.v_lr(r);
    if (g.dim == 2) target += 0.25 / (r * r);
    const double res = std::abs(om * om * ph.grad_a[j] + ph.a[j] * ph.a[j] - target);
    out.residual[j] = res;
    if (r >= ph.r_lambda) out.fitted_c = std::max(out.fitted_c, res / (pot.w0(r) + 1.0 / (r * r)));
  }
  return out;
}

E2Residual e2_decomposition_residual(const PotentialModel& pot, const RadialGrid& g, Complex z, int sign,
                                     const CVec& psi) {
  const Phase ph = build_phase(pot, g, z, sign);
  const HamiltonianParts parts = assemble_L_E1_H(g, pot);
  const DiscreteOperator a_op = assemble_A(g);
  const Eigen::Index n = g.size();
  CVec diag(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = g.r[j], eta2 = ph.eta[j] * ph.eta[j];
    Complex d = pot.v_sr(r) + (1.0 - eta2) * (pot.v_lr(r) - z);
    d -= Complex(0.0, 1.0) * g.omega[j] * g.omega[j] * ph.grad_a[j];
    if (g.dim == 2) d += eta2 * 0.25 / (r * r);
    diag[j] = d;
  }
  const CVec minus = a_op * psi - ph.a.cwiseProduct(psi);
  const CVec factored = a_op * minus + ph.a.cwiseProduct(minus);
  const CVec rhs = factored + parts.L * psi + parts.E1 * psi + diag.cwiseProduct(psi);
  const CVec lhs = parts.H * psi - z * psi;
  E2Residual out;
  const double norm = g.norm(psi);
  out.value = norm > 0.0 ? g.norm(lhs - rhs) / norm : 0.0;
  out.touches_boundary = !interior_supported(g, psi);
  return out;
}

double grad_a_bound(const Phase& ph, const PotentialModel& pot, const RadialGrid& g) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double r = g.r[j];
    worst = std::max(worst, std::abs(ph.grad_a[j]) / (pot.w0(r) + 1.0 / (r * r * r)));
  }
  return worst;
}

}  // namespace lapnum
