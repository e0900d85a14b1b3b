#include <doctest.h>

#include "lapnum/sommerfeld.hpp"

#include <cmath>

using namespace lapnum;

namespace {

CVec gaussian(const RadialGrid& g, double c, double w) {
  CVec v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) v[j] = std::exp(-(g.coord[j] - c) * (g.coord[j] - c) / (2 * w * w));
  return v;
}

}  // namespace

TEST_CASE("radiation BC: free outgoing solution") {
  const RadialGrid g = build_grid_spacing(1, 40.0, 0.02);
  const CVec psi = gaussian(g, 0.0, 0.5);
  const double lambda = 1.0;
  const SolveResult s = solve_radiation_bc(builtin_potential("free"), g, lambda, 1, psi);
  CHECK_FALSE(s.failed);
  CHECK(s.bc == Boundary::Radiation);
  double err = 0, ref = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    Complex acc = 0;
    for (Eigen::Index j = 0; j < g.size(); ++j)
      acc += Complex(0, 0.5) * std::exp(Complex(0, 1) * std::abs(g.coord[i] - g.coord[j])) * psi[j];
    acc *= g.spacing;
    err = std::max(err, std::abs(acc - s.u[i]));
    ref = std::max(ref, std::abs(acc));
  }
  CHECK(err / ref < 1e-3);
  const Eigen::Index n = g.size();
  const Complex ratio = (s.u[n - 1] - s.u[n - 2]) / g.spacing / (0.5 * (s.u[n - 1] + s.u[n - 2]));
  CHECK(std::abs(ratio - Complex(0, std::sqrt(lambda))) < 1e-3);
  CHECK(boundary_flux(g, s.u, 1) > 0.0);
  const SolveResult m = solve_radiation_bc(builtin_potential("free"), g, lambda, -1, psi);
  CHECK((m.u - s.u.conjugate()).norm() <= 1e-10 * s.u.norm());
  CHECK(boundary_flux(g, m.u, -1) > 0.0);
}

TEST_CASE("radiation BC: first-order closure reflects more") {
  const RadialGrid g = build_grid_spacing(1, 40.0, 0.1);
  const CVec psi = gaussian(g, 0.0, 1.0);
  RadiationOptions first;
  first.second_order = false;
  const PotentialModel free = builtin_potential("free");
  const SolveResult a = solve_radiation_bc(free, g, 2.0, 1, psi);
  const SolveResult b = solve_radiation_bc(free, g, 2.0, 1, psi, first);
  const RadialGrid g2 = build_grid_spacing(1, 80.0, 0.1);
  const SolveResult c = solve_radiation_bc(free, g2, 2.0, 1, embed(g, g2, psi));
  const Eigen::Index off = (g2.size() - g.size()) / 2;
  const CVec ref = c.u.segment(off, g.size());
  CHECK((a.u - ref).norm() < (b.u - ref).norm());
  CHECK((a.u - ref).norm() < 1e-3 * ref.norm());
}

TEST_CASE("radiation BC: coulomb tails and zero state") {
  const RadialGrid g = build_grid_spacing(1, 1024.0, 0.1);
  const PotentialModel coul = builtin_potential("coulomb_like");
  const EscortResult h = construct_escort_h(coul.w0, coul.w0_tail, 0.9, EscortTarget::Divergent, g.r.maxCoeff());
  const CVec psi = gaussian(g, 0.0, 2.0);
  UniquenessOptions uo;
  const UniquenessReport rep =
      uniqueness_compare(coul, g, 2.0, 1, psi, {0.016, 0.008, 0.004, 0.002}, h.h, uo);
  CHECK(rep.accepted);
  CHECK(rep.tail_radiation == TailClass::BStar0);
  CHECK(rep.tail_u == TailClass::BStarOnly);
  CHECK(rep.tail_control != TailClass::BStar0);
  CHECK(rep.flux > 0.0);
  CHECK(rep.discrepancy < 1e-2);
  const UniquenessReport z =
      uniqueness_compare(coul, g, 2.0, 1, CVec::Zero(g.size()), {0.016, 0.008, 0.004, 0.002}, h.h, uo);
  CHECK(z.discrepancy == 0.0);
  CHECK(z.besov_star_u == 0.0);
}

TEST_CASE("radiation BC: free uniqueness comparison") {
  const RadialGrid g = build_grid_spacing(1, 256.0, 0.1);
  const PotentialModel free = builtin_potential("free");
  const WeightFn h = power_weight(WeightClass::H, 1.0, 0.2);
  const UniquenessReport rep =
      uniqueness_compare(free, g, 1.0, 1, gaussian(g, 0.0, 2.0), {0.016, 0.008, 0.004, 0.002}, h);
  CHECK(rep.comparison == "extrapolated");
  CHECK(rep.discrepancy < 1e-3);
}

TEST_CASE("radiation BC: radial sector") {
  const RadialGrid g = build_grid_spacing(3, 256.0, 0.05);
  CVec psi = gaussian(g, 10.0, 1.0);
  const SolveResult s = solve_radiation_bc(builtin_potential("coulomb_like"), g, 1.5, 1, psi);
  CHECK_FALSE(s.failed);
  CHECK(boundary_flux(g, s.u, 1) > 0.0);
}
