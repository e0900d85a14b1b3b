#include "lapnum/sommerfeld.hpp"

#include "lapnum/parallel.hpp"

#include <cmath>
#include <sstream>

namespace lapnum {

namespace {

constexpr Complex I{0.0, 1.0};

// Midpoint-consistent phase: (2/h) tan(kappa h/2) for the discrete plane wave of energy a^2.
Complex midpoint_phase(Complex a, double h) {
  const Complex half = 0.5 * a * h;
  return a / std::sqrt(1.0 - half * half);
}

// Closure row coefficients (inner, outer) for (A - a) u = 0 between nodes `inner` and `outer`.
std::pair<Complex, Complex> closure(const RadialGrid& g, const Phase& ph, Eigen::Index inner, Eigen::Index outer,
                                    bool second_order) {
  const double h = g.spacing;
  const double k = g.sector_shift();
  // derivative from inner to outer along increasing coordinate
  const double dir = outer > inner ? 1.0 : -1.0;
  double om, lap, rho;
  Complex a;
  double w_in, w_out;
  if (second_order) {
    om = 0.5 * (g.omega[inner] + g.omega[outer]);
    lap = 0.5 * (g.lap_r[inner] + g.lap_r[outer]);
    rho = 0.5 * (g.coord[inner] + g.coord[outer]);
    a = midpoint_phase(0.5 * (ph.a[inner] + ph.a[outer]), h);
    w_in = w_out = 0.5;
  } else {
    om = g.omega[outer];
    lap = g.lap_r[outer];
    rho = g.coord[outer];
    a = ph.a[outer];
    w_in = 0.0;
    w_out = 1.0;
  }
  const Complex beta = I * om * (k != 0.0 ? k / rho : 0.0) - 0.5 * I * lap - a;
  // -i om du/dcoord with du/dcoord = dir (u_outer - u_inner) / h
  const Complex d_out = -I * om * dir / h, d_in = I * om * dir / h;
  return {(d_in + w_in * beta) / h, (d_out + w_out * beta) / h};
}

}  // namespace

BandSolver radiation_system(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign,
                            const RadiationOptions& opt) {
  if (!(lambda > 0.0)) throw Error("radiation_system: lambda must be positive");
  const Phase ph = build_phase(pot, g, lambda, sign);
  ComplexBand m = shifted(assemble_H(g, pot), lambda);
  const Eigen::Index n = g.size();
  auto set_row = [&](Eigen::Index row, Eigen::Index other) {
    m.coeffRef(row, row) = 0.0;
    m.coeffRef(row, other) = 0.0;
    const auto [c_in, c_out] = closure(g, ph, other, row, opt.second_order);
    m.coeffRef(row, other) = c_in;
    m.coeffRef(row, row) = c_out;
  };
  set_row(n - 1, n - 2);
  if (g.dim == 1) set_row(0, 1);
  BandSolver solver(std::move(m), Boundary::Radiation, opt.solve);
  if (solver.ill_conditioned() || solver.condition_estimate() > opt.eigen_condition_cap) {
    std::ostringstream os;
    os << "radiation solve refused: lambda = " << lambda
       << " is numerically at an eigenvalue of the closed system (condition estimate " << solver.condition_estimate()
       << ")";
    throw Refusal(os.str());
  }
  return solver;
}

CVec radiation_rhs(const RadialGrid& g, const CVec& psi) {
  CVec rhs = psi;
  rhs[g.size() - 1] = 0.0;
  if (g.dim == 1) rhs[0] = 0.0;
  return rhs;
}

SolveResult solve_radiation_bc(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign,
                               const CVec& psi, const RadiationOptions& opt) {
  if (psi.size() != g.size()) throw Error("solve_radiation_bc: state size does not match grid");
  return radiation_system(pot, g, lambda, sign, opt).solve(radiation_rhs(g, psi));
}

double boundary_flux(const RadialGrid& g, const CVec& u, int sign) {
  const Eigen::Index n = g.size();
  const Complex mid = 0.5 * (u[n - 1] + u[n - 2]);
  const Complex du = (u[n - 1] - u[n - 2]) / g.spacing;
  return sign * (std::conj(mid) * du).imag();
}

UniquenessReport uniqueness_compare(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign,
                                    const CVec& psi, const std::vector<double>& eps_list, const WeightFn& h,
                                    const UniquenessOptions& opt) {
  UniquenessReport rep;
  const SolveResult direct = solve_radiation_bc(pot, g, lambda, sign, psi, opt.radiation);
  rep.residual = direct.residual;
  const CVec& u = direct.u;

  const double eps_min = *std::min_element(eps_list.begin(), eps_list.end());
  double xs = opt.sweep_extent > 0.0 ? opt.sweep_extent : std::max(g.extent, 10.0 * std::sqrt(lambda) / eps_min);
  // keep the node lattice shared with g
  xs = g.extent + std::ceil((xs - g.extent) / g.spacing) * g.spacing;
  const RadialGrid big = build_grid_spacing(g.dim, xs, g.spacing);
  const CVec psi_big = embed(g, big, radiation_rhs(g, psi));
  const DiscreteOperator Hb = assemble_H(big, pot);
  const Eigen::Index offset = g.dim == 1 ? (big.size() - g.size()) / 2 : 0;

  std::vector<Eigen::Index> window;
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (g.r[j] <= opt.compare_radius) window.push_back(j);
  std::vector<CVec> samples(eps_list.size());
  parallel_for(eps_list.size(), opt.workers, [&](std::size_t i) {
    const SolveResult s = solve(Hb, {lambda, eps_list[i], sign}, psi_big);
    CVec w(static_cast<Eigen::Index>(window.size()));
    for (std::size_t q = 0; q < window.size(); ++q) w[static_cast<Eigen::Index>(q)] = s.u[offset + window[q]];
    samples[i] = std::move(w);
  });
  CVec limit;
  try {
    const VectorExtrapolation ex = limit_extrapolate(eps_list, samples);
    limit = ex.value;
    rep.extrapolation_error = ex.error;
    rep.comparison = "extrapolated";
  } catch (const Refusal& r) {
    std::size_t smallest = 0;
    for (std::size_t i = 1; i < eps_list.size(); ++i)
      if (eps_list[i] < eps_list[smallest]) smallest = i;
    limit = samples[smallest];
    rep.comparison = "smallest-eps proximity";
    rep.refusal = r.what();
  }
  CVec diff = CVec::Zero(g.size()), ref = CVec::Zero(g.size());
  for (std::size_t q = 0; q < window.size(); ++q) {
    diff[window[q]] = u[window[q]] - limit[static_cast<Eigen::Index>(q)];
    ref[window[q]] = u[window[q]];
  }
  const double base = besov_star_within(g, ref, opt.compare_radius);
  rep.discrepancy = base > 0.0 ? besov_star_within(g, diff, opt.compare_radius) / base : 0.0;

  const Vec hv = h.value_on(g);
  const Phase ph = build_phase(pot, g, lambda, sign);
  const CVec au = assemble_A(g) * u;
  CVec rad(g.size()), ctl(g.size()), u_in(g.size()), u_over_h(g.size()), hpsi(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const bool in = g.interior(j);
    rad[j] = in ? hv[j] * (au[j] - ph.a_grid[j] * u[j]) : 0.0;
    ctl[j] = in ? hv[j] * (au[j] + ph.a_grid[j] * u[j]) : 0.0;
    u_in[j] = in ? u[j] : 0.0;
    u_over_h[j] = u[j] / hv[j];
    hpsi[j] = hv[j] * psi[j];
  }
  const BesovProfile pr = dyadic_profile(g, rad), pc = dyadic_profile(g, ctl), pu = dyadic_profile(g, u_in);
  rep.slope_radiation = tail_slope(pr);
  rep.slope_control = tail_slope(pc);
  rep.slope_u = tail_slope(pu);
  rep.tail_radiation = tail_class(pr);
  rep.tail_control = tail_class(pc);
  rep.tail_u = tail_class(pu);
  rep.besov_star_u = pu.besov_star;
  rep.besov_star_u_over_h = dyadic_profile(g, u_over_h).besov_star;
  rep.h_besov_psi = dyadic_profile(g, hpsi).besov;
  rep.flux = boundary_flux(g, u, sign);
  rep.accepted = !direct.failed;
  return rep;
}

}  // namespace lapnum
