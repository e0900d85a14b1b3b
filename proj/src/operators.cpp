#include "lapnum/operators.hpp"

#include <cmath>

namespace lapnum {

namespace {

constexpr Complex I{0.0, 1.0};

ComplexBand diag_band(const CVec& d) {
  ComplexBand m(d.size(), 0, 0);
  m.add_diagonal(d);
  return m;
}

CVec to_complex(const Vec& v) { return v.cast<Complex>(); }

Vec central_difference(const RadialGrid& g, const Vec& v) {
  const Eigen::Index n = v.size();
  Vec out = Vec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double right = j + 1 < n ? v[j + 1] : 0.0;
    const double left = j > 0 ? v[j - 1] : 0.0;
    out[j] = (right - left) / (2.0 * g.spacing);
  }
  return out;
}

}  // namespace

DiscreteOperator assemble_p(const RadialGrid& g) {
  const Eigen::Index n = g.size();
  ComplexBand p(n, 1, 1);
  const Complex c = -I / (2.0 * g.spacing);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j + 1 < n) p.coeffRef(j, j + 1) = c;
    if (j > 0) p.coeffRef(j, j - 1) = -c;
  }
  return {std::move(p), true, "P"};
}

DiscreteOperator assemble_radial_gradient(const RadialGrid& g) {
  DiscreteOperator p = assemble_p(g);
  const double k = g.sector_shift();
  if (k != 0.0) {
    CVec d(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) d[j] = I * k / g.coord[j];
    p.matrix.add_diagonal(d);
    p.hermitian = false;
  }
  p.label = "G";
  return p;
}

DiscreteOperator assemble_A(const RadialGrid& g) {
  const ComplexBand p = assemble_p(g).matrix;
  const ComplexBand om = diag_band(to_complex(g.omega));
  ComplexBand a = (p * om + om * p) * Complex(0.5);
  return {std::move(a), true, "A"};
}

DiscreteOperator assemble_A_explicit(const RadialGrid& g) {
  const ComplexBand grad = assemble_radial_gradient(g).matrix;
  const ComplexBand om = diag_band(to_complex(g.omega));
  ComplexBand a = om * grad;
  a.add_diagonal(to_complex(g.lap_r) * (-0.5 * I));
  return {std::move(a), false, "A_explicit"};
}

DiscreteOperator multiplication(const RadialGrid& g, const Vec& f, std::string label) {
  if (f.size() != g.size()) throw Error("multiplication: sample count does not match grid");
  return {diag_band(to_complex(f)), true, std::move(label)};
}

DiscreteOperator multiplication(const RadialGrid& g, const CVec& f, std::string label) {
  if (f.size() != g.size()) throw Error("multiplication: sample count does not match grid");
  const bool real = f.imag().cwiseAbs().maxCoeff() == 0.0;
  return {diag_band(f), real, std::move(label)};
}

double e1_value(int dim, double r) {
  const double r2 = 1.0 / (r * r);
  return 0.25 * ((dim - 1) * (dim - 3) * r2 + (4 * dim - 10) * r2 * r2 + 7.0 * r2 * r2 * r2);
}

Vec e1_samples(const RadialGrid& g) {
  Vec e(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) e[j] = e1_value(g.dim, g.r[j]);
  return e;
}

DiscreteOperator assemble_H(const RadialGrid& g, const PotentialModel& pot) {
  const Eigen::Index n = g.size();
  ComplexBand h(n, 1, 1);
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  const double centrifugal = 0.25 * (g.dim - 1) * (g.dim - 3);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = 2.0 * inv_h2 + pot.total(g.r[j]);
    if (g.dim > 1) diag += centrifugal / (g.coord[j] * g.coord[j]);
    h.coeffRef(j, j) = diag;
    if (j + 1 < n) h.coeffRef(j, j + 1) = -inv_h2;
    if (j > 0) h.coeffRef(j, j - 1) = -inv_h2;
  }
  return {std::move(h), true, "H"};
}

HamiltonianParts assemble_L_E1_H(const RadialGrid& g, const PotentialModel& pot) {
  const ComplexBand grad = assemble_radial_gradient(g).matrix;
  const ComplexBand m = diag_band(to_complex(g.m_scalar));
  ComplexBand l = grad.adjoint() * (m * grad);
  HamiltonianParts parts;
  parts.L = {std::move(l), true, "L"};
  parts.E1 = multiplication(g, e1_samples(g), "E1");
  parts.H = assemble_H(g, pot);
  return parts;
}

bool interior_supported(const RadialGrid& g, const CVec& psi, double rel_tol) {
  const double peak = psi.cwiseAbs().maxCoeff();
  if (peak == 0.0) return true;
  const Eigen::Index n = psi.size();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!g.interior(j) && std::abs(psi[j]) > rel_tol * peak) return false;
  return true;
}

ResidualResult decomposition_residual(const RadialGrid& g, const PotentialModel& pot, const CVec& psi) {
  const HamiltonianParts parts = assemble_L_E1_H(g, pot);
  const DiscreteOperator a = assemble_A(g);
  const CVec v = to_complex(sample(g, [&](double r) { return pot.total(r); }));
  const CVec apsi = a * psi;
  const CVec diff = parts.H * psi - parts.L * psi - a * apsi - v.cwiseProduct(psi) - parts.E1 * psi;
  ResidualResult res;
  const double norm = g.norm(psi);
  res.value = norm > 0 ? g.norm(diff) / norm : 0.0;
  res.touches_boundary = !interior_supported(g, psi);
  return res;
}

DlForms dl_identity_forms(const RadialGrid& g, const Vec& f, const Vec& f_prime, const CVec& psi) {
  if (f.size() != g.size() || f_prime.size() != g.size())
    throw Error("dl_identity_forms: f and f' samples must match the grid");
  const HamiltonianParts parts = assemble_L_E1_H(g, builtin_potential("free"));
  const DiscreteOperator a = assemble_A(g);
  const DiscreteOperator grad = assemble_radial_gradient(g);
  const CVec apsi = a * psi;
  const CVec lpsi = parts.L * psi;
  const CVec gpsi = grad * psi;
  const double h = g.spacing;

  DlForms out;
  out.lhs = 2.0 * (h * apsi.dot(f.cast<Complex>().cwiseProduct(lpsi))).imag();

  const Vec mod2 = psi.cwiseAbs2();
  const Vec dmod2 = central_difference(g, mod2);
  const double k2 = 2.0 * g.sector_shift();
  Complex first = 0.0;
  double div = 0.0, mterm = 0.0, radial = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double r = g.r[j], om = g.omega[j], r2 = 1.0 / (r * r);
    const double gcoef = g.lap_r[j] * f_prime[j] * r2;
    first += std::conj(psi[j]) * gcoef * om * gpsi[j];
    const double field = f[j] * r2 * laplacian_of_r_prime(g.dim, r) * om;
    const double radial_part = g.dim > 1 ? k2 / g.coord[j] * mod2[j] : 0.0;
    div += field * (dmod2[j] - radial_part);
    const double g2 = std::norm(gpsi[j]);
    mterm += (2.0 * f[j] / r - f_prime[j]) * r2 * g2;
    radial += r2 * f_prime[j] * (1.0 + om * om) * g2;
  }
  out.rhs_first_order = -(h * first).imag();
  out.rhs_divergence = 0.5 * h * div;
  out.rhs_m_term = h * mterm;
  out.rhs_radial_term = h * radial;
  out.rhs = out.rhs_first_order + out.rhs_divergence + out.rhs_m_term + out.rhs_radial_term;
  out.residual = std::abs(out.lhs - out.rhs) / (std::abs(out.lhs) + std::abs(out.rhs) + 1.0);
  out.touches_boundary = !interior_supported(g, psi);
  return out;
}

FormKind form_kind_from_string(const std::string& name) {
  if (name == "hessian_form") return FormKind::Hessian;
  if (name == "mult_form") return FormKind::Mult;
  if (name == "a_form") return FormKind::AForm;
  if (name == "commutator_form") return FormKind::Commutator;
  throw Error("quadratic_form: unknown kind '" + name + "'");
}

double hessian_form(const RadialGrid& g, const Vec& f, const CVec& psi) {
  const CVec gpsi = assemble_radial_gradient(g) * psi;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) acc += f[j] * g.hess_r[j] * std::norm(gpsi[j]);
  return g.spacing * acc;
}

Complex quadratic_form(FormKind kind, const RadialGrid& g, const Vec& f, const CVec& psi,
                       const DiscreteOperator* H, Complex z) {
  switch (kind) {
    case FormKind::Hessian:
      return hessian_form(g, f, psi);
    case FormKind::Mult:
      return g.spacing * f.dot(psi.cwiseAbs2());
    case FormKind::AForm: {
      const CVec apsi = assemble_A(g) * psi;
      return g.spacing * f.dot(apsi.cwiseAbs2());
    }
    case FormKind::Commutator: {
      if (H == nullptr) throw Error("quadratic_form: commutator_form needs the Hamiltonian");
      const CVec apsi = assemble_A(g) * psi;
      const CVec rest = (*H) * psi - z * psi;
      return 2.0 * (g.spacing * apsi.dot(f.cast<Complex>().cwiseProduct(rest))).imag();
    }
  }
  return 0.0;
}

}  // namespace lapnum
