#include <doctest.h>

#include "lapnum/operators.hpp"

#include <cmath>

using namespace lapnum;

namespace {

CVec gaussian(const RadialGrid& g, double centre, double width, double k = 0.0) {
  CVec v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.coord[j] - centre;
    v[j] = std::exp(-x * x / (2 * width * width)) * std::polar(1.0, k * g.coord[j]);
  }
  return v;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("p: constants, plane waves, adjointness") {
  const RadialGrid g = build_grid(1, 20.0, 4001);
  const DiscreteOperator p = assemble_p(g);
  const CVec one = CVec::Ones(g.size());
  const CVec p1 = p * one;
  for (Eigen::Index j = 1; j + 1 < g.size(); ++j) CHECK(std::abs(p1[j]) < 1e-12);
  CVec e(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) e[j] = std::polar(1.0, g.coord[j]);
  const CVec pe = p * e;
  const double h2 = g.spacing * g.spacing;
  for (Eigen::Index j = 1; j + 1 < g.size(); ++j) CHECK(std::abs(pe[j] - e[j]) < h2);
  const CVec a = gaussian(g, 1.0, 1.5, 0.7), b = gaussian(g, -2.0, 2.0, -0.3);
  const Complex lhs = g.dot(p * a, b), rhs = g.dot(a, p * b);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-15);
  CHECK(p.matrix.hermitian_defect(0, g.size()) == 0.0);
}

TEST_CASE("A: Hermitian, action on constants, explicit form") {
  for (int d : {1, 3}) {
    const RadialGrid g = build_grid(d, 20.0, 2000);
    const DiscreteOperator a = assemble_A(g);
    CHECK(a.matrix.hermitian_defect(0, g.size()) <= 1e-12 * a.matrix.max_abs());
  }
  const RadialGrid g = build_grid(1, 20.0, 4001);
  const CVec one = CVec::Ones(g.size());
  const CVec a1 = assemble_A(g) * one;
  for (Eigen::Index j = 1; j + 1 < g.size(); ++j)
    CHECK(std::abs(a1[j] - Complex(0, -0.5) * g.lap_r[j]) < 1e-3);
  double prev = 0;
  for (Eigen::Index n : {1001, 2001, 4001}) {
    const RadialGrid gg = build_grid(1, 20.0, n);
    const CVec psi = gaussian(gg, 2.0, 1.5, 1.0);
    const double diff = gg.norm(assemble_A(gg) * psi - assemble_A_explicit(gg) * psi);
    if (prev > 0) CHECK(order(prev, diff) > 1.8);
    prev = diff;
  }
}

TEST_CASE("A: commutator with f gives omega . grad f") {
  const RadialGrid g = build_grid(1, 20.0, 8001);
  const DiscreteOperator a = assemble_A(g);
  Vec f(g.size()), df(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    f[j] = std::tanh(g.coord[j] / 3.0);
    df[j] = (1.0 - f[j] * f[j]) / 3.0;
  }
  const CVec psi = gaussian(g, 1.0, 2.0, 0.5);
  const CVec fpsi = f.cast<Complex>().cwiseProduct(psi);
  const CVec comm = Complex(0, 1) * (a * fpsi - f.cast<Complex>().cwiseProduct(a * psi));
  const CVec expected = (g.omega.cwiseProduct(df)).cast<Complex>().cwiseProduct(psi);
  CHECK(g.norm(comm - expected) / g.norm(psi) < 1e-4);
}

TEST_CASE("E1 values") {
  CHECK(e1_value(1, 1.0) == doctest::Approx(0.25));
  const double r = 1e4;
  CHECK(e1_value(2, r) * r * r == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK(e1_value(3, r) * r * r == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("H, L, E1 symmetric; L and Hessian forms nonnegative") {
  for (int d : {1, 2, 3}) {
    const RadialGrid g = build_grid(d, 30.0, 1500);
    const HamiltonianParts parts = assemble_L_E1_H(g, builtin_potential("coulomb_like"));
    for (const DiscreteOperator* op : {&parts.L, &parts.E1, &parts.H})
      CHECK(op->matrix.hermitian_defect(0, g.size()) <= 1e-12 * op->matrix.max_abs());
    const CVec psi = gaussian(g, 8.0, 3.0, 0.4);
    CHECK(g.dot(psi, parts.L * psi).real() >= 0.0);
    CHECK(hessian_form(g, Vec::Ones(g.size()), psi) >= 0.0);
  }
}

TEST_CASE("decomposition residual converges at second order") {
  for (const char* name : {"free", "coulomb_like"}) {
    double prev = 0;
    for (Eigen::Index n : {2049, 4097, 8193}) {
      const RadialGrid g = build_grid(1, 64.0, n);
      const CVec psi = gaussian(g, 0.0, 3.0, 0.8);
      const ResidualResult res = decomposition_residual(g, builtin_potential(name), psi);
      CHECK_FALSE(res.touches_boundary);
      if (prev > 0) CHECK(order(prev, res.value) > 1.8);
      prev = res.value;
    }
  }
  for (int d : {2, 3}) {
    double prev = 0;
    for (Eigen::Index n : {1024, 2048, 4096}) {
      const RadialGrid g = build_grid(d, 64.0, n);
      const CVec psi = gaussian(g, 20.0, 3.0, 0.8);
      const double v = decomposition_residual(g, builtin_potential("free"), psi).value;
      if (prev > 0) CHECK(order(prev, v) > 1.5);
      prev = v;
    }
  }
}

TEST_CASE("DL identity converges and is real on real data") {
  for (int d : {1, 3}) {
    double prev = 0;
    for (Eigen::Index n : {1024, 2048, 4096}) {
      const RadialGrid g = build_grid(d, 64.0, d == 1 ? 2 * n + 1 : n);
      Vec f = g.r, fp(g.size());
      for (Eigen::Index j = 0; j < g.size(); ++j) fp[j] = 1.0;
      const CVec psi = gaussian(g, d == 1 ? 1.0 : 15.0, 3.0, 0.6);
      const DlForms forms = dl_identity_forms(g, f, fp, psi);
      if (prev > 0) CHECK(order(prev, forms.residual) > 1.0);
      prev = forms.residual;
    }
    CHECK(prev < 1e-3);
  }
  const RadialGrid g = build_grid(1, 32.0, 2049);
  const CVec psi = gaussian(g, 0.0, 2.0);
  const DlForms f1 = dl_identity_forms(g, Vec::Ones(g.size()), Vec::Zero(g.size()), psi);
  CHECK(f1.rhs_first_order == 0.0);
  CHECK(f1.rhs_radial_term == 0.0);
  CHECK(f1.residual < 1e-3);
  CHECK_THROWS_AS(dl_identity_forms(g, Vec::Ones(3), Vec::Zero(3), psi), Error);
}

TEST_CASE("quadratic forms") {
  const RadialGrid g = build_grid(1, 64.0, 4097);
  CVec psi = gaussian(g, 3.0, 2.0, 1.0);
  psi /= g.norm(psi);
  const Vec one = Vec::Ones(g.size());
  CHECK(quadratic_form(FormKind::Mult, g, one, psi).real() == doctest::Approx(1.0));
  CVec c = CVec::Zero(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) c[j] = g.interior(j) ? 1.0 : 0.0;
  const double hc = hessian_form(g, one, c);
  CHECK(hc < 1.0 / g.spacing);  // only the two edge rows contribute
  CHECK(form_kind_from_string("a_form") == FormKind::AForm);
  CHECK_THROWS_AS(form_kind_from_string("bogus"), Error);
  CHECK_THROWS_AS(quadratic_form(FormKind::Commutator, g, one, psi), Error);
}
