#pragma once

#include "lapnum/band_matrix.hpp"
#include "lapnum/potential.hpp"

#include <string>

namespace lapnum {

/// Banded complex operator on a grid (bandwidth <= 2).
struct DiscreteOperator {
  ComplexBand matrix;
  bool hermitian = false;
  std::string label;

  CVec operator*(const CVec& v) const { return matrix * v; }
  Eigen::Index size() const { return matrix.size(); }
};

/// Central difference -i d/dx (d = 1) or -i d/drho (radial sector), zero outside the grid.
DiscreteOperator assemble_p(const RadialGrid& g);

/// Radial derivative of the physical function expressed on the stored
/// (reduced) samples: -i (d/drho - (d-1)/(2 rho)); equals assemble_p for d = 1.
DiscreteOperator assemble_radial_gradient(const RadialGrid& g);

/// A = (p* omega + omega* p)/2, Hermitian by construction.
DiscreteOperator assemble_A(const RadialGrid& g);

/// The expanded form omega . p - (i/2) Delta r; agrees with assemble_A to O(h^2).
DiscreteOperator assemble_A_explicit(const RadialGrid& g);

DiscreteOperator multiplication(const RadialGrid& g, const Vec& f, std::string label = "MULT");
DiscreteOperator multiplication(const RadialGrid& g, const CVec& f, std::string label = "MULT");

/// E1 = ((d-1)(d-3) r^-2 + (4d-10) r^-4 + 7 r^-6) / 4
double e1_value(int dim, double r);
Vec e1_samples(const RadialGrid& g);

struct HamiltonianParts {
  DiscreteOperator L;
  DiscreteOperator E1;
  DiscreteOperator H;
};

/// L = G* r^-2 G with G the radial gradient, E1 diagonal, and
/// H = -D2 + V (+ (d-1)(d-3)/(4 rho^2) in the radial sector).
HamiltonianParts assemble_L_E1_H(const RadialGrid& g, const PotentialModel& pot);

/// Three-point Hamiltonian only.
DiscreteOperator assemble_H(const RadialGrid& g, const PotentialModel& pot);

/// True when the state is numerically zero on the boundary layer.
bool interior_supported(const RadialGrid& g, const CVec& psi, double rel_tol = 1e-10);

struct ResidualResult {
  double value = 0.0;
  bool touches_boundary = false;
};

/// ||(H - L - A^2 - V - E1) psi|| / ||psi||
ResidualResult decomposition_residual(const RadialGrid& g, const PotentialModel& pot, const CVec& psi);

/// Both sides of the commutator identity for 2 Im(A f L), evaluated as forms.
struct DlForms {
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_first_order = 0.0;  // -Im(Delta r f' r^-2 omega* p)
  double rhs_divergence = 0.0;   // -(1/2) div(f r^-2 (Delta r)' omega), by parts
  double rhs_m_term = 0.0;       // p* (2 f/r - f') M p
  double rhs_radial_term = 0.0;  // p* r^-2 f' (1 + omega omega*) p
  double residual = 0.0;         // |lhs - rhs| / (|lhs| + |rhs| + 1)
  bool touches_boundary = false;
};

/// f and f_prime are samples over the grid nodes of f(r) and df/dr.
DlForms dl_identity_forms(const RadialGrid& g, const Vec& f, const Vec& f_prime, const CVec& psi);

/// Quadratic forms used across the verification suites.
enum class FormKind { Hessian, Mult, AForm, Commutator };

FormKind form_kind_from_string(const std::string& name);

/// <p* f Hess(r) p>_psi, <f>_psi, <A f A>_psi or <2 Im(A f (H - z))>_psi.
Complex quadratic_form(FormKind kind, const RadialGrid& g, const Vec& f, const CVec& psi,
                       const DiscreteOperator* H = nullptr, Complex z = 0.0);

/// Convenience: sum f Hess(r) |G psi|^2 spacing.
double hessian_form(const RadialGrid& g, const Vec& f, const CVec& psi);

}  // namespace lapnum
