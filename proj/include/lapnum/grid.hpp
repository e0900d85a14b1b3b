#pragma once

#include "lapnum/types.hpp"

namespace lapnum {

/// Uniform grid carrying r = <x>, the radial direction scalar and the
/// radial derivatives of r that enter the operator calculus.
///
/// d = 1: nodes x_j on [-extent, extent], both ends included.
/// d >= 2: radial nodes rho_j = (j + 1) * spacing on (0, extent]; the origin is
/// excluded and the reduced function u = rho^{(d-1)/2} psi is stored.
struct RadialGrid {
  int dim = 1;
  double extent = 0.0;
  double spacing = 0.0;
  Vec coord;    // x (d = 1) or rho (d >= 2)
  Vec r;        // sqrt(1 + coord^2)
  Vec omega;    // coord / r
  Vec lap_r;    // Laplacian of r: (d - 1)/r + r^-3
  Vec hess_r;   // radial-radial Hessian component of r: r^-3
  Vec m_scalar; // 1 - |omega|^2 = r^-2

  Eigen::Index size() const { return coord.size(); }

  /// Half-integer exponent (d - 1)/2 of the sector substitution.
  double sector_shift() const { return 0.5 * (dim - 1); }

  /// Nodes excluded from form evaluations on each side.
  static constexpr int boundary_layer = 2;

  bool interior(Eigen::Index j) const {
    return j >= boundary_layer && j < size() - boundary_layer;
  }

  /// Plain Riemann inner product spacing * sum conj(a) b.
  Complex dot(const CVec& a, const CVec& b) const { return spacing * a.dot(b); }
  double norm(const CVec& a) const { return std::sqrt(spacing * a.squaredNorm()); }
};

inline constexpr int kMinGridPoints = 16;

/// Builds a grid; throws Error on n_points < 16, non-finite or extent <= 1, or d < 1.
RadialGrid build_grid(int dim, double extent, Eigen::Index n_points);

/// Same as build_grid but sized by spacing (d = 1: n = 2 extent / spacing + 1).
RadialGrid build_grid_spacing(int dim, double extent, double spacing);

/// Laplacian of r in dimension d at radius r.
inline double laplacian_of_r(int dim, double r) { return (dim - 1) / r + 1.0 / (r * r * r); }

/// Radial derivative (d/dr) of the Laplacian of r.
inline double laplacian_of_r_prime(int dim, double r) {
  return -(dim - 1) / (r * r) - 3.0 / (r * r * r * r);
}

}  // namespace lapnum
