#include "lapnum/grid.hpp"

#include <cmath>
#include <string>

namespace lapnum {

namespace {

RadialGrid fill(int dim, double extent, double spacing, Vec coord) {
  RadialGrid g;
  g.dim = dim;
  g.extent = extent;
  g.spacing = spacing;
  g.coord = std::move(coord);
  const Eigen::Index n = g.coord.size();
  g.r.resize(n);
  g.omega.resize(n);
  g.lap_r.resize(n);
  g.hess_r.resize(n);
  g.m_scalar.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = g.coord[j];
    const double r = std::sqrt(1.0 + x * x);
    g.r[j] = r;
    g.omega[j] = x / r;
    g.lap_r[j] = laplacian_of_r(dim, r);
    g.hess_r[j] = 1.0 / (r * r * r);
    g.m_scalar[j] = 1.0 / (r * r);
  }
  return g;
}

void check_common(int dim, double extent, Eigen::Index n_points) {
  if (dim < 1) throw Error("build_grid: dimension must be positive, got " + std::to_string(dim));
  if (!std::isfinite(extent)) throw Error("build_grid: extent is not finite");
  if (extent <= 1.0) throw Error("build_grid: extent must exceed 1, got " + std::to_string(extent));
  if (n_points < kMinGridPoints)
    throw Error("build_grid: need at least " + std::to_string(kMinGridPoints) + " points, got " +
                std::to_string(n_points));
}

}  // namespace

RadialGrid build_grid(int dim, double extent, Eigen::Index n_points) {
  check_common(dim, extent, n_points);
  if (dim == 1) {
    const double h = 2.0 * extent / static_cast<double>(n_points - 1);
    Vec x(n_points);
    for (Eigen::Index j = 0; j < n_points; ++j) x[j] = -extent + h * static_cast<double>(j);
    // exact symmetry about the centre
    for (Eigen::Index j = 0; j < n_points / 2; ++j) x[n_points - 1 - j] = -x[j];
    if (n_points % 2 == 1) x[n_points / 2] = 0.0;
    return fill(dim, extent, h, std::move(x));
  }
  const double h = extent / static_cast<double>(n_points);
  Vec rho(n_points);
  for (Eigen::Index j = 0; j < n_points; ++j) rho[j] = h * static_cast<double>(j + 1);
  return fill(dim, extent, h, std::move(rho));
}

RadialGrid build_grid_spacing(int dim, double extent, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw Error("build_grid: spacing must be positive");
  const double cells = (dim == 1 ? 2.0 * extent : extent) / spacing;
  const auto n = static_cast<Eigen::Index>(std::llround(cells)) + (dim == 1 ? 1 : 0);
  return build_grid(dim, extent, n);
}

}  // namespace lapnum
