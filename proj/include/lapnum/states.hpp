#pragma once

#include "lapnum/grid.hpp"

#include <cstdint>
#include <vector>

namespace lapnum {

/// Fixed-seed Gaussians (random centre, width, momentum) alternating with
/// dyadic-shell bumps chi_k - chi_{k+1}; all vanish on the boundary layer.
std::vector<CVec> gaussian_set(const RadialGrid& g, int count, std::uint64_t seed, double max_centre = 16.0);

/// exp(-(x - c)^2 / 2w^2) exp(i k x) on the coordinate axis.
CVec gaussian_state(const RadialGrid& g, double centre, double width, double momentum = 0.0);

/// Wave packets exp(-(x - c)^2 / 2w^2) exp(i k x) with |k| near sqrt(lambda).
std::vector<CVec> wave_packets(const RadialGrid& g, int count, std::uint64_t seed, double lambda,
                               double max_centre = 24.0);

}  // namespace lapnum
