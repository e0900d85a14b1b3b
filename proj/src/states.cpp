#include "lapnum/states.hpp"

#include "lapnum/cutoff.hpp"

#include <cmath>
#include <random>

namespace lapnum {

namespace {

void clear_boundary(const RadialGrid& g, CVec& v) {
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (!g.interior(j)) v[j] = 0.0;
}

double sector_centre(const RadialGrid& g, double c) { return g.dim == 1 ? c : std::abs(c) + 8.0; }

}  // namespace

std::vector<CVec> gaussian_set(const RadialGrid& g, int count, std::uint64_t seed, double max_centre) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-max_centre, max_centre), width(0.7, 4.0), mom(-2.0, 2.0),
      unit(0.0, 1.0);
  const int shells = std::max(1, static_cast<int>(std::floor(std::log2(std::min(max_centre * 2.0, g.extent / 2.0)))));
  std::vector<CVec> out;
  for (int s = 0; s < count; ++s) {
    CVec v(g.size());
    const double c = sector_centre(g, centre(rng)), w = width(rng), k = mom(rng), phase = 6.283185307179586 * unit(rng);
    const int shell = 1 + static_cast<int>(unit(rng) * shells) % shells;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double x = g.coord[j];
      if (s % 2 == 0) {
        v[j] = std::exp(-(x - c) * (x - c) / (2 * w * w)) * std::polar(1.0, k * x + phase);
      } else {
        // Smooth shell bump supported in 2^{shell-1} <= r <= 2^{shell+1}.
        const double bump = Cutoff::chi_n(shell + 1, g.r[j]) * (1.0 - Cutoff::chi_n(shell - 1, g.r[j]));
        v[j] = bump * std::polar(1.0, k * x + phase);
      }
    }
    clear_boundary(g, v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CVec> wave_packets(const RadialGrid& g, int count, std::uint64_t seed, double lambda, double max_centre) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-max_centre, max_centre), width(1.0, 6.0), jitter(-0.3, 0.3),
      unit(0.0, 1.0);
  std::vector<CVec> out;
  const double k0 = std::sqrt(lambda);
  for (int s = 0; s < count; ++s) {
    const double c = sector_centre(g, centre(rng)), w = width(rng);
    const double k = (unit(rng) < 0.5 ? -1.0 : 1.0) * k0 * (1.0 + jitter(rng));
    CVec v(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double x = g.coord[j];
      v[j] = std::exp(-(x - c) * (x - c) / (2 * w * w)) * std::polar(1.0, k * x);
    }
    clear_boundary(g, v);
    out.push_back(std::move(v));
  }
  return out;
}

CVec gaussian_state(const RadialGrid& g, double centre, double width, double momentum) {
  if (!(width > 0.0)) throw Error("gaussian_state: width must be positive");
  CVec v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.coord[j] - centre;
    v[j] = std::exp(-x * x / (2.0 * width * width)) * std::polar(1.0, momentum * g.coord[j]);
  }
  return v;
}

}  // namespace lapnum
