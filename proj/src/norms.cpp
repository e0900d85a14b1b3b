#include "lapnum/norms.hpp"

#include <algorithm>
#include <cmath>

namespace lapnum {

const char* to_string(TailClass c) {
  switch (c) {
    case TailClass::BStar0: return "B_star_0";
    case TailClass::BStarOnly: return "B_star_only";
    case TailClass::Unbounded: return "unbounded";
  }
  return "?";
}

std::vector<int> shell_index(const RadialGrid& g) {
  std::vector<int> k(static_cast<std::size_t>(g.size()));
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    int s = static_cast<int>(std::floor(std::log2(g.r[j]))) + 1;
    // guard the floor against rounding at exact powers of two
    while (std::ldexp(1.0, s - 1) > g.r[j]) --s;
    while (std::ldexp(1.0, s) <= g.r[j]) ++s;
    k[static_cast<std::size_t>(j)] = std::max(s, 1);
  }
  return k;
}

int full_shell_count(const RadialGrid& g) {
  return static_cast<int>(std::floor(std::log2(g.extent)));
}

BesovProfile dyadic_profile(const RadialGrid& g, const CVec& psi) {
  if (g.extent < 2.0) throw Error("dyadic_profile: extent must be at least 2");
  if (psi.size() != g.size()) throw Error("dyadic_profile: state size does not match grid");
  BesovProfile p;
  p.k_max = full_shell_count(g);
  const std::vector<int> k = shell_index(g);
  const int shells = *std::max_element(k.begin(), k.end());
  std::vector<double> sq(static_cast<std::size_t>(std::max(shells, p.k_max)), 0.0);
  for (Eigen::Index j = 0; j < g.size(); ++j) sq[static_cast<std::size_t>(k[j] - 1)] += std::norm(psi[j]);
  p.has_partial_shell = shells > p.k_max;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double b = std::sqrt(g.spacing * sq[i]);
    const int kk = static_cast<int>(i) + 1;
    p.block_norms.push_back(b);
    p.besov += std::sqrt(std::ldexp(1.0, kk)) * b;
    if (kk <= p.k_max) {
      const double t = b / std::sqrt(std::ldexp(1.0, kk));
      p.tail.push_back(t);
      p.besov_star = std::max(p.besov_star, t);
    }
  }
  return p;
}

double weighted_norm(const RadialGrid& g, const CVec& psi, double s) {
  if (!std::isfinite(s)) throw Error("weighted_norm: exponent must be finite");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) acc += std::pow(g.r[j], 2.0 * s) * std::norm(psi[j]);
  return std::sqrt(g.spacing * acc);
}

double besov_star_within(const RadialGrid& g, const CVec& psi, double r_cut) {
  const std::vector<int> k = shell_index(g);
  const int last = static_cast<int>(std::floor(std::log2(r_cut)));
  std::vector<double> sq(static_cast<std::size_t>(std::max(last, 0)), 0.0);
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (k[j] <= last) sq[static_cast<std::size_t>(k[j] - 1)] += std::norm(psi[j]);
  double out = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i)
    out = std::max(out, std::sqrt(g.spacing * sq[i] / std::ldexp(1.0, static_cast<int>(i) + 1)));
  return out;
}

double tail_slope(const BesovProfile& p) {
  if (p.k_max < 4) throw Refusal("tail_class: need at least 4 full dyadic shells, have " + std::to_string(p.k_max));
  const int first = p.k_max / 2 + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = first; k <= p.k_max; ++k) {
    const double y = std::log2(std::max(p.tail[static_cast<std::size_t>(k - 1)], 1e-300));
    sx += k;
    sy += y;
    sxx += double(k) * k;
    sxy += k * y;
    ++m;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

TailClass tail_class(const BesovProfile& p, double tol) {
  const double s = tail_slope(p);
  // an eventually-zero sequence has limit zero
  bool vanishes = true;
  for (int k = p.k_max / 2 + 1; k <= p.k_max; ++k) vanishes = vanishes && p.tail[static_cast<std::size_t>(k - 1)] == 0.0;
  if (vanishes) return TailClass::BStar0;
  if (s < -tol) return TailClass::BStar0;
  if (s <= tol) return TailClass::BStarOnly;
  return TailClass::Unbounded;
}

}  // namespace lapnum
