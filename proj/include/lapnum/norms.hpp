#pragma once

#include "lapnum/grid.hpp"

#include <string>
#include <vector>

namespace lapnum {

/// Dyadic shell data for F_k = 1{2^{k-1} <= r < 2^k}. Index k - 1 holds shell k.
struct BesovProfile {
  std::vector<double> block_norms;  // full shells 1..k_max, then the partial outer shell if any
  std::vector<double> tail;         // 2^{-k/2} ||F_k psi|| over full shells only
  double besov = 0.0;               // sum over all shells, partial included
  double besov_star = 0.0;          // max over full shells
  int k_max = 0;
  bool has_partial_shell = false;
};

enum class TailClass { BStar0, BStarOnly, Unbounded };

const char* to_string(TailClass c);

/// Shell index k >= 1 of every node.
std::vector<int> shell_index(const RadialGrid& g);

/// Largest k with 2^k <= extent.
int full_shell_count(const RadialGrid& g);

/// Throws Error when extent < 2.
BesovProfile dyadic_profile(const RadialGrid& g, const CVec& psi);

/// ||r^s psi||
double weighted_norm(const RadialGrid& g, const CVec& psi, double s);

/// Sup over full shells lying inside r <= r_cut.
double besov_star_within(const RadialGrid& g, const CVec& psi, double r_cut);

/// Least-squares slope of log2(tail) over the outer half of the full shells.
double tail_slope(const BesovProfile& p);

/// slope < -tol: B*_0; |slope| <= tol: B* only; slope > tol: unbounded.
/// Throws Refusal when fewer than four full shells are available.
TailClass tail_class(const BesovProfile& p, double tol = 0.25);

}  // namespace lapnum
