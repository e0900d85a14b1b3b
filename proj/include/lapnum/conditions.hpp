#pragma once

#include "lapnum/potential.hpp"

#include <map>
#include <string>
#include <vector>

namespace lapnum {

/// Dyadic-window trend evidence for a decay clause on a truncated domain.
struct TrendEvidence {
  std::vector<double> windows;  // one value per window [2^{j-1}, 2^j), j = 1..J
  double slope = 0.0;           // least-squares slope of log2(value) vs j over the outer half
  bool monotone = true;         // outer-half values non-increasing
  Verdict verdict = Verdict::Pass;
};

/// Outer-half start index (1-based window index) for J full windows.
inline int outer_half_start(int windows) { return windows / 2 + 1; }

/// max over window of r f(r); PASS when the outer-half trend is non-increasing
/// with log2-slope below -slope_tol (or identically zero). r must be sorted.
TrendEvidence inverse_r_decay_trend(const Vec& r, const Vec& f, double slope_tol = 0.05);

/// Window integrals of f; PASS when outer-half increments shrink by at least
/// the factor (1 - shrink_tol) per window (or vanish).
TrendEvidence integrability_trend(const Vec& r, const Vec& f, double shrink_tol = 0.02);

/// max over window of |f|; PASS when the outer-half trend decays.
TrendEvidence vanishing_trend(const Vec& r, const Vec& f, double slope_tol = 0.05);

struct EnvelopeReport {
  std::string potential;
  double sup_violation_sr = 0.0;
  double sup_violation_lr_derivative = 0.0;
  double sup_violation_grad = 0.0;
  TrendEvidence tail_decay;      // r W0 over dyadic windows
  TrendEvidence integral;        // window integrals of W0
  TrendEvidence v_lr_vanishing;  // |V_lr| over dyadic windows
  std::vector<double> integral_estimate;  // cumulative int_1^{2^j} W0 dr
  std::map<std::string, Verdict> clauses;
  Verdict condition1 = Verdict::Pass;
  Verdict condition2 = Verdict::Pass;
  std::string disclaimer;
};

/// Grid-truncated evidence for the envelope conditions. Throws Error naming the
/// radius when a sampler returns a non-finite value.
EnvelopeReport validate_conditions(const PotentialModel& p, const RadialGrid& g, double tol = 1e-12);

/// Nodes with coord >= 0 (d = 1) or all nodes (d >= 2): r sorted increasing.
std::vector<Eigen::Index> radial_half(const RadialGrid& g);

}  // namespace lapnum
