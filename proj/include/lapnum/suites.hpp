#pragma once

#include "lapnum/conditions.hpp"
#include "lapnum/potential.hpp"
#include "lapnum/resolvent.hpp"
#include "lapnum/sommerfeld.hpp"
#include "lapnum/weights.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lapnum {

using LinearMap = std::function<CVec(const CVec&)>;

struct PowerResult {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||T|| by power iteration on T* T; T and T* act on grid vectors of length n.
PowerResult operator_norm(const LinearMap& T, const LinearMap& T_adj, Eigen::Index n, std::uint64_t seed,
                          int max_iter = 200, double tol = 1e-7);

/// W-class trend evidence: W >= 0, r W vanishing, window integrals summable.
struct WeightValidation {
  bool nonnegative = true;
  TrendEvidence decay;
  TrendEvidence integrable;
  Verdict verdict = Verdict::Pass;
};

WeightValidation validate_w(const WeightFn& w, double r_end);

/// Per-eps maxima over (lambda, psi) and the derived plateau statistics.
struct PlateauStats {
  std::vector<double> eps;
  std::vector<double> max_ratio;
  std::vector<double> decade_max;   // sup of max_ratio within each eps-decade below eps_max
  double variation = 0.0;           // max / min of decade_max
  std::vector<double> control_max;  // per eps, max over the family
  std::vector<double> contrast;     // per sweep: control(eps_min) / control(eps_max)
  double contrast_growth = 0.0;        // control_max(eps_min) / control_max(eps_max)
};

struct PlateauOptions {
  double plateau_factor = 10.0;
  double contrast_factor = 100.0;
  std::vector<int> signs{1};
  SweepOptions sweep;
};

struct LapSuiteReport {
  std::vector<SweepRecord> sweeps;  // lambda-major, then sign, then psi
  PlateauStats stats;               // control: ||u||^2 / B(psi)^2
  double p_extension_worst = 0.0;   // max over shells of (lhs - rhs) / rhs
  int p_extension_checked = 0;
  bool truncation_limited = false;
  Verdict verdict = Verdict::Pass;
  std::string reason;
};

LapSuiteReport lap_suite(const PotentialModel& pot, const RadialGrid& g, const std::vector<double>& lambdas,
                         const std::vector<CVec>& psis, const std::vector<double>& eps_list,
                         const PlateauOptions& opt = {});

struct RadiationSuiteReport {
  std::vector<SweepRecord> sweeps;  // extra: radiation, control, h_besov_psi
  PlateauStats stats;               // ratio: (A - a) quantity; contrast: (A + a) control
  std::string h_kind;
  double h_growth = 1.0;
  Verdict condition2 = Verdict::Pass;
  Verdict h_valid = Verdict::Pass;
  std::string item_c;  // rad_smooth item c status
  bool truncation_limited = false;
  Verdict verdict = Verdict::Pass;
  std::string reason;
};

/// Refuses (Refusal) when pot fails Condition 2 or h fails validate_h.
RadiationSuiteReport radiation_suite(const PotentialModel& pot, const RadialGrid& g,
                                     const std::vector<double>& lambdas, const std::vector<CVec>& psis,
                                     const std::vector<double>& eps_list, const WeightFn& h, double beta0,
                                     const PlateauOptions& opt = {});

struct SmoothingRow {
  double lambda = 0.0;
  int sign = 1;
  double eps = 0.0;
  std::map<std::string, double> norms;  // a, b_R, b_pR, c_R, c_pR, d_R, d_pR
  std::vector<std::string> nonconverged;
};

struct SmoothingOptions {
  double plateau_factor = 10.0;
  int max_iter = 300;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct SmoothingReport {
  std::vector<SmoothingRow> rows;
  std::map<std::string, double> variation;  // per item: max/min over eps of the max over (lambda, sign)
  Verdict w1_valid = Verdict::Pass, w2_valid = Verdict::Pass;
  Verdict verdict = Verdict::Pass;
  std::string reason;
};

SmoothingReport smoothing_suite(const PotentialModel& pot, const RadialGrid& g, const std::vector<double>& lambdas,
                                const WeightFn& w1, const WeightFn& w2, const std::vector<double>& eps_list,
                                const SmoothingOptions& opt = {});

struct HoelderRow {
  double delta = 0.0;
  double difference = 0.0;  // ||W^1/2 (R(lambda + i0) - R(lambda + delta + i0)) W^1/2||, domain-extrapolated
  double difference_outer = 0.0;  // measured on extent X
  double difference_inner = 0.0;  // measured on extent inner_fraction * X (0 when not extrapolating)
  double fitted_c = 0.0;    // difference * h(1 / delta)
  int iterations = 0;
  bool converged = false;
};

struct HoelderOptions {
  double stability_factor = 10.0;
  double target_slope = -1.0;  // negative: no slope clause
  double slope_tol = 0.05;
  int max_iter = 200;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  // D^2 on [-X, X] misses a tail proportional to int_X^inf W ~ X^(1 - p) for W ~ r^-p;
  // a second run on inner_fraction * X removes it by Richardson extrapolation in X^(1 - p).
  bool extrapolate_domain = true;
  double inner_fraction = 0.4;
  RadiationOptions radiation;
  int workers = 1;
};

struct HoelderReport {
  double lambda = 0.0;
  std::vector<HoelderRow> rows;
  double slope = 0.0;        // least-squares d log(difference) / d log(delta)
  double slope_outer = 0.0, slope_inner = 0.0;
  double tail_power = 0.0;   // p with W ~ r^-p near the outer boundary
  double decades = 0.0;
  double c_spread = 0.0;     // max / min fitted_c
  double truncation_delta = 0.0;  // deltas below this are dropped
  Verdict w_valid = Verdict::Pass, h_valid = Verdict::Pass, h2w_valid = Verdict::Pass;
  Verdict verdict = Verdict::Pass;
  std::string reason;
};

/// Throws Refusal when fewer than 2 decades of delta survive the truncation cut.
HoelderReport hoelder_suite(const PotentialModel& pot, const RadialGrid& g, double lambda, const WeightFn& w,
                            const WeightFn& h, double beta0, const std::vector<double>& deltas,
                            const HoelderOptions& opt = {});

struct RellichPoint {
  double lambda = 0.0;
  double gamma = 0.0;  // power-law growth exponent of the transfer matrix over [x0, x1]
  bool failed = false;
};

struct RellichCandidate {
  double lambda = 0.0;  // argmax of gamma within a flagged run
  double gamma = 0.0;
  double lo = 0.0, hi = 0.0;
  double matching = 1.0;  // min |normalized Wronskian| of inner-regular vs decaying solution; 0 is an eigenvalue
  std::string tail = "B_star_0";
};

struct RellichOptions {
  double lambda_min = 0.5, lambda_max = 4.0, dlambda = 0.002;
  double x_end = 512.0;
  double x_start_fraction = 0.125;
  double step = 0.02;
  double flag_gamma = 0.5;
  bool bound_states = true;
  double bound_extent = 20.0;
  int workers = 1;
};

struct RellichReport {
  std::vector<RellichPoint> scan;
  std::vector<RellichCandidate> candidates;
  std::vector<double> bound_states;  // negative eigenvalues (d = 1)
  double max_gamma = 0.0;
  int failures = 0;
  Verdict verdict = Verdict::Informational;
  std::string reason;
};

/// Condition-1 potentials PASS with no candidates; others are informational.
RellichReport rellich_scan(const PotentialModel& pot, int dim, const RellichOptions& opt = {});

enum class Lemma { Key1, Key2, RadBound };

Lemma lemma_from_string(const std::string& name);
const char* to_string(Lemma l);

struct CommutatorState {
  double lhs = 0.0;
  double positive = 0.0;  // sum of the c-weighted constituents
  double fixed = 0.0;     // (2 - beta) Hessian term (rad_bound only)
  double error = 0.0;     // C-weighted constituents including the gamma allowance
  double c = 0.0;         // (lhs - fixed + C_cap * error) / positive
  double c_needed = 0.0;  // smallest C with c >= 0
  bool trivial = false;   // the c-weighted side vanishes
  bool excluded = false;
};

struct CommutatorOptions {
  Lemma lemma = Lemma::Key1;
  double lambda = 1.0;
  double eps = 0.0;   // key2 and rad_bound use z = lambda + i sign eps
  int sign = 1;
  double K = 1.0;     // exp(K int W) modifier for key1 and key2
  double beta = 1.0;  // rad_bound: f satisfies f' <= beta f / r
  double c_cap = 4.0;
  bool gating = true;
};

struct CommutatorReport {
  std::vector<CommutatorState> states;
  double c_min = 0.0;       // min over included states
  double c_common = 0.0;    // smallest C making every included state feasible
  int excluded = 0;
  std::string note;
  Verdict verdict = Verdict::Pass;
};

/// f must be admissible for the lemma; states touching the boundary layer are excluded.
CommutatorReport commutator_diagnostic(const PotentialModel& pot, const RadialGrid& g, const WeightFn& f,
                                       const std::vector<CVec>& states, const CommutatorOptions& opt = {});

}  // namespace lapnum
