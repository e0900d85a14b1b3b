#pragma once

#include "lapnum/norms.hpp"
#include "lapnum/operators.hpp"

#include <map>
#include <string>
#include <vector>

namespace lapnum {

/// z = lambda + i sign eps
struct SpectralParam {
  double lambda = 1.0;
  double eps = 0.0;
  int sign = 1;

  Complex z() const { return {lambda, sign * eps}; }
};

enum class Boundary { Dirichlet, Radiation };

const char* to_string(Boundary b);

struct SolveOptions {
  double tolerance = 1e-10;
  double condition_cap = 1e14;
};

struct SolveResult {
  CVec u;
  double residual = 0.0;
  Boundary bc = Boundary::Dirichlet;
  double condition_estimate = 0.0;
  bool failed = false;
  std::string message;
};

/// Factored system matrix reused across right-hand sides.
class BandSolver {
 public:
  BandSolver() = default;
  BandSolver(ComplexBand system, Boundary bc, const SolveOptions& opt = {});

  SolveResult solve(const CVec& rhs) const;
  /// Solves with the adjoint of the system matrix.
  CVec solve_adjoint(const CVec& rhs) const;

  const ComplexBand& system() const { return system_; }
  double condition_estimate() const { return cond_; }
  bool ill_conditioned() const { return ill_; }

 private:
  ComplexBand system_;
  ComplexBandLU lu_;
  Boundary bc_ = Boundary::Dirichlet;
  SolveOptions opt_;
  double cond_ = 0.0;
  bool ill_ = false;
};

/// H - z with Dirichlet truncation; requires eps > 0.
ComplexBand shifted(const DiscreteOperator& H, Complex z);

/// Dirichlet-truncated R(z) psi. Throws Error when eps <= 0.
SolveResult solve(const DiscreteOperator& H, const SpectralParam& z, const CVec& psi, const SolveOptions& opt = {});

struct SweepRow {
  double eps = 0.0;
  double besov_psi = 0.0;
  double besov_star_u = 0.0;
  double besov_star_Au = 0.0;
  double hessian = 0.0;
  double l2_u = 0.0;
  double ratio = 0.0;  // (B*(u)^2 + B*(Au)^2 + hessian) / B(psi)^2
  double residual = 0.0;
  bool failed = false;
  std::map<std::string, double> extra;
};

struct SweepRecord {
  std::string potential;
  double lambda = 0.0;
  int sign = 1;
  std::vector<SweepRow> rows;
  std::vector<CVec> states;  // u per eps when kept
  double truncation_sensitivity = 0.0;
  bool truncation_limited = false;
  bool audited = false;
};

struct SweepOptions {
  bool keep_states = false;
  bool audit = true;
  double audit_threshold = 0.05;
  int workers = 1;
};

/// Embeds psi from g into the grid with the same spacing and a larger extent.
CVec embed(const RadialGrid& from, const RadialGrid& to, const CVec& psi);

/// Relative interior B* discrepancy of R(z) psi between extent X and 2X (r <= X/2).
double truncation_audit(const PotentialModel& pot, const RadialGrid& g, const SpectralParam& z, const CVec& psi,
                        const CVec& u);

/// eps_list must be positive and strictly decreasing.
SweepRecord eps_sweep(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign, const CVec& psi,
                      const std::vector<double>& eps_list, const SweepOptions& opt = {});

struct Extrapolation {
  double value = 0.0;
  double error = 0.0;
};

struct VectorExtrapolation {
  CVec value;
  double error = 0.0;  // max-norm of the last correction
};

/// Neville extrapolation to eps = 0 using all points; refuses (Refusal) with
/// fewer than 3 points or when successive corrections do not shrink.
Extrapolation limit_extrapolate(const std::vector<double>& eps, const std::vector<double>& values);
VectorExtrapolation limit_extrapolate(const std::vector<double>& eps, const std::vector<CVec>& values);

/// Scalar field of a sweep: besov_star_u, besov_star_Au, hessian, l2_u, ratio or an extra key.
Extrapolation limit_extrapolate(const SweepRecord& sweep, const std::string& field);

}  // namespace lapnum
