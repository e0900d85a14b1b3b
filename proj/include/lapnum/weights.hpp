#pragma once

#include "lapnum/conditions.hpp"
#include "lapnum/potential.hpp"

#include <optional>
#include <string>

namespace lapnum {

enum class WeightClass { W, H, F };

const char* to_string(WeightClass c);

/// Radial weight with value and derivative. Analytic weights carry closed forms;
/// sampled weights interpolate log(value) linearly in log r on a sorted axis.
struct WeightFn {
  WeightClass tag = WeightClass::W;
  std::string kind;
  Params params;
  RadialFn value_fn;
  RadialFn deriv_fn;
  Vec axis;
  Vec values;
  Vec derivs;
  std::string note;

  double value(double r) const;
  double deriv(double r) const;
  Vec value_on(const RadialGrid& g) const;
  Vec deriv_on(const RadialGrid& g) const;
};

WeightFn analytic_weight(WeightClass tag, std::string kind, RadialFn value, RadialFn deriv, Params params = {});

/// h = r^p, W_CLASS/H_CLASS power laws and their derivatives.
WeightFn power_weight(WeightClass tag, double scale, double power, double shift = 0.0);

/// Log-spaced axis from 1 to r_end with the given number of points per octave.
Vec log_axis(double r_end, int per_octave = 256);

struct HReport {
  double beta0 = 0.0;
  double min_h = 0.0;
  double max_negative_derivative = 0.0;  // max(-h') / h
  double max_growth_excess = 0.0;        // max(h' - beta0 h / r) / h
  double gronwall_worst = 0.0;           // largest relative breach of the sandwich
  int gronwall_pairs = 0;
  TrendEvidence decay;       // r h^2 W0
  TrendEvidence integrable;  // h^2 W0
  Verdict verdict = Verdict::Pass;
  std::string reason;
};

/// Checks 0 <= h' <= beta0 h / r with beta0 < 1, the Gronwall sandwich on 1000
/// fixed-seed pairs, and the dyadic trends of h^2 W0 up to r_end.
/// Throws Error when h is not positive.
HReport validate_h(const WeightFn& h, const RadialFn& w0, double beta0, double r_end, std::uint64_t seed = 1);

enum class EscortTarget { Bounded, Divergent };

struct EscortOptions {
  double kappa = 0.45;         // growth rate cap relative to -d log G
  double floor_scale = 1e-30;  // envelope floor eps * max(W0) * r^-2
  int per_octave = 256;
};

struct EscortResult {
  WeightFn h;
  double growth = 1.0;  // h(r_end) / h(1)
  bool divergent_ok = true;
  std::string status;   // "ok", "constant: ..." or "insufficient wiggle room on this grid"
};

/// Clamped growth h'/h = min(beta0 / r, kappa w / G) with G the tail integral of w.
/// Divergent targets burn in at beta0 / r below the outer half of the dyadic windows.
EscortResult construct_escort_h(const RadialFn& w0, const RadialFn& w0_tail, double beta0, EscortTarget target,
                                double r_end, const EscortOptions& opt = {});

/// Named families: theta_alpha (k, alpha, alpha0), lap_fk (k), h_squared_theta (h, beta1, k).
WeightFn named_f_family(const std::string& kind, const Params& params, const WeightFn* h = nullptr);

/// f exp(K int_1^r W); W must be sampled on a log axis reaching r_end.
WeightFn exponential_weight(const WeightFn& f, double K, const RadialFn& w, double r_end);

struct FamilyCheck {
  double max_negative = 0.0;     // max(-f') / f
  double max_growth_ratio = 0.0; // max r f' / f
  double max_curvature_ratio = 0.0;  // max r^2 |f''| / f (finite differences of f')
};

FamilyCheck check_f_family(const WeightFn& f, double r_end);

}  // namespace lapnum
