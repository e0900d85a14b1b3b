#pragma once

#include <cmath>

namespace lapnum {

/// Smooth non-increasing step: chi(t) = 1 for t <= 1, 0 for t >= 2, built from
/// exp(-1/s) pieces.
struct Cutoff {
  static double g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
  static double g_prime(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

  static double chi(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double a = g(2.0 - t), b = g(t - 1.0);
    return a / (a + b);
  }

  static double chi_prime(double t) {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    const double a = g(2.0 - t), b = g(t - 1.0);
    const double da = -g_prime(2.0 - t), db = g_prime(t - 1.0);
    return (da * b - a * db) / ((a + b) * (a + b));
  }

  /// chi_n(r) = chi(r / 2^n)
  static double chi_n(int n, double r) { return chi(r / std::ldexp(1.0, n)); }
  static double chi_n_prime(int n, double r) {
    const double s = std::ldexp(1.0, n);
    return chi_prime(r / s) / s;
  }
};

}  // namespace lapnum
