#pragma once

#include "lapnum/operators.hpp"
#include "lapnum/resolvent.hpp"

#include <string>
#include <vector>

namespace lapnum {

struct LadderRow {
  Eigen::Index nodes = 0;
  double spacing = 0.0;
  double decomposition = 0.0;
  double dl = 0.0;
};

struct OperatorCheckReport {
  std::vector<LadderRow> rows;
  std::vector<double> order_decomposition;  // log2 of successive ratios
  std::vector<double> order_dl;
  double min_order = 0.0;
  Verdict verdict = Verdict::Pass;
  std::string reason;
};

struct OperatorCheckOptions {
  std::vector<Eigen::Index> nodes{8193, 16385, 32769};
  double extent = 64.0;
  double centre = 1.0, width = 3.0, momentum = 0.8;
  double required_order = 1.8;
};

/// Refinement ladder for the decomposition residual and the DL identity (f = r).
OperatorCheckReport operators_check(const PotentialModel& pot, int dim, const OperatorCheckOptions& opt = {});

/// Max over |x| <= window of |K psi - u| / max |K psi| with K the closed-form free kernel
/// (i / 2 sqrt z) exp(i sqrt z |x - y|), Im sqrt z >= 0. d = 1 only.
double free_kernel_error(const RadialGrid& g, Complex z, const CVec& psi, const CVec& u, double window);

}  // namespace lapnum
