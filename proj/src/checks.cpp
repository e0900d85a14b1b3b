#include "lapnum/checks.hpp"

#include "lapnum/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lapnum {

OperatorCheckReport operators_check(const PotentialModel& pot, int dim, const OperatorCheckOptions& opt) {
  if (opt.nodes.size() < 2) throw Error("operators_check: need at least two grids");
  OperatorCheckReport rep;
  bool boundary = false;
  for (Eigen::Index n : opt.nodes) {
    const RadialGrid g = build_grid(dim, opt.extent, n);
    const double c = dim == 1 ? opt.centre : std::abs(opt.centre) + 0.25 * opt.extent;
    const CVec psi = gaussian_state(g, c, opt.width, opt.momentum);
    const ResidualResult d = decomposition_residual(g, pot, psi);
    const DlForms dl = dl_identity_forms(g, g.r, Vec::Ones(g.size()), psi);
    boundary = boundary || d.touches_boundary || dl.touches_boundary;
    rep.rows.push_back({n, g.spacing, d.value, dl.residual});
  }
  rep.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double ratio = rep.rows[i - 1].spacing / rep.rows[i].spacing;
    rep.order_decomposition.push_back(std::log(rep.rows[i - 1].decomposition / rep.rows[i].decomposition) /
                                      std::log(ratio));
    rep.order_dl.push_back(std::log(rep.rows[i - 1].dl / rep.rows[i].dl) / std::log(ratio));
    rep.min_order = std::min({rep.min_order, rep.order_decomposition.back(), rep.order_dl.back()});
  }
  if (std::isnan(rep.min_order)) rep.min_order = 0.0;
  std::ostringstream os;
  os << "minimum empirical order " << rep.min_order << " over " << rep.rows.size() - 1 << " refinements (required "
     << opt.required_order << ")";
  if (boundary) os << "; state touches the boundary layer";
  rep.verdict = pass_if(!boundary && rep.min_order >= opt.required_order);
  rep.reason = os.str();
  return rep;
}

double free_kernel_error(const RadialGrid& g, Complex z, const CVec& psi, const CVec& u, double window) {
  if (g.dim != 1) throw Error("free_kernel_error: d = 1 only");
  Complex k = std::sqrt(z);
  if (k.imag() < 0.0) k = -k;
  std::vector<Eigen::Index> support;
  const double cut = 1e-18 * psi.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (std::abs(psi[j]) > cut) support.push_back(j);
  double err = 0.0, ref = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(g.coord[i]) > window) continue;
    Complex acc = 0.0;
    for (Eigen::Index j : support)
      acc += Complex(0.0, 0.5) / k * std::exp(Complex(0.0, 1.0) * k * std::abs(g.coord[i] - g.coord[j])) * psi[j];
    acc *= g.spacing;
    err = std::max(err, std::abs(acc - u[i]));
    ref = std::max(ref, std::abs(acc));
  }
  return ref > 0.0 ? err / ref : 0.0;
}

}  // namespace lapnum
