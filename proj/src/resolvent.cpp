#include "lapnum/resolvent.hpp"

#include "lapnum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lapnum {

const char* to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "radiation"; }

BandSolver::BandSolver(ComplexBand system, Boundary bc, const SolveOptions& opt)
    : system_(std::move(system)), lu_(system_), bc_(bc), opt_(opt) {
  cond_ = lu_.condition_estimate();
  ill_ = lu_.singular() || !(cond_ <= opt_.condition_cap);
}

SolveResult BandSolver::solve(const CVec& rhs) const {
  SolveResult res;
  res.bc = bc_;
  res.condition_estimate = cond_;
  if (ill_) {
    res.failed = true;
    res.u = CVec::Zero(rhs.size());
    std::ostringstream os;
    os << "system is singular or ill-conditioned (condition estimate " << cond_ << ")";
    res.message = os.str();
    return res;
  }
  res.u = lu_.solve(rhs);
  const double nb = rhs.norm();
  res.residual = nb > 0.0 ? (system_ * res.u - rhs).norm() / nb : res.u.norm();
  if (!(res.residual <= opt_.tolerance)) {
    res.failed = true;
    res.message = "residual above tolerance";
  }
  return res;
}

CVec BandSolver::solve_adjoint(const CVec& rhs) const { return lu_.solve_adjoint(rhs); }

ComplexBand shifted(const DiscreteOperator& H, Complex z) {
  ComplexBand m = H.matrix;
  m.add_diagonal(CVec::Constant(m.size(), -z));
  return m;
}

SolveResult solve(const DiscreteOperator& H, const SpectralParam& z, const CVec& psi, const SolveOptions& opt) {
  if (!(z.eps > 0.0)) throw Error("solve: Dirichlet truncation needs eps > 0; use the radiation solver at eps = 0");
  if (z.sign != 1 && z.sign != -1) throw Error("solve: sign must be +1 or -1");
  if (psi.size() != H.size()) throw Error("solve: state size does not match operator");
  return BandSolver(shifted(H, z.z()), Boundary::Dirichlet, opt).solve(psi);
}

CVec embed(const RadialGrid& from, const RadialGrid& to, const CVec& psi) {
  if (std::abs(from.spacing - to.spacing) > 1e-9 * from.spacing || to.size() < from.size())
    throw Error("embed: target grid must share the spacing and be larger");
  const Eigen::Index offset = from.dim == 1 ? (to.size() - from.size()) / 2 : 0;
  CVec out = CVec::Zero(to.size());
  out.segment(offset, from.size()) = psi;
  return out;
}

namespace {

CVec restrict_to(const RadialGrid& from, const RadialGrid& to, const CVec& u) {
  const Eigen::Index offset = to.dim == 1 ? (from.size() - to.size()) / 2 : 0;
  return u.segment(offset, to.size());
}

}  // namespace

double truncation_audit(const PotentialModel& pot, const RadialGrid& g, const SpectralParam& z, const CVec& psi,
                        const CVec& u) {
  const RadialGrid big = build_grid_spacing(g.dim, 2.0 * g.extent, g.spacing);
  const DiscreteOperator Hb = assemble_H(big, pot);
  const SolveResult rb = solve(Hb, z, embed(g, big, psi));
  if (rb.failed) return std::numeric_limits<double>::infinity();
  const CVec ub = restrict_to(big, g, rb.u);
  const double base = besov_star_within(g, u, 0.5 * g.extent);
  const double diff = besov_star_within(g, ub - u, 0.5 * g.extent);
  return base > 0.0 ? diff / base : diff;
}

SweepRecord eps_sweep(const PotentialModel& pot, const RadialGrid& g, double lambda, int sign, const CVec& psi,
                      const std::vector<double>& eps_list, const SweepOptions& opt) {
  if (eps_list.empty()) throw Error("eps_sweep: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw Error("eps_sweep: eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw Error("eps_sweep: eps values must be strictly decreasing");
  }
  SweepRecord rec;
  rec.potential = pot.name;
  rec.lambda = lambda;
  rec.sign = sign;
  rec.rows.resize(eps_list.size());
  std::vector<CVec> states(eps_list.size());
  const DiscreteOperator H = assemble_H(g, pot);
  const DiscreteOperator A = assemble_A(g);
  const double bpsi = dyadic_profile(g, psi).besov;
  const Vec one = Vec::Ones(g.size());
  parallel_for(eps_list.size(), opt.workers, [&](std::size_t i) {
    SweepRow& row = rec.rows[i];
    row.eps = eps_list[i];
    row.besov_psi = bpsi;
    const SolveResult s = solve(H, {lambda, eps_list[i], sign}, psi);
    row.residual = s.residual;
    row.failed = s.failed;
    row.besov_star_u = dyadic_profile(g, s.u).besov_star;
    row.besov_star_Au = dyadic_profile(g, A * s.u).besov_star;
    row.hessian = hessian_form(g, one, s.u);
    row.l2_u = g.norm(s.u);
    const double num = row.besov_star_u * row.besov_star_u + row.besov_star_Au * row.besov_star_Au + row.hessian;
    row.ratio = bpsi > 0.0 ? num / (bpsi * bpsi) : 0.0;
    states[i] = s.u;
  });
  if (opt.audit && bpsi > 0.0) {
    const SpectralParam zs{lambda, eps_list.back(), sign};
    rec.truncation_sensitivity = truncation_audit(pot, g, zs, psi, states.back());
    rec.truncation_limited = !(rec.truncation_sensitivity <= opt.audit_threshold);
    rec.audited = true;
  }
  if (opt.keep_states) rec.states = std::move(states);
  return rec;
}

namespace {

template <typename T, typename Dist>
std::pair<T, double> neville(const std::vector<double>& eps, const std::vector<T>& vals, Dist dist) {
  const std::size_t m = eps.size();
  if (m < 3) throw Refusal("limit_extrapolate: need at least 3 eps points");
  if (vals.size() != m) throw Error("limit_extrapolate: value count does not match eps count");
  // order by decreasing eps so the diagonal uses the smallest eps last
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
  std::vector<double> x(m);
  std::vector<T> p(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = eps[idx[i]];
    p[i] = vals[idx[i]];
  }
  // p[i] after level k holds the interpolant through points i-k..i evaluated at 0
  std::vector<T> diag{p[m - 1]};
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = m - 1; i >= k; --i) {
      const double xi = x[i - k], xj = x[i];
      p[i] = (xi * p[i] - xj * p[i - 1]) / (xi - xj);
      if (i == k) break;
    }
    diag.push_back(p[m - 1]);
  }
  double scale = 0.0;
  for (const T& d : diag) scale = std::max(scale, dist(d, d * 0.0));
  for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, dist(vals[idx[i]], vals[idx[i]] * 0.0));
  // consecutive differences must shrink as eps decreases
  double last_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < m; ++i) {
    const double step = dist(vals[idx[i]], vals[idx[i - 1]]) / (x[i - 1] - x[i]);
    if (step > last_step * 1.5 + 1e-12 * scale) {
      std::ostringstream os;
      os << "limit_extrapolate: eps dependence is not settling (difference quotient " << last_step << " then "
         << step << ")";
      throw Refusal(os.str());
    }
    last_step = step;
  }
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < diag.size(); ++k) {
    const double d = dist(diag[k], diag[k - 1]);
    if (d > prev + 1e-12 * scale) {
      std::ostringstream os;
      os << "limit_extrapolate: corrections do not shrink (" << prev << " then " << d
         << "); eps dependence is not in the asymptotic regime";
      throw Refusal(os.str());
    }
    prev = d;
  }
  return {diag.back(), dist(diag.back(), diag[diag.size() - 2])};
}

}  // namespace

Extrapolation limit_extrapolate(const std::vector<double>& eps, const std::vector<double>& values) {
  if (values.size() == eps.size() && values.size() >= 3) {
    std::vector<std::size_t> idx(eps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
    int up = 0, down = 0;
    for (std::size_t i = 1; i < idx.size(); ++i) {
      const double d = values[idx[i]] - values[idx[i - 1]];
      up += d > 0.0;
      down += d < 0.0;
    }
    if (up > 0 && down > 0) throw Refusal("limit_extrapolate: field is not monotone in eps");
  }
  auto [v, e] = neville(eps, values, [](double a, double b) { return std::abs(a - b); });
  return {v, e};
}

VectorExtrapolation limit_extrapolate(const std::vector<double>& eps, const std::vector<CVec>& values) {
  auto [v, e] = neville(eps, values, [](const CVec& a, const CVec& b) { return (a - b).cwiseAbs().maxCoeff(); });
  return {v, e};
}

Extrapolation limit_extrapolate(const SweepRecord& sweep, const std::string& field) {
  std::vector<double> eps, vals;
  for (const SweepRow& r : sweep.rows) {
    eps.push_back(r.eps);
    if (field == "besov_star_u") vals.push_back(r.besov_star_u);
    else if (field == "besov_star_Au") vals.push_back(r.besov_star_Au);
    else if (field == "hessian") vals.push_back(r.hessian);
    else if (field == "l2_u") vals.push_back(r.l2_u);
    else if (field == "ratio") vals.push_back(r.ratio);
    else if (auto it = r.extra.find(field); it != r.extra.end()) vals.push_back(it->second);
    else throw Error("limit_extrapolate: unknown field '" + field + "'");
  }
  return limit_extrapolate(eps, vals);
}

}  // namespace lapnum
