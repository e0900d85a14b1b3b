#include "lapnum/suites.hpp"

#include "lapnum/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lapnum {

namespace {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// phi'' = (Q(x) - lambda) phi with Q sampled at half steps: q[2i] at x0 + i h, q[2i+1] at the midpoint.
struct Profile {
  double x0 = 0.0, h = 0.0;
  std::vector<double> q;
  std::size_t steps() const { return (q.size() - 1) / 2; }
};

Profile sample_profile(const PotentialModel& pot, int dim, double x0, double x1, double step) {
  Profile p;
  p.x0 = x0;
  const auto n = static_cast<std::size_t>(std::ceil((x1 - x0) / step));
  p.h = (x1 - x0) / static_cast<double>(n);
  p.q.resize(2 * n + 1);
  const double cent = 0.25 * (dim - 1) * (dim - 3);
  for (std::size_t i = 0; i < p.q.size(); ++i) {
    const double x = x0 + 0.5 * p.h * static_cast<double>(i);
    const double r = std::sqrt(1.0 + x * x);
    p.q[i] = pot.total(r) + (dim > 1 ? cent / (x * x) : 0.0);
  }
  return p;
}

// One RK4 step from node i (forward when dir = +1, backward when dir = -1).
Vec2 rk4(const Profile& p, std::size_t i, int dir, double lambda, const Vec2& y) {
  const double h = dir * p.h;
  const std::size_t a = 2 * i, m = dir > 0 ? 2 * i + 1 : 2 * i - 1, b = dir > 0 ? 2 * i + 2 : 2 * i - 2;
  auto f = [&](std::size_t k, const Vec2& s) { return Vec2(s[1], (p.q[k] - lambda) * s[0]); };
  const Vec2 k1 = f(a, y), k2 = f(m, y + 0.5 * h * k1), k3 = f(m, y + 0.5 * h * k2), k4 = f(b, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Transfer matrix over the whole profile as exp(log_scale) * M with M rescaled every chunk.
Mat2 transfer(const Profile& p, double lambda, double& log_scale, bool& failed) {
  Mat2 M = Mat2::Identity();
  log_scale = 0.0;
  failed = false;
  const std::size_t n = p.steps(), chunk = 256;
  for (std::size_t i = 0; i < n; ++i) {
    M.col(0) = rk4(p, i, 1, lambda, M.col(0));
    M.col(1) = rk4(p, i, 1, lambda, M.col(1));
    if ((i + 1) % chunk == 0 || i + 1 == n) {
      const double s = M.cwiseAbs().maxCoeff();
      if (!std::isfinite(s) || s == 0.0) {
        failed = true;
        return M;
      }
      M /= s;
      log_scale += std::log(s);
    }
  }
  return M;
}

// Integrates y from node `from` to node `to`, renormalising so that only the direction is kept.
Vec2 shoot(const Profile& p, std::size_t from, std::size_t to, double lambda, Vec2 y) {
  const int dir = to > from ? 1 : -1;
  for (std::size_t i = from; i != to; i += dir) {
    y = rk4(p, i, dir, lambda, y);
    const double s = y.cwiseAbs().maxCoeff();
    if (s > 1e100 || s < 1e-100) y /= s;
  }
  return y;
}

double normalized_wronskian(const Vec2& a, const Vec2& b, double scale) {
  // scale puts phi and phi' on the same footing
  const Vec2 sa(a[0], a[1] / scale), sb(b[0], b[1] / scale);
  return (sa[0] * sb[1] - sa[1] * sb[0]) / (sa.norm() * sb.norm());
}

// Starting states at the inner end: parity pair for d = 1, the regular solution for d >= 2.
std::vector<Vec2> inner_states(int dim, double x_min) {
  if (dim == 1) return {Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  const double k = 0.5 * (dim - 1);
  return {Vec2(std::pow(x_min, k), k * std::pow(x_min, k - 1.0))};
}

std::vector<double> bound_states(const PotentialModel& pot, int dim, double extent) {
  const double x_min = dim == 1 ? 0.0 : 1e-3;
  const Profile p = sample_profile(pot, dim, x_min, extent, 1e-3);
  const std::size_t n = p.steps(), mid = n / 2;
  double vmin = 0.0;
  for (double q : p.q) vmin = std::min(vmin, q);
  if (!(vmin < 0.0)) return {};
  const std::vector<Vec2> starts = inner_states(dim, x_min);
  auto det = [&](double E, std::size_t s) {
    const double kappa = std::sqrt(-E);
    const Vec2 in = shoot(p, 0, mid, E, starts[s]);
    const Vec2 out = shoot(p, n, mid, E, Vec2(1.0, -kappa));
    return normalized_wronskian(in, out, std::max(kappa, 1.0));
  };
  std::vector<double> out;
  const int samples = 400;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    double e_prev = vmin * (1.0 - 1e-9), d_prev = det(e_prev, s);
    for (int i = 1; i <= samples; ++i) {
      const double e = vmin + (0.0 - vmin) * i / (samples + 1.0);
      const double d = det(e, s);
      if (d_prev * d < 0.0) {
        double lo = e_prev, hi = e, dlo = d_prev;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (lo + hi), dm = det(m, s);
          if (dlo * dm <= 0.0) hi = m;
          else {
            lo = m;
            dlo = dm;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
      e_prev = e;
      d_prev = d;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RellichReport rellich_scan(const PotentialModel& pot, int dim, const RellichOptions& opt) {
  if (!(opt.lambda_min > 0.0 && opt.lambda_max > opt.lambda_min && opt.dlambda > 0.0))
    throw Error("rellich_scan: the lambda window must be positive and non-empty");
  if (!(opt.x_start_fraction > 0.0 && opt.x_start_fraction < 1.0))
    throw Error("rellich_scan: x_start_fraction must lie in (0, 1)");
  RellichReport rep;
  const double x0 = opt.x_start_fraction * opt.x_end;
  const Profile p = sample_profile(pot, dim, x0, opt.x_end, opt.step);
  const double span = std::log(opt.x_end / x0);
  const auto m = static_cast<std::size_t>(std::floor((opt.lambda_max - opt.lambda_min) / opt.dlambda + 1e-9)) + 1;
  rep.scan.resize(m);
  std::vector<Mat2> decaying(m);
  parallel_for(m, opt.workers, [&](std::size_t i) {
    RellichPoint& pt = rep.scan[i];
    pt.lambda = opt.lambda_min + opt.dlambda * static_cast<double>(i);
    const double k = std::sqrt(pt.lambda);
    double log_scale = 0.0;
    bool failed = false;
    Mat2 M = transfer(p, pt.lambda, log_scale, failed);
    pt.failed = failed;
    if (failed) return;
    // WKB frame sqrt(k)(phi, phi'/k) with local k turns slowly varying transfer into a rotation
    auto frame = [&](double q) {
      const double kl = pt.lambda > q ? std::sqrt(pt.lambda - q) : k;
      return Mat2(Vec2(std::sqrt(kl), 1.0 / std::sqrt(kl)).asDiagonal());
    };
    const Mat2 S0 = frame(p.q.front()), S1 = frame(p.q.back());
    const Mat2 Ms = S1 * M * S0.inverse();
    Eigen::JacobiSVD<Mat2> svd(Ms, Eigen::ComputeFullV);
    pt.gamma = (log_scale + std::log(svd.singularValues()[0])) / span;
    decaying[i] = S0.inverse() * svd.matrixV();  // column 1: state at x0 shrunk the most
  });

  // Matching: how far the inner-regular solution is from the decaying direction at x0.
  const double x_min = dim == 1 ? 0.0 : 1e-3;
  const Profile inner = sample_profile(pot, dim, x_min, x0, std::min(opt.step, 0.02));
  const std::vector<Vec2> starts = inner_states(dim, x_min);
  auto matching = [&](std::size_t i) {
    const double lambda = rep.scan[i].lambda;
    double best = 1.0;
    for (const Vec2& s : starts) {
      const Vec2 at = shoot(inner, 0, inner.steps(), lambda, s);
      best = std::min(best, std::abs(normalized_wronskian(at, decaying[i].col(1), std::sqrt(lambda))));
    }
    return best;
  };

  for (std::size_t i = 0; i < m;) {
    const RellichPoint& pt = rep.scan[i];
    rep.failures += pt.failed ? 1 : 0;
    rep.max_gamma = std::max(rep.max_gamma, pt.gamma);
    if (pt.failed || pt.gamma <= opt.flag_gamma) {
      ++i;
      continue;
    }
    RellichCandidate c;
    c.lo = pt.lambda;
    std::size_t best = i, j = i;
    double det = 1.0;
    for (; j < m && !rep.scan[j].failed && rep.scan[j].gamma > opt.flag_gamma; ++j) {
      if (rep.scan[j].gamma > rep.scan[best].gamma) best = j;
      rep.max_gamma = std::max(rep.max_gamma, rep.scan[j].gamma);
      det = std::min(det, matching(j));
    }
    c.hi = rep.scan[j - 1].lambda;
    c.lambda = rep.scan[best].lambda;
    c.gamma = rep.scan[best].gamma;
    c.matching = det;
    c.tail = c.gamma > 0.5 ? "B_star_0 (L2 tail)" : "B_star_0";
    rep.candidates.push_back(c);
    i = j;
  }
  if (opt.bound_states) rep.bound_states = bound_states(pot, dim, opt.bound_extent);

  std::ostringstream os;
  os << rep.candidates.size() << " decaying-tail candidate(s) in [" << opt.lambda_min << ", " << opt.lambda_max
     << "], max growth exponent " << rep.max_gamma << " (flag above " << opt.flag_gamma << ")";
  if (rep.failures > 0) os << "; " << rep.failures << " lambda values failed to integrate";
  if (pot.claims_condition1) {
    rep.verdict = pass_if(rep.candidates.empty() && rep.failures == 0);
  } else {
    rep.verdict = Verdict::Informational;
    os << "; potential makes no Condition 1 claim";
  }
  rep.reason = os.str();
  return rep;
}

}  // namespace lapnum
