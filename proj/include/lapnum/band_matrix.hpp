#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lapnum {

/// Square banded matrix in LAPACK-style column storage:
/// entry (i, j) lives at data(ku + i - j, j) for -ku <= i - j <= kl.
template <typename Scalar>
class BandMatrix {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BandMatrix() = default;
  BandMatrix(Eigen::Index n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), data_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(kl + ku + 1, n)) {}

  Eigen::Index size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  bool in_band(Eigen::Index i, Eigen::Index j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
  }

  Scalar operator()(Eigen::Index i, Eigen::Index j) const {
    return in_band(i, j) ? data_(ku_ + i - j, j) : Scalar(0);
  }

  Scalar& coeffRef(Eigen::Index i, Eigen::Index j) {
    if (!in_band(i, j)) throw std::out_of_range("BandMatrix: entry outside band");
    return data_(ku_ + i - j, j);
  }

  Vector diagonal() const {
    Vector d(n_);
    for (Eigen::Index i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
  }

  template <typename Derived>
  Vector operator*(const Eigen::MatrixBase<Derived>& x) const {
    Vector y = Vector::Zero(n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      const Eigen::Index i0 = std::max<Eigen::Index>(0, j - ku_);
      const Eigen::Index i1 = std::min<Eigen::Index>(n_ - 1, j + kl_);
      const Scalar xj = x[j];
      for (Eigen::Index i = i0; i <= i1; ++i) y[i] += data_(ku_ + i - j, j) * xj;
    }
    return y;
  }

  BandMatrix adjoint() const {
    BandMatrix t(n_, ku_, kl_);
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - ku_); i <= std::min<Eigen::Index>(n_ - 1, j + kl_); ++i)
        t.coeffRef(j, i) = conj_(data_(ku_ + i - j, j));
    return t;
  }

  BandMatrix transpose() const {
    BandMatrix t(n_, ku_, kl_);
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - ku_); i <= std::min<Eigen::Index>(n_ - 1, j + kl_); ++i)
        t.coeffRef(j, i) = data_(ku_ + i - j, j);
    return t;
  }

  BandMatrix operator*(const BandMatrix& other) const {
    check_size(other);
    BandMatrix out(n_, kl_ + other.kl_, ku_ + other.ku_);
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index k = std::max<Eigen::Index>(0, j - other.ku_); k <= std::min<Eigen::Index>(n_ - 1, j + other.kl_); ++k) {
        const Scalar b = other(k, j);
        if (b == Scalar(0)) continue;
        for (Eigen::Index i = std::max<Eigen::Index>(0, k - ku_); i <= std::min<Eigen::Index>(n_ - 1, k + kl_); ++i)
          out.coeffRef(i, j) += (*this)(i, k) * b;
      }
    return out;
  }

  BandMatrix operator+(const BandMatrix& other) const {
    check_size(other);
    BandMatrix out(n_, std::max(kl_, other.kl_), std::max(ku_, other.ku_));
    out.accumulate(*this, Scalar(1));
    out.accumulate(other, Scalar(1));
    return out;
  }

  BandMatrix operator-(const BandMatrix& other) const {
    check_size(other);
    BandMatrix out(n_, std::max(kl_, other.kl_), std::max(ku_, other.ku_));
    out.accumulate(*this, Scalar(1));
    out.accumulate(other, Scalar(-1));
    return out;
  }

  BandMatrix operator*(Scalar s) const {
    BandMatrix out = *this;
    out.data_ *= s;
    return out;
  }

  /// this += s * other; other's band must fit inside this band.
  void accumulate(const BandMatrix& other, Scalar s) {
    if (other.kl_ > kl_ || other.ku_ > ku_) throw std::invalid_argument("BandMatrix: band too narrow to accumulate");
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - other.ku_); i <= std::min<Eigen::Index>(n_ - 1, j + other.kl_); ++i)
        coeffRef(i, j) += s * other(i, j);
  }

  void add_diagonal(const Vector& d) {
    for (Eigen::Index i = 0; i < n_; ++i) coeffRef(i, i) += d[i];
  }

  /// Largest |M(i,j) - conj(M(j,i))| over rows/cols in [first, last].
  double hermitian_defect(Eigen::Index first, Eigen::Index last) const {
    double worst = 0.0;
    const int w = std::max(kl_, ku_);
    for (Eigen::Index i = first; i <= last; ++i)
      for (Eigen::Index j = std::max(first, i - w); j <= std::min(last, i + w); ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - conj_((*this)(j, i))));
    return worst;
  }

  double max_abs() const { return data_.cwiseAbs().maxCoeff(); }

  double norm1() const {
    double best = 0.0;
    for (Eigen::Index j = 0; j < n_; ++j) best = std::max(best, data_.col(j).cwiseAbs().sum());
    return best;
  }

 private:
  static Scalar conj_(Scalar v) {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) return std::conj(v);
    else return v;
  }
  void check_size(const BandMatrix& other) const {
    if (other.n_ != n_) throw std::invalid_argument("BandMatrix: size mismatch");
  }

  Eigen::Index n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> data_;
};

/// LU factorization with partial pivoting of a banded matrix (gbtrf layout:
/// U carries kl + ku superdiagonals after fill-in).
template <typename Scalar>
class BandLU {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BandLU() = default;
  explicit BandLU(const BandMatrix<Scalar>& a) { compute(a); }

  void compute(const BandMatrix<Scalar>& a) {
    n_ = a.size();
    kl_ = a.lower();
    ku_ = a.upper();
    kv_ = kl_ + ku_;
    ab_.setZero(2 * kl_ + ku_ + 1, n_);
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - ku_); i <= std::min<Eigen::Index>(n_ - 1, j + kl_); ++i)
        at(i, j) = a(i, j);
    piv_.assign(static_cast<std::size_t>(n_), 0);
    singular_ = false;
    norm1_ = a.norm1();

    for (Eigen::Index j = 0; j < n_; ++j) {
      const Eigen::Index last_row = std::min<Eigen::Index>(n_ - 1, j + kl_);
      Eigen::Index p = j;
      double best = std::abs(at(j, j));
      for (Eigen::Index i = j + 1; i <= last_row; ++i)
        if (std::abs(at(i, j)) > best) { best = std::abs(at(i, j)); p = i; }
      piv_[static_cast<std::size_t>(j)] = p;
      if (best == 0.0) { singular_ = true; continue; }
      const Eigen::Index last_col = std::min<Eigen::Index>(n_ - 1, j + kv_);
      if (p != j)
        for (Eigen::Index c = j; c <= last_col; ++c) std::swap(at(p, c), at(j, c));
      const Scalar pivot = at(j, j);
      for (Eigen::Index i = j + 1; i <= last_row; ++i) {
        const Scalar l = at(i, j) / pivot;
        at(i, j) = l;
        if (l == Scalar(0)) continue;
        for (Eigen::Index c = j + 1; c <= last_col; ++c) at(i, c) -= l * at(j, c);
      }
    }
  }

  bool singular() const { return singular_; }
  Eigen::Index size() const { return n_; }

  Vector solve(const Vector& b) const {
    Vector x = b;
    for (Eigen::Index j = 0; j < n_; ++j) {
      const Eigen::Index p = piv_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(x[p], x[j]);
      const Eigen::Index last_row = std::min<Eigen::Index>(n_ - 1, j + kl_);
      for (Eigen::Index i = j + 1; i <= last_row; ++i) x[i] -= at(i, j) * x[j];
    }
    for (Eigen::Index j = n_ - 1; j >= 0; --j) {
      x[j] /= at(j, j);
      const Scalar xj = x[j];
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - kv_); i < j; ++i) x[i] -= at(i, j) * xj;
    }
    return x;
  }

  /// Solves M^H x = b with the factors of M.
  Vector solve_adjoint(const Vector& b) const {
    Vector x = b;
    for (Eigen::Index j = 0; j < n_; ++j) {
      Scalar s = x[j];
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - kv_); i < j; ++i) s -= conj_(at(i, j)) * x[i];
      x[j] = s / conj_(at(j, j));
    }
    for (Eigen::Index j = n_ - 1; j >= 0; --j) {
      const Eigen::Index last_row = std::min<Eigen::Index>(n_ - 1, j + kl_);
      Scalar s = x[j];
      for (Eigen::Index i = j + 1; i <= last_row; ++i) s -= conj_(at(i, j)) * x[i];
      x[j] = s;
      const Eigen::Index p = piv_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(x[p], x[j]);
    }
    return x;
  }

  /// Hager-Higham estimate of the 1-norm condition number.
  double condition_estimate() const {
    if (singular_) return std::numeric_limits<double>::infinity();
    if (n_ == 0) return 0.0;
    Vector x = Vector::Constant(n_, Scalar(1.0 / static_cast<double>(n_)));
    double estimate = 0.0;
    Eigen::Index last_j = -1;
    for (int iter = 0; iter < 5; ++iter) {
      const Vector y = solve(x);
      estimate = y.cwiseAbs().sum();
      Vector xi(n_);
      for (Eigen::Index i = 0; i < n_; ++i) {
        const double m = std::abs(y[i]);
        xi[i] = m > 0 ? Scalar(y[i] / m) : Scalar(1);
      }
      const Vector z = solve_adjoint(xi);
      Eigen::Index j = 0;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      double zx = 0.0;
      for (Eigen::Index i = 0; i < n_; ++i) zx += std::real(conj_(z[i]) * x[i]);
      if (zmax <= zx || j == last_j) break;
      x.setZero();
      x[j] = Scalar(1);
      last_j = j;
    }
    return norm1_ * estimate;
  }

 private:
  static Scalar conj_(Scalar v) {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) return std::conj(v);
    else return v;
  }
  Scalar& at(Eigen::Index i, Eigen::Index j) { return ab_(kv_ + i - j, j); }
  const Scalar& at(Eigen::Index i, Eigen::Index j) const { return ab_(kv_ + i - j, j); }

  Eigen::Index n_ = 0;
  int kl_ = 0, ku_ = 0, kv_ = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ab_;
  std::vector<Eigen::Index> piv_;
  bool singular_ = false;
  double norm1_ = 0.0;
};

using ComplexBand = BandMatrix<std::complex<double>>;
using ComplexBandLU = BandLU<std::complex<double>>;

}  // namespace lapnum
