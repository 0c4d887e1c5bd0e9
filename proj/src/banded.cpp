#include "banded.hpp"

#include <algorithm>
#include <cmath>

#include "ckn/params.hpp"

extern "C" {
void dpbtrf_(char* uplo, int* n, int* kd, double* ab, int* ldab, int* info);
void dpbtrs_(char* uplo, int* n, int* kd, int* nrhs, double* ab, int* ldab, double* b, int* ldb,
             int* info);
void dpbcon_(char* uplo, int* n, int* kd, double* ab, int* ldab, double* anorm, double* rcond,
             double* work, int* iwork, int* info);
void dgbtrf_(int* m, int* n, int* kl, int* ku, double* ab, int* ldab, int* ipiv, int* info);
void dgbtrs_(char* trans, int* n, int* kl, int* ku, int* nrhs, double* ab, int* ldab, int* ipiv,
             double* b, int* ldb, int* info);
void dgbcon_(char* norm, int* n, int* kl, int* ku, double* ab, int* ldab, int* ipiv, double* anorm,
             double* rcond, double* work, int* iwork, int* info);
}

namespace ckn::detail {

double SymBand::get(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > kd || i < 0 || j < 0 || i >= n) return 0.0;
  return ab(i - j, j);
}

void SymBand::add(int i, int j, double v) { ab(i - j, j) += v; }

void SymBand::add_diagonal(const Eigen::VectorXd& d) { ab.row(0) += d.transpose(); }

Eigen::VectorXd SymBand::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = ab.row(0).transpose().cwiseProduct(x);
  for (int k = 1; k <= kd; ++k) {
    const int m = n - k;
    if (m <= 0) break;
    // A(j+k, j) = ab(k, j)
    y.segment(k, m) += ab.row(k).head(m).transpose().cwiseProduct(x.head(m));
    y.head(m) += ab.row(k).head(m).transpose().cwiseProduct(x.segment(k, m));
  }
  return y;
}

double SymBand::norm1() const {
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = std::max(0, j - kd); i <= std::min(n - 1, j + kd); ++i) s += std::abs(get(i, j));
    best = std::max(best, s);
  }
  return best;
}

SymBand band_from_stencil(int n, const std::vector<double>& st, double scale) {
  const int kd = static_cast<int>(st.size() / 2);
  SymBand a(n, kd);
  for (int k = 0; k <= kd; ++k)
    for (int j = 0; j + k < n; ++j) a.ab(k, j) = scale * st[kd + k];
  return a;
}

namespace {

template <int Sign>
SymBand parity_reduce(const SymBand& a) {
  const int c = (a.n - 1) / 2;
  const int first = Sign > 0 ? 0 : 1;
  const int m = c + 1 - first;
  SymBand r(m, a.kd);
  for (int k = first; k <= c; ++k) {
    for (int l = std::max(first, k - a.kd); l <= k; ++l) {
      double v;
      if (k == 0 && l == 0) {
        v = a.get(c, c);
      } else if (l == 0) {
        v = a.get(c + k, c) + a.get(c - k, c);
      } else {
        v = a.get(c + k, c + l) + a.get(c - k, c - l) +
            Sign * (a.get(c + k, c - l) + a.get(c - k, c + l));
      }
      r.ab(k - l, l - first) = v;
    }
  }
  return r;
}

}  // namespace

SymBand even_reduce(const SymBand& a) { return parity_reduce<1>(a); }
SymBand odd_reduce(const SymBand& a) { return parity_reduce<-1>(a); }

Eigen::VectorXd even_restrict(const Eigen::VectorXd& x) {
  const int c = (static_cast<int>(x.size()) - 1) / 2;
  Eigen::VectorXd y(c + 1);
  y(0) = x(c);
  for (int k = 1; k <= c; ++k) y(k) = x(c + k) + x(c - k);
  return y;
}

Eigen::VectorXd odd_restrict(const Eigen::VectorXd& x) {
  const int c = (static_cast<int>(x.size()) - 1) / 2;
  Eigen::VectorXd y(c);
  for (int k = 1; k <= c; ++k) y(k - 1) = x(c + k) - x(c - k);
  return y;
}

Eigen::VectorXd even_extend(const Eigen::VectorXd& y, int n) {
  const int c = (n - 1) / 2;
  Eigen::VectorXd x(n);
  x(c) = y(0);
  for (int k = 1; k <= c; ++k) x(c + k) = x(c - k) = y(k);
  return x;
}

Eigen::VectorXd odd_extend(const Eigen::VectorXd& y, int n) {
  const int c = (n - 1) / 2;
  Eigen::VectorXd x(n);
  x(c) = 0.0;
  for (int k = 1; k <= c; ++k) {
    x(c + k) = y(k - 1);
    x(c - k) = -y(k - 1);
  }
  return x;
}

Eigen::VectorXd even_mass(const Eigen::VectorXd& d) {
  const int c = (static_cast<int>(d.size()) - 1) / 2;
  Eigen::VectorXd m(c + 1);
  m(0) = d(c);
  for (int k = 1; k <= c; ++k) m(k) = d(c + k) + d(c - k);
  return m;
}

Eigen::VectorXd odd_mass(const Eigen::VectorXd& d) {
  const int c = (static_cast<int>(d.size()) - 1) / 2;
  Eigen::VectorXd m(c);
  for (int k = 1; k <= c; ++k) m(k - 1) = d(c + k) + d(c - k);
  return m;
}

BandCholesky::BandCholesky(const SymBand& a) : n_(a.n), kd_(a.kd), f_(a.ab) {
  char uplo = 'L';
  int ldab = kd_ + 1;
  dpbtrf_(&uplo, &n_, &kd_, f_.data(), &ldab, &info_);
  if (info_ != 0) return;
  double anorm = a.norm1();
  std::vector<double> work(3 * n_);
  std::vector<int> iwork(n_);
  int info2 = 0;
  dpbcon_(&uplo, &n_, &kd_, f_.data(), &ldab, &anorm, &rcond_, work.data(), iwork.data(), &info2);
}

Eigen::VectorXd BandCholesky::solve(const Eigen::VectorXd& b) const {
  Eigen::MatrixXd x = b;
  return solve(x).col(0);
}

Eigen::MatrixXd BandCholesky::solve(const Eigen::MatrixXd& b) const {
  if (info_ != 0) throw NumericalError("BandCholesky: matrix is not positive definite");
  Eigen::MatrixXd x = b;
  char uplo = 'L';
  int n = n_, kd = kd_, ldab = kd_ + 1, nrhs = static_cast<int>(x.cols()), ldb = n_, info = 0;
  dpbtrs_(&uplo, &n, &kd, &nrhs, const_cast<double*>(f_.data()), &ldab, x.data(), &ldb, &info);
  return x;
}

BandLU::BandLU(const SymBand& a) : n_(a.n), kd_(a.kd) {
  const int ldab = 3 * kd_ + 1;
  f_ = Eigen::MatrixXd::Zero(ldab, n_);
  // general band layout: A(i,j) at row kl + ku + i - j
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - kd_); i <= std::min(n_ - 1, j + kd_); ++i)
      f_(2 * kd_ + i - j, j) = a.get(i, j);
  ipiv_.assign(n_, 0);
  int m = n_, kl = kd_, ku = kd_, ld = ldab;
  dgbtrf_(&m, &n_, &kl, &ku, f_.data(), &ld, ipiv_.data(), &info_);
  if (info_ != 0) return;
  char norm = '1';
  double anorm = a.norm1();
  std::vector<double> work(3 * n_);
  std::vector<int> iwork(n_);
  int info2 = 0;
  dgbcon_(&norm, &n_, &kl, &ku, f_.data(), &ld, ipiv_.data(), &anorm, &rcond_, work.data(),
          iwork.data(), &info2);
}

Eigen::VectorXd BandLU::solve(const Eigen::VectorXd& b) const {
  if (info_ != 0) throw NumericalError("BandLU: matrix is singular");
  Eigen::VectorXd x = b;
  char trans = 'N';
  int n = n_, kl = kd_, ku = kd_, nrhs = 1, ld = 3 * kd_ + 1, ldb = n_, info = 0;
  dgbtrs_(&trans, &n, &kl, &ku, &nrhs, const_cast<double*>(f_.data()), &ld,
          const_cast<int*>(ipiv_.data()), x.data(), &ldb, &info);
  return x;
}

double smallest_abs_eigenvalue(const SymBand& a, int iters) {
  BandLU lu(a);
  if (!lu.ok()) return 0.0;
  Eigen::VectorXd x(a.n);
  for (int i = 0; i < a.n; ++i) x(i) = 1.0 + 0.37 * std::sin(1.3 * i + 0.2);
  x.normalize();
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    const double ny = y.norm();
    if (!(ny > 0.0) || !std::isfinite(ny)) return 0.0;
    x = y / ny;
    const double rq = x.dot(a.multiply(x));
    if (it > 5 && std::abs(rq - lam) <= 1e-10 * std::abs(rq)) {
      lam = rq;
      break;
    }
    lam = rq;
  }
  return std::abs(lam);
}

}  // namespace ckn::detail
