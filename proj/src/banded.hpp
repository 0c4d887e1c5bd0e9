#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ckn::detail {

// Symmetric band matrix, lower storage: ab(i - j, j) = A(i, j) for 0 <= i - j <= kd.
struct SymBand {
  int n = 0;
  int kd = 0;
  Eigen::MatrixXd ab;

  SymBand() = default;
  SymBand(int n_, int kd_) : n(n_), kd(kd_), ab(Eigen::MatrixXd::Zero(kd_ + 1, n_)) {}

  double get(int i, int j) const;
  void add(int i, int j, double v);  // i >= j
  void add_diagonal(const Eigen::VectorXd& d);
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double norm1() const;
};

// Toeplitz stencil with zero extension; st has 2*kd+1 entries, centre at kd.
SymBand band_from_stencil(int n, const std::vector<double>& st, double scale);

// Restriction to vectors symmetric / antisymmetric about the middle index.
// even basis: e_0 = u_c, e_k = u_{c+k} + u_{c-k};  odd basis: o_k = u_{c+k} - u_{c-k}, k >= 1
SymBand even_reduce(const SymBand& a);
SymBand odd_reduce(const SymBand& a);
Eigen::VectorXd even_restrict(const Eigen::VectorXd& x);   // E^T x
Eigen::VectorXd odd_restrict(const Eigen::VectorXd& x);    // O^T x
Eigen::VectorXd even_extend(const Eigen::VectorXd& y, int n);  // E y
Eigen::VectorXd odd_extend(const Eigen::VectorXd& y, int n);   // O y
Eigen::VectorXd even_mass(const Eigen::VectorXd& diag);    // diag(E^T D E)
Eigen::VectorXd odd_mass(const Eigen::VectorXd& diag);

class BandCholesky {
 public:
  BandCholesky() = default;
  explicit BandCholesky(const SymBand& a);
  bool ok() const { return info_ == 0; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  double rcond() const { return rcond_; }
  int size() const { return n_; }

 private:
  int n_ = 0, kd_ = 0, info_ = -1;
  double rcond_ = 0.0;
  Eigen::MatrixXd f_;
};

class BandLU {
 public:
  BandLU() = default;
  explicit BandLU(const SymBand& a);
  bool ok() const { return info_ == 0; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  double rcond() const { return rcond_; }

 private:
  int n_ = 0, kd_ = 0, info_ = -1;
  double rcond_ = 0.0;
  Eigen::MatrixXd f_;
  std::vector<int> ipiv_;
};

// Smallest |eigenvalue| of a symmetric band matrix by inverse iteration.
double smallest_abs_eigenvalue(const SymBand& a, int iters = 60);

}  // namespace ckn::detail
