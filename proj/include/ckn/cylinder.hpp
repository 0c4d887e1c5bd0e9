#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ckn/params.hpp"

namespace ckn {

namespace detail {
class BandCholesky;
}

/// Uniform axial grid on [-S, S].
struct Grid {
  double S = 0.0;
  int N = 0;
  double h = 0.0;

  /// Throws std::invalid_argument unless N is odd, N >= 129 and h <= 0.05.
  static Grid make(double S, int N);
  /// S = max(30/sqrt(Lambda), acosh(e^{15(p-2)})/alpha); N >= 4097 with h <= 0.05.
  static Grid default_for(const CknParams& prm);

  double s(int i) const { return -S + i * h; }
  int center() const { return (N - 1) / 2; }
  Eigen::VectorXd nodes() const;
  Grid refined() const { return make(S, 2 * N - 1); }
};

/// Gauss quadrature in x = theta_n for the measure of S^{n-1}, plus the
/// L2-normalized zonal harmonics Y_0..Y_L at the nodes.
struct SphereQuad {
  int n = 0;
  int M = 0;
  int L = 0;
  Eigen::VectorXd x;  // nodes
  Eigen::VectorXd w;  // weights, sum = |S^{n-1}|
  Eigen::MatrixXd Y;  // M x (L+1)

  static SphereQuad make(int n, int M, int L);
};

/// int_{S^{n-1}} theta_n^{2k}
double sphere_moment(int n, int k);

struct DiscOptions {
  int N = 0;       // 0: default
  double S = 0.0;  // 0: default
  int L = 8;
  int M = 64;
};

/// Everything that depends only on (params, grid, L, M): nodes, the bubble,
/// the axial stencil and the factored H1 operators per degree.
class Discretization {
 public:
  static std::shared_ptr<const Discretization> make(const CknParams& prm,
                                                    const DiscOptions& opt = {});
  ~Discretization();

  const CknParams& params() const { return prm_; }
  const Grid& grid() const { return grid_; }
  const SphereQuad& quad() const { return quad_; }
  int L() const { return quad_.L; }
  int N() const { return grid_.N; }
  double h() const { return grid_.h; }
  const Eigen::VectorXd& s() const { return s_; }
  const Eigen::VectorXd& V0() const { return V0_; }
  const DiscOptions& options() const { return opt_; }

  /// lambda_ell = ell (ell + n - 2)
  double lambda(int ell) const { return ell * (ell + prm_.n - 2.0); }

  Eigen::VectorXd bubble(double t) const;
  Eigen::VectorXd bubble_ds(double t) const;

  /// -d^2/ds^2 (8th order, zero extension)
  Eigen::VectorXd apply_K(const Eigen::VectorXd& v) const;
  /// (K + lambda_ell + Lambda) v
  Eigen::VectorXd apply_A(int ell, const Eigen::VectorXd& v) const;
  /// (K + lambda_ell + Lambda)^{-1} f
  Eigen::VectorXd solve_A(int ell, const Eigen::VectorXd& f) const;
  /// Reciprocal condition estimate of the degree-ell operator.
  double rcond_A(int ell) const;

  /// Stencil of -h^2 d^2/ds^2, offsets -4..4.
  const std::vector<double>& stencil() const { return stencil_; }

  std::string signature() const;
  std::shared_ptr<const Discretization> refined() const;
  std::shared_ptr<const Discretization> with_L(int L) const;

 private:
  Discretization() = default;
  CknParams prm_;
  DiscOptions opt_;
  Grid grid_;
  SphereQuad quad_;
  Eigen::VectorXd s_, V0_;
  std::vector<double> stencil_;
  std::vector<std::shared_ptr<detail::BandCholesky>> chol_;
};

using DiscPtr = std::shared_ptr<const Discretization>;

/// Axisymmetric field f(s, theta) = sum_ell f_ell(s) Y_ell(theta_n).
class ZonalField {
 public:
  explicit ZonalField(DiscPtr d);
  ZonalField(DiscPtr d, Eigen::MatrixXd profiles);

  /// g(s) constant on the sphere.
  static ZonalField radial(DiscPtr d, const Eigen::VectorXd& g);
  static ZonalField from_profile(DiscPtr d, int ell, const Eigen::VectorXd& g);
  /// g(s) * a(theta_n), projected onto degrees <= L.
  static ZonalField separable(DiscPtr d, const Eigen::VectorXd& g,
                              const std::function<double(double)>& a);
  static ZonalField from_function(DiscPtr d, const std::function<double(double, double)>& f);
  static ZonalField bubble(DiscPtr d, double t = 0.0);

  const DiscPtr& disc() const { return d_; }
  int L() const { return static_cast<int>(P_.cols()) - 1; }
  const Eigen::MatrixXd& profiles() const { return P_; }
  Eigen::MatrixXd& profiles() { return P_; }
  Eigen::VectorXd profile(int ell) const { return P_.col(ell); }

  /// Values on the tensor nodes, N x M.
  Eigen::MatrixXd synthesize() const;
  /// Inverse of synthesize (angular quadrature projection).
  static ZonalField project(DiscPtr d, const Eigen::MatrixXd& values);

  bool same_discretization(const ZonalField& o) const;

  ZonalField& operator+=(const ZonalField& o);
  ZonalField& operator-=(const ZonalField& o);
  ZonalField& operator*=(double c);
  friend ZonalField operator+(ZonalField a, const ZonalField& b) { return a += b; }
  friend ZonalField operator-(ZonalField a, const ZonalField& b) { return a -= b; }
  friend ZonalField operator*(double c, ZonalField a) { return a *= c; }
  friend ZonalField operator*(ZonalField a, double c) { return a *= c; }

 private:
  DiscPtr d_;
  Eigen::MatrixXd P_;  // N x (L+1)
};

double h1_inner(const ZonalField& f, const ZonalField& g);
double h1_norm(const ZonalField& f);
/// Plain L2 pairing sum_ell int f_ell g_ell ds.
double l2_inner(const ZonalField& f, const ZonalField& g);
double lp_norm(const ZonalField& f, double q);

struct MapResult {
  ZonalField field;
  double tail_fraction;  // energy discarded by the degree-L projection, relative
};

MapResult pointwise_map_diag(const ZonalField& f, const std::function<double(double)>& map);
ZonalField pointwise_map(const ZonalField& f, const std::function<double(double)>& map);

/// Text layout:
///   n,p,L,N,S
///   <n>,<p>,<L>,<N>,<S>
///   L+1 lines, line ell holds f_ell at the N grid nodes
void write_csv(std::ostream& os, const ZonalField& f);
/// Reads a field written by write_csv; M defaults to 64.
ZonalField read_csv(std::istream& is, int M = 64);

}  // namespace ckn
