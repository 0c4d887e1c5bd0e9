#pragma once

#include "ckn/cylinder.hpp"

namespace ckn {

/// Element of H^{-1}, stored by its strong-form samples in the zonal layout.
class Residual {
 public:
  explicit Residual(ZonalField values, double tail_fraction = 0.0)
      : values_(std::move(values)), tail_(tail_fraction) {}
  const ZonalField& values() const { return values_; }
  /// Relative energy of |v|^{p-2}v dropped by the degree-L projection.
  double tail_fraction() const { return tail_; }

 private:
  ZonalField values_;
  double tail_;
};

/// d_s^2 v + Delta_theta v - Lambda v + |v|^{p-2} v
Residual apply_H1(const ZonalField& v);

/// -d_s^2 rho - Delta_theta rho + Lambda rho - (p-1) V_t^{p-2} rho
Residual linearized_apply(const ZonalField& rho, double t);

/// phi with (-d_s^2 - Delta_theta + Lambda) phi = f
ZonalField riesz_solve(const Residual& f);

/// sqrt(<f, riesz_solve(f)>)
double hminus1_norm(const Residual& f);

/// <f, w> = sum_ell int f_ell w_ell ds
double dual_pairing(const Residual& f, const ZonalField& w);

/// Decaying solution of -g'' + c g - (p-1) V_0^{p-2} g = rhs. When rhs has a
/// definite parity in s the solve runs in that symmetry class. Throws
/// NumericalError if the operator (restricted to the class) has an eigenvalue
/// of magnitude <= 1e-8 or the discrete L2 residual exceeds 1e-9.
Eigen::VectorXd bvp_solve(const Discretization& d, int ell, double c, const Eigen::VectorXd& rhs);

struct DecayFit {
  double rate = 0.0;
  int points = 0;
};

/// Least-squares exponential rate of |g| on s > 0 where |g| / max|g| is in [1e-10, 1e-3].
DecayFit fit_decay_rate(const Discretization& d, const Eigen::VectorXd& g);

}  // namespace ckn
