#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ckn {

/// Raised when a numerical procedure cannot deliver a trustworthy result
/// (singular operator, non-convergence, Gamma pole, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Critical Sobolev exponent 2n/(n-2); +infinity for n = 2.
double critical_exponent(int n);

/// Surface measure |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Parameters of the weighted problem restricted to the Felli-Schneider curve.
///
/// Everything is charted by (p, n); the weights (a, b), the mass Lambda and
/// the bubble constants alpha, beta are derived quantities.
struct CknParams {
  int n = 3;
  double p = 4.0;
  double a = 0.0;
  double b = 0.0;
  double Lambda = 0.0;
  double alpha = 0.0;  // decay rate of the bubble profile
  double beta = 0.0;   // height of the bubble profile

  /// Unique bundle on the curve for exponent p in (2, 2*) and n >= 2.
  static CknParams from_pn(double p, int n);

  double sqrt_lambda() const { return std::sqrt(Lambda); }

  /// |S^{n-1}|
  double sphere() const { return sphere_area(n); }

  /// Short human-readable tag, e.g. "n=3,p=4".
  std::string label() const;
};

/// The curve b_FS(a) for a < 0.
double felli_schneider_b(double a, int n);

/// Bubble V_t(s) = beta cosh(alpha (s - t))^{-2/(p-2)}, evaluated in log form
/// so it stays finite (and underflows gracefully) far from the center.
double bubble_value(const CknParams& prm, double s, double t = 0.0);

/// log V_t(s)
double bubble_log(const CknParams& prm, double s, double t = 0.0);

/// d/ds V_t(s) = -sqrt(Lambda) tanh(alpha (s - t)) V_t(s)
double bubble_derivative(const CknParams& prm, double s, double t = 0.0);

/// Radial profile U_lambda(r) on R^n whose cylinder image is V_{ln lambda}.
double radial_bubble(const CknParams& prm, double r, double lambda);

}  // namespace ckn
