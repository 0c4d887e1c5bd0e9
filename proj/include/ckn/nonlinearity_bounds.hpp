#pragma once

#include <cstdint>

namespace ckn {

// |LHS| / RHS for the three elementary inequalities of f(x) = |x|^{p-2} x.
// Each returns a negative value when RHS vanishes (sample not usable).

/// | f(x+y) - f(x) - f'(x) y |  vs  [p>3] |x|^{p-3} y^2 + |y|^{p-1}
double ineq_first_ratio(double p, double x, double y);
/// | |x+y|^{p-2} - |x|^{p-2} | |x|  vs  |x||y|^{p-2} + |x|^{p-2}|y|  (p>=3),  |xy|^{(p-1)/2}  (p<3)
double ineq_second_ratio(double p, double x, double y);
/// third-order Taylor remainder of f at x  vs  |x|^{p-5} y^4, for |y| <= |x|/2
double ineq_third_ratio(double p, double x, double y);

struct ElementaryConstants {
  double p = 0.0;
  int samples = 0;
  double first = 0.0, second = 0.0, third = 0.0;           // sup over all samples
  double first_10 = 0.0, second_10 = 0.0, third_10 = 0.0;  // sup over the first tenth
  /// finite and the full sup exceeds the first-tenth sup by at most `growth`
  bool stable(double growth = 2.0) const;
};

/// Random (x, y) pairs: |x| log-uniform in [e^-3, e^3], |y|/|x| log-uniform in
/// [e^-8, e^8] (in [e^-5, 1/2] for the third inequality), random signs.
ElementaryConstants elementary_constants(double p, int samples, std::uint64_t seed);

}  // namespace ckn
