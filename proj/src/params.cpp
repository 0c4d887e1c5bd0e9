#include "ckn/params.hpp"

#include <cstdio>
#include <numbers>

namespace ckn {

double critical_exponent(int n) {
  if (n <= 2) return std::numeric_limits<double>::infinity();
  return 2.0 * n / (n - 2.0);
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

CknParams CknParams::from_pn(double p, int n) {
  if (n < 2) throw std::invalid_argument("from_pn: dimension n must be >= 2");
  if (!(p > 2.0) || !(p < critical_exponent(n)) || !std::isfinite(p))
    throw std::invalid_argument("from_pn: exponent p=" + std::to_string(p) +
                                " outside (2, 2*) for n=" + std::to_string(n));
  CknParams prm;
  prm.n = n;
  prm.p = p;
  prm.Lambda = 4.0 * (n - 1) / (p * p - 4.0);
  const double sl = std::sqrt(prm.Lambda);
  prm.a = 0.5 * (n - 2) - sl;
  prm.b = prm.a + n / p - 0.5 * (n - 2);
  prm.alpha = 0.5 * (p - 2.0) * sl;
  prm.beta = std::pow(0.5 * p * prm.Lambda, 1.0 / (p - 2.0));
  return prm;
}

std::string CknParams::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "n=%d,p=%.6g", n, p);
  return buf;
}

double felli_schneider_b(double a, int n) {
  if (n < 2) throw std::invalid_argument("felli_schneider_b: n must be >= 2");
  if (!(a < 0.0)) throw std::invalid_argument("felli_schneider_b: requires a < 0");
  const double m = n - 2.0 - 2.0 * a;
  return n * m / (2.0 * std::sqrt(m * m + 4.0 * n - 4.0)) - 0.5 * m;
}

double bubble_log(const CknParams& prm, double s, double t) {
  // ln cosh(x) = |x| + log1p(exp(-2|x|)) - ln 2
  const double x = std::abs(prm.alpha * (s - t));
  const double lncosh = x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
  return std::log(prm.beta) - 2.0 / (prm.p - 2.0) * lncosh;
}

double bubble_value(const CknParams& prm, double s, double t) {
  return std::exp(bubble_log(prm, s, t));
}

double bubble_derivative(const CknParams& prm, double s, double t) {
  return -prm.sqrt_lambda() * std::tanh(prm.alpha * (s - t)) * bubble_value(prm, s, t);
}

double radial_bubble(const CknParams& prm, double r, double lambda) {
  const double sl = prm.sqrt_lambda();
  const double lr = std::log(lambda * r);
  // lambda^{sqrt L} (2 p L)^{1/(p-2)} / (1 + (lambda r)^{sqrt L (p-2)})^{2/(p-2)}
  const double e = sl * (prm.p - 2.0) * lr;
  const double log1pw = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
  const double lg = sl * std::log(lambda) + std::log(2.0 * prm.p * prm.Lambda) / (prm.p - 2.0) -
                    2.0 / (prm.p - 2.0) * log1pw;
  return std::exp(lg);
}

}  // namespace ckn
