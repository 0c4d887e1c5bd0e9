#include "ckn/nonlinearity_bounds.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ckn {

namespace {

double f(double p, double x) { return std::pow(std::abs(x), p - 2.0) * x; }

double ratio(double lhs, double rhs) { return rhs > 0.0 ? std::abs(lhs) / rhs : -1.0; }

}  // namespace

double ineq_first_ratio(double p, double x, double y) {
  const double ax = std::abs(x), ay = std::abs(y);
  const double lhs = f(p, x + y) - f(p, x) - (p - 1.0) * std::pow(ax, p - 2.0) * y;
  const double rhs = (p > 3.0 ? std::pow(ax, p - 3.0) * y * y : 0.0) + std::pow(ay, p - 1.0);
  return ratio(lhs, rhs);
}

double ineq_second_ratio(double p, double x, double y) {
  const double ax = std::abs(x), ay = std::abs(y);
  const double lhs = (std::pow(std::abs(x + y), p - 2.0) - std::pow(ax, p - 2.0)) * ax;
  const double rhs = p >= 3.0 ? ax * std::pow(ay, p - 2.0) + std::pow(ax, p - 2.0) * ay
                              : std::pow(ax * ay, 0.5 * (p - 1.0));
  return ratio(lhs, rhs);
}

double ineq_third_ratio(double p, double x, double y) {
  const double ax = std::abs(x);
  if (!(std::abs(y) <= 0.5 * ax)) return -1.0;
  const double sg = x < 0.0 ? -1.0 : 1.0;
  // derivatives of f: f'' carries sign(x), f''' does not
  const double t2 = 0.5 * (p - 1.0) * (p - 2.0) * std::pow(ax, p - 3.0) * sg * y * y;
  const double t3 = (p - 1.0) * (p - 2.0) * (p - 3.0) / 6.0 * std::pow(ax, p - 4.0) * y * y * y;
  const double lhs = f(p, x + y) - f(p, x) - (p - 1.0) * std::pow(ax, p - 2.0) * y - t2 - t3;
  const double rhs = std::pow(ax, p - 5.0) * std::pow(y, 4);
  return ratio(lhs, rhs);
}

bool ElementaryConstants::stable(double growth) const {
  const double a[3] = {first, second, third}, b[3] = {first_10, second_10, third_10};
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(a[i]) || !(a[i] >= 0.0)) return false;
    // values at roundoff level (exact Taylor polynomial, e.g. p = 3, 4) carry no growth signal
    if (a[i] > 1e-6 && a[i] > growth * b[i]) return false;
  }
  return true;
}

ElementaryConstants elementary_constants(double p, int samples, std::uint64_t seed) {
  if (!(p > 2.0)) throw std::invalid_argument("elementary_constants: requires p > 2");
  if (samples < 10) throw std::invalid_argument("elementary_constants: need >= 10 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lx(-3.0, 3.0), lr(-8.0, 8.0), lr3(-5.0, std::log(0.5));
  std::bernoulli_distribution coin(0.5);
  ElementaryConstants out;
  out.p = p;
  out.samples = samples;
  const int tenth = samples / 10;
  for (int k = 0; k < samples; ++k) {
    const double x = (coin(rng) ? 1.0 : -1.0) * std::exp(lx(rng));
    const double y = (coin(rng) ? 1.0 : -1.0) * std::abs(x) * std::exp(lr(rng));
    const double y3 = (coin(rng) ? 1.0 : -1.0) * std::abs(x) * std::exp(lr3(rng));
    out.first = std::max(out.first, ineq_first_ratio(p, x, y));
    out.second = std::max(out.second, ineq_second_ratio(p, x, y));
    out.third = std::max(out.third, ineq_third_ratio(p, x, y3));
    if (k + 1 == tenth) {
      out.first_10 = out.first;
      out.second_10 = out.second;
      out.third_10 = out.third;
    }
  }
  return out;
}

}  // namespace ckn
