#include "ckn/emden_fowler.hpp"

#include <algorithm>

namespace ckn {

double lagrange_interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x,
                            int order) {
  const int n = static_cast<int>(xs.size());
  const int m = std::min(order + 1, n);
  // xs ascending
  const int pos = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  int lo = std::clamp(pos - m / 2, 0, n - m);
  double acc = 0.0;
  for (int i = lo; i < lo + m; ++i) {
    double li = 1.0;
    for (int j = lo; j < lo + m; ++j)
      if (j != i) li *= (x - xs[j]) / (xs[i] - xs[j]);
    acc += li * ys[i];
  }
  return acc;
}

ZonalField emden_fowler(const std::vector<double>& radii, const std::vector<double>& u, DiscPtr d) {
  if (radii.size() != u.size() || radii.size() < 2)
    throw std::invalid_argument("emden_fowler: need matching radii/sample arrays");
  const double sl = d->params().sqrt_lambda();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw std::invalid_argument("emden_fowler: radii must be positive");
    if (!std::isfinite(u[k])) throw std::invalid_argument("emden_fowler: non-finite sample");
    const double lr = std::log(radii[k]);
    pts.emplace_back(-lr, std::exp(sl * lr) * u[k]);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> xs, ys;
  for (auto& [x, y] : pts) {
    if (!xs.empty() && x <= xs.back())
      throw std::invalid_argument("emden_fowler: radii must be distinct");
    xs.push_back(x);
    ys.push_back(y);
  }
  Eigen::VectorXd v(d->N());
  for (int i = 0; i < d->N(); ++i) {
    const double s = d->s()(i);
    v(i) = (s < xs.front() || s > xs.back()) ? 0.0 : lagrange_interpolate(xs, ys, s);
  }
  return ZonalField::radial(d, v);
}

std::vector<double> inverse_emden_fowler(const ZonalField& v, const std::vector<double>& radii) {
  const auto& d = *v.disc();
  const double sl = d.params().sqrt_lambda();
  const double scale = 1.0 / std::sqrt(d.params().sphere());
  std::vector<double> xs(d.N()), ys(d.N());
  for (int i = 0; i < d.N(); ++i) {
    xs[i] = d.s()(i);
    ys[i] = v.profiles()(i, 0) * scale;
  }
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("inverse_emden_fowler: radii must be positive");
    const double s = -std::log(r);
    if (s < xs.front() || s > xs.back()) {
      out.push_back(0.0);
      continue;
    }
    out.push_back(std::exp(sl * s) * lagrange_interpolate(xs, ys, s));
  }
  return out;
}

}  // namespace ckn
