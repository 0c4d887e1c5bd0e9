#include "ckn/multibubble.hpp"

#include <algorithm>
#include <cmath>

#include "ckn/cylinder.hpp"
#include "ckn/operators.hpp"

namespace ckn {

namespace {

constexpr double kStep = 0.01;
constexpr double kMaxCenter = 1e4;

template <class F>
double line_integral(const CknParams& prm, double t1, double t2, F&& integrand) {
  if (!std::isfinite(t1) || !std::isfinite(t2) || std::abs(t1) > kMaxCenter ||
      std::abs(t2) > kMaxCenter)
    throw std::invalid_argument("interaction: centers outside the supported range");
  const double margin = 30.0 / prm.sqrt_lambda();
  const double a = std::min(t1, t2) - margin, b = std::max(t1, t2) + margin;
  const long n = static_cast<long>(std::ceil((b - a) / kStep));
  const double h = (b - a) / n;
  double acc = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double s = a + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * integrand(s);
  }
  return prm.sphere() * h * acc;
}

double spread(const std::vector<WindowRow>& rows) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

double interaction(const CknParams& prm, double t1, double t2, double q1, double q2) {
  if (q1 < 0.0 || q2 < 0.0) throw std::invalid_argument("interaction: exponents must be >= 0");
  if (std::abs(q1 + q2 - prm.p) > 1e-12 * prm.p)
    throw std::invalid_argument("interaction: q1 + q2 must equal p");
  return line_integral(prm, t1, t2, [&](double s) {
    return std::exp(q1 * bubble_log(prm, s, t1) + q2 * bubble_log(prm, s, t2));
  });
}

double interaction_derivative(const CknParams& prm, double t1, double t2) {
  return line_integral(prm, t1, t2, [&](double s) {
    return std::exp((prm.p - 1.0) * bubble_log(prm, s, t1)) * bubble_derivative(prm, s, t2);
  });
}

double moduli(Modulus kind, double p, double x, int nu) {
  if (!(x >= 0.0)) throw std::invalid_argument("moduli: x must be nonnegative");
  switch (kind) {
    case Modulus::F1:
      if (p > 3.0 || nu == 1) return x;
      if (p == 3.0) {
        if (!(x > 0.0)) throw std::invalid_argument("moduli: F1 log branch needs x > 0");
        return x * std::sqrt(std::abs(std::log(x))) + x;
      }
      return std::pow(x, 0.5 * (p - 1.0));
    case Modulus::F2:
      return p >= 3.0 ? x * x : std::pow(x, p - 1.0);
    case Modulus::F3:
      if (p > 3.0) return x;
      if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("moduli: F3 log branch needs 0 < x < 1");
      return std::pow(x, 0.5 * (p - 1.0)) * std::pow(-std::log(x), (p - 1.0) / p);
  }
  throw std::invalid_argument("moduli: unknown kind");
}

BubbleConfig BubbleConfig::make(const CknParams& prm, std::vector<double> centers, double zeta) {
  if (centers.empty()) throw std::invalid_argument("BubbleConfig: need at least one center");
  if (!(zeta > 0.0)) throw std::invalid_argument("BubbleConfig: zeta must be positive");
  BubbleConfig c;
  c.params = prm;
  c.zeta = zeta;
  for (std::size_t i = 1; i < centers.size(); ++i)
    if (!(centers[i] > centers[i - 1]))
      throw std::invalid_argument("BubbleConfig: centers must be strictly increasing");
  c.centers = std::move(centers);
  c.R = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < c.centers.size(); ++i)
    c.R = std::min(c.R, c.centers[i] - c.centers[i - 1]);
  c.Q = std::isfinite(c.R) ? std::exp(-prm.sqrt_lambda() * c.R) : 0.0;
  return c;
}

double BubbleConfig::Qij(int i, int j) const {
  return std::exp(-params.sqrt_lambda() * std::abs(centers[i] - centers[j]));
}

double weight(const BubbleConfig& cfg, int which, double s) {
  if (which < 1 || which > 3) throw std::invalid_argument("weight: index must be 1, 2 or 3");
  const int nu = cfg.nu();
  const double sl = cfg.params.sqrt_lambda(), p = cfg.params.p, z = cfg.zeta;
  const auto& t = cfg.centers;
  auto phi = [&](int i) { return std::exp(-sl * std::abs(s - t[i])); };
  double w = 0.0;
  if (which == 2) {
    for (int i = 0; i < nu; ++i) {
      const double lo = i == 0 ? -INFINITY : 0.5 * (t[i] + t[i - 1]);
      const double hi = i == nu - 1 ? INFINITY : 0.5 * (t[i] + t[i + 1]);
      if (lo <= s && s <= hi) w += cfg.Q * std::pow(phi(i), 1.0 - z);
    }
    return w;
  }
  if (nu < 2) throw std::invalid_argument("weight: W1 and W3 need at least two centers");
  const double r = which == 1 ? 1.0 : 2.0;
  for (int i = 0; i + 1 < nu; ++i) {
    const double mid = 0.5 * (t[i] + t[i + 1]);
    const double q = cfg.Qij(i, i + 1);
    if (t[i] + r <= s && s <= mid) w += q * std::pow(phi(i), p - 3.0);
    if (mid <= s && s <= t[i + 1] - r) w += q * std::pow(phi(i + 1), p - 3.0);
  }
  if (t[nu - 1] + r <= s) w += cfg.Qij(nu - 2, nu - 1) * std::pow(phi(nu - 1), 1.0 - z);
  if (s <= t[0] - r) w += cfg.Qij(0, 1) * std::pow(phi(0), 1.0 - z);
  for (int i = 0; i < nu; ++i)
    if (t[i] - r <= s && s <= t[i] + r) w += cfg.Q;
  return w;
}

double weighted_sup_norm(const BubbleConfig& cfg, int which, const std::vector<double>& s,
                         const std::vector<double>& values) {
  if (s.size() != values.size()) throw std::invalid_argument("weighted_sup_norm: size mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = weight(cfg, which, s[i]);
    if (w > 0.0) best = std::max(best, std::abs(values[i]) / w);
  }
  return best;
}

BubbleSumDiagnostics bubble_sum_residual(const BubbleConfig& cfg) {
  const auto& prm = cfg.params;
  const double p = prm.p;
  const Grid base = Grid::default_for(prm);
  double tmax = 0.0;
  for (double t : cfg.centers) tmax = std::max(tmax, std::abs(t));
  DiscOptions opt;
  opt.S = base.S + tmax;
  opt.L = 0;
  opt.M = 4;
  auto d = Discretization::make(prm, opt);

  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(d->N());
  Eigen::VectorXd sumv = Eigen::VectorXd::Zero(d->N());
  for (double t : cfg.centers) {
    const Eigen::VectorXd v = d->bubble(t);
    sigma += v;
    sumv += v.array().pow(p - 1.0).matrix();
  }
  BubbleSumDiagnostics out;
  const Residual r = apply_H1(ZonalField::radial(d, sigma));
  out.residual = hminus1_norm(r);
  out.tail_fraction = r.tail_fraction();
  out.ratio = cfg.Q > 0.0 ? out.residual / cfg.Q : 0.0;
  if (cfg.nu() >= 2) {
    out.norm_index = p < 4.0 ? 1 : 2;
    std::vector<double> s(d->N()), h(d->N());
    for (int i = 0; i < d->N(); ++i) {
      s[i] = d->s()(i);
      h[i] = std::pow(sigma(i), p - 1.0) - sumv(i);
    }
    out.interaction_norm = weighted_sup_norm(cfg, out.norm_index, s, h);
  }
  return out;
}

std::vector<double> default_gaps(const CknParams& prm, int count) {
  std::vector<double> g;
  const double a = 4.0 / prm.sqrt_lambda(), b = 12.0 / prm.sqrt_lambda();
  for (int i = 0; i < count; ++i) g.push_back(a + (b - a) * i / (count - 1));
  return g;
}

WindowReport interaction_window(const CknParams& prm, double q1, const std::vector<double>& gaps) {
  WindowReport rep;
  const double q2 = prm.p - q1;
  for (double g : gaps) {
    WindowRow r;
    r.gap = g;
    r.value = interaction(prm, -0.5 * g, 0.5 * g, q1, q2);
    r.predicted = std::exp(-prm.sqrt_lambda() * g * std::min(q1, q2));
    r.ratio = r.value / r.predicted;
    rep.rows.push_back(r);
  }
  rep.spread = spread(rep.rows);
  return rep;
}

WindowReport pair_window(const CknParams& prm, const std::vector<double>& gaps) {
  WindowReport rep;
  for (double g : gaps) {
    WindowRow r;
    r.gap = g;
    r.value = interaction(prm, -0.5 * g, 0.5 * g, 0.5 * prm.p, 0.5 * prm.p);
    r.predicted = (g + 1.0) * std::exp(-0.5 * prm.p * prm.sqrt_lambda() * g);
    r.ratio = r.value / r.predicted;
    rep.rows.push_back(r);
  }
  rep.spread = spread(rep.rows);
  return rep;
}

WindowReport derivative_window(const CknParams& prm, const std::vector<double>& gaps) {
  WindowReport rep;
  for (double g : gaps) {
    WindowRow r;
    r.gap = g;
    r.value = interaction_derivative(prm, -0.5 * g, 0.5 * g);
    r.predicted = std::exp(-prm.sqrt_lambda() * g);
    r.ratio = r.value / r.predicted;
    rep.rows.push_back(r);
  }
  rep.spread = spread(rep.rows);
  return rep;
}

WindowReport residual_window(const CknParams& prm, const std::vector<double>& gaps) {
  WindowReport rep;
  for (double g : gaps) {
    const BubbleConfig cfg = BubbleConfig::make(prm, {-0.5 * g, 0.5 * g});
    const BubbleSumDiagnostics dg = bubble_sum_residual(cfg);
    rep.rows.push_back({g, dg.residual, cfg.Q, dg.ratio});
  }
  rep.spread = spread(rep.rows);
  return rep;
}

}  // namespace ckn
