#include "ckn/stability.hpp"

#include <algorithm>
#include <numbers>

#include "ckn/spectrum.hpp"
#include "disc_internal.hpp"

namespace ckn {

namespace {

double power_sum(const Discretization& d, double q) {
  return d.h() * d.V0().array().pow(q).sum();
}

Eigen::VectorXd vpow(const Discretization& d, double q) { return d.V0().array().pow(q).matrix(); }

}  // namespace

// ------------------------------------------------------------- bubble fit

BubbleFit nearest_bubble(const ZonalField& v, bool fit_amplitude) {
  const auto& d = *v.disc();
  const auto& prm = d.params();
  const double area = prm.sphere(), sq = std::sqrt(area), h = d.h();

  const double nv2 = h1_inner(v, v);
  const double nV0 = std::sqrt(h * area * d.V0().dot(d.apply_A(0, d.V0())));
  const double nv = std::sqrt(std::max(0.0, nv2));
  if (!(nv >= 0.1 * nV0 && nv <= 10.0 * nV0))
    throw std::invalid_argument("nearest_bubble: |v|_H1 outside [0.1, 10] |V_0|_H1");

  const Eigen::VectorXd Av = d.apply_A(0, v.profiles().col(0));
  struct Eval {
    double obj, a, g;
  };
  auto eval = [&](double t, bool with_grad) {
    const Eigen::VectorXd Vt = d.bubble(t);
    const Eigen::VectorXd AVt = d.apply_A(0, Vt);
    const double ip = h * sq * Av.dot(Vt);
    const double n2 = h * area * Vt.dot(AVt);
    Eval e{};
    e.a = fit_amplitude ? ip / n2 : 1.0;
    e.obj = nv2 - 2.0 * e.a * ip + e.a * e.a * n2;
    if (with_grad) {
      const Eigen::VectorXd Dt = d.bubble_ds(t);
      e.g = h * sq * Av.dot(Dt) - e.a * h * area * AVt.dot(Dt);
    }
    return e;
  };

  const double half = 0.5 * d.grid().S;
  const double step = std::min(0.2, 0.1 / prm.alpha);
  const int nscan = static_cast<int>(std::ceil(2.0 * half / step));
  int best = 0;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> ts(nscan + 1);
  for (int i = 0; i <= nscan; ++i) {
    ts[i] = -half + 2.0 * half * i / nscan;
    const double o = eval(ts[i], false).obj;
    if (o < best_obj) {
      best_obj = o;
      best = i;
    }
  }
  if (best == 0 || best == nscan)
    throw NumericalError("nearest_bubble: no local minimum within |t| <= S/2");

  // golden section
  double lo = ts[best - 1], hi = ts[best + 1];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = eval(x1, false).obj, f2 = eval(x2, false).obj;
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = eval(x1, false).obj;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = eval(x2, false).obj;
    }
  }
  double t = 0.5 * (lo + hi);

  // bisection on the derivative
  double a = ts[best - 1], b = ts[best + 1];
  double ga = eval(a, true).g, gb = eval(b, true).g;
  if (ga < 0.0 && gb > 0.0) {
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      const double m = 0.5 * (a + b);
      const double gm = eval(m, true).g;
      if (gm == 0.0) {
        a = b = m;
        break;
      }
      (gm < 0.0 ? a : b) = m;
    }
    t = 0.5 * (a + b);
  }

  const Eval fin = eval(t, true);
  BubbleFit fit;
  fit.t_star = t;
  fit.amplitude = fin.a;
  fit.stationarity = fin.g;
  fit.distance = h1_norm(v - fin.a * ZonalField::bubble(v.disc(), t));
  const YProjection py = project_Y(v, t);
  fit.projY = py.coefficient;
  if (v.L() >= 1) {
    const ZonalField y = ZonalField::from_profile(v.disc(), 1, d.bubble(t).array().pow(0.5 * prm.p).matrix());
    fit.projY_norm = std::abs(py.coefficient) * h1_norm(y);
  }
  return fit;
}

YProjection project_Y(const ZonalField& v, double t) {
  if (v.L() < 1) return {0.0, v};
  const auto& d = *v.disc();
  const ZonalField y =
      ZonalField::from_profile(v.disc(), 1, d.bubble(t).array().pow(0.5 * d.params().p).matrix());
  const double c = h1_inner(v, y) / h1_inner(y, y);
  return {c, v - c * y};
}

// ------------------------------------------------------------- constants

double compute_F(const Discretization& d) {
  const auto& prm = d.params();
  const double p = prm.p;
  const int n = prm.n;
  const double m1 = sphere_moment(n, 1), m2 = sphere_moment(n, 2);
  const double Ip = prm.sphere() * power_sum(d, p);
  const double X = power_sum(d, 2 * p - 2) * m1;
  const double Z = power_sum(d, 3 * p - 4) * m2;
  return (p - 1) * (p - 2) / 4.0 * ((p - 1) / Ip * X * X - (p - 3) / 3.0 * Z);
}

double compute_F(const CknParams& prm) { return compute_F(*Discretization::make(prm)); }

E0Result compute_E_eps(const Discretization& d, double eps) {
  using namespace detail;
  if (!(std::abs(eps) <= 0.1)) throw std::invalid_argument("compute_E_eps: requires |eps| <= 0.1");
  const auto& prm = d.params();
  const double p = prm.p, h = d.h();
  const int n = prm.n;
  const double area = prm.sphere();
  const Eigen::VectorXd B = vpow(d, p - 2);
  const Eigen::VectorXd f = vpow(d, 2 * p - 3);
  const double c0 = std::sqrt(area) / n;
  const double c2 = std::sqrt(area * 2.0 * (n - 1) / (double(n) * n * (n + 2)));

  E0Result out;

  // degree 2: unconstrained, positive definite
  {
    const double b2 = (p - 1) * (p - 2) * c2;
    SymBand L2 = axial_band(d, (1 - eps) * (d.lambda(2) + prm.Lambda), 1 - eps);
    L2.add_diagonal(-(p - 1) * B);
    BandCholesky ch(L2);
    if (!ch.ok()) {
      double g = std::numeric_limits<double>::quiet_NaN();
      try {
        g = eigensolve_parity(*d.with_L(std::max(2, d.L())), 2, +1, 1).eigenvalues[0];
      } catch (const std::exception&) {
      }
      throw NumericalError("compute_E0: degree-2 Hessian indefinite at " + prm.label() +
                           ", smallest gamma=" + std::to_string(g));
    }
    out.sector2 = -(b2 * b2 / 4.0) * h * f.dot(ch.solve(f));
  }

  // degree 0: constrained to H1-orthogonality with V_0, even class
  {
    const SectorSpectrum ev = eigensolve_parity(d, 0, +1, 2);
    out.margin0 = (1 - eps) * ev.eigenvalues[1] - (p - 1);
    if (!(out.margin0 > 0.0))
      throw NumericalError("compute_E0: degree-0 constrained Hessian indefinite at " + prm.label() +
                           ", margin=" + std::to_string(out.margin0));
    const double b0 = (p - 1) * (p - 2) * c0;
    SymBand L0 = axial_band(d, (1 - eps) * prm.Lambda, 1 - eps);
    L0.add_diagonal(-(p - 1) * B);
    const SymBand M = even_reduce(L0);
    BandLU lu(M);
    if (!lu.ok()) throw NumericalError("compute_E0: degree-0 system singular at " + prm.label());
    const Eigen::VectorXd fe = even_restrict(f);
    const Eigen::VectorXd ct = even_restrict(d.apply_A(0, d.V0()));
    const Eigen::VectorXd y1 = lu.solve(0.5 * b0 * fe);
    const Eigen::VectorXd y2 = lu.solve(ct);
    const Eigen::VectorXd y = y1 - (ct.dot(y1) / ct.dot(y2)) * y2;
    out.sector0 = h * y.dot(M.multiply(y)) - b0 * h * fe.dot(y);
  }
  out.value = out.sector0 + out.sector2;
  return out;
}

double compute_E0(const Discretization& d, double eps) { return compute_E_eps(d, eps).value; }

double compute_E0(const CknParams& prm, double eps) {
  return compute_E0(*Discretization::make(prm), eps);
}

double phi_norm2(const Discretization& d) {
  const Eigen::VectorXd u = vpow(d, 0.5 * d.params().p);
  return d.h() * sphere_moment(d.params().n, 1) * u.dot(d.apply_A(1, u));
}

double compute_R_energy(const Discretization& d) {
  const double phi2 = phi_norm2(d);
  return 2.0 * (compute_E0(d, 0.0) + compute_F(d)) / (phi2 * phi2);
}

double compute_R_energy(const CknParams& prm) {
  return compute_R_energy(*Discretization::make(prm));
}

StabilityConstants compute_constants(const DiscPtr& d, const RSeriesOptions& opt) {
  StabilityConstants c;
  const E0Result e = compute_E_eps(*d, 0.0);
  c.E0 = e.value;
  c.E0_sector0 = e.sector0;
  c.E0_sector2 = e.sector2;
  c.F = compute_F(*d);
  c.phi_norm2 = phi_norm2(*d);
  c.R_energy = 2.0 * (c.E0 + c.F) / (c.phi_norm2 * c.phi_norm2);
  const RGamma rg = compute_R_gamma(d->params(), opt);
  c.R_gamma = rg.value;
  c.series_terms = rg.series.terms;
  c.tail_bound = rg.series.tail_bound;
  c.grid_signature = d->signature();
  return c;
}

double test_function_bound(double E0, double F, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("test_function_bound: lambda must be positive");
  return (lambda + 2) * (lambda + 2) / (4 * lambda) * E0 + 2 * F;
}

double test_function_bound(const CknParams& prm, double lambda) {
  auto d = Discretization::make(prm);
  return test_function_bound(compute_E0(*d), compute_F(*d), lambda);
}

// ------------------------------------------------------------- counterexample

CounterexampleFamily::CounterexampleFamily(DiscPtr d)
    : d_(std::move(d)), eta_(d_), phi_(d_), V_(d_) {
  if (d_->L() < 2) throw std::invalid_argument("CounterexampleFamily: needs L >= 2");
  const auto& prm = d_->params();
  const double p = prm.p;
  const int n = prm.n;
  eta1_ = bvp_solve(*d_, 2, 2.0 * n + prm.Lambda, 0.5 * (p - 1) * (p - 2) * vpow(*d_, 2 * p - 3));
  kappa_ = p * power_sum(*d_, 2 * p - 2) / (4.0 * n * power_sum(*d_, p));
  eta2_ = p / (4.0 * n) * vpow(*d_, p - 1) - kappa_ * d_->V0();
  C0_ = p * p / (4.0 * n) * prm.Lambda - kappa_;
  const double inv_n = 1.0 / n;
  eta_ = ZonalField::separable(d_, eta1_, [inv_n](double x) { return x * x - inv_n; }) +
         ZonalField::radial(d_, eta2_);
  phi_ = ZonalField::separable(d_, vpow(*d_, 0.5 * p), [](double x) { return x; });
  V_ = ZonalField::bubble(d_, 0.0);
}

ZonalField CounterexampleFamily::w(double mu) const {
  if (!(std::abs(mu) <= 0.05)) throw std::invalid_argument("counterexample: requires |mu| <= 0.05");
  return (1.0 - C0_ * mu * mu) * V_ + mu * phi_ + (mu * mu) * eta_;
}

ZonalField CounterexampleFamily::naive(double mu) const { return V_ + mu * phi_; }

double CounterexampleFamily::corrector_residual() const {
  const double p = d_->params().p;
  ZonalField r = linearized_apply(eta_, 0.0).values();
  r += ZonalField::radial(d_, (p - 2) * C0_ * vpow(*d_, p - 1));
  r -= ZonalField::separable(d_, 0.5 * (p - 1) * (p - 2) * vpow(*d_, 2 * p - 3),
                             [](double x) { return x * x; });
  return hminus1_norm(Residual(r));
}

CounterexampleFamily::Orthogonality CounterexampleFamily::orthogonality() const {
  Orthogonality o;
  o.bubble = h1_inner(eta_, V_);
  o.ds = h1_inner(eta_, ZonalField::radial(d_, d_->bubble_ds(0.0)));
  o.kernel = h1_inner(eta_, phi_);
  return o;
}

ZonalField counterexample(const DiscPtr& d, double mu) { return CounterexampleFamily(d).w(mu); }

ZonalField naive_sequence(const DiscPtr& d, double mu) {
  const double p = d->params().p;
  return ZonalField::bubble(d, 0.0) +
         mu * ZonalField::separable(d, vpow(*d, 0.5 * p), [](double x) { return x; });
}

// ------------------------------------------------------------- sharpness

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: bad input");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<double> default_mus(int count) {
  std::vector<double> mus;
  const double a = std::log(1e-3), b = std::log(3e-2);
  for (int i = 0; i < count; ++i) mus.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return mus;
}

SharpnessReport sharpness_study(const DiscPtr& d, const std::vector<double>& mus) {
  if (mus.size() < 5) throw std::invalid_argument("sharpness_study: need at least 5 mu values");
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (!(mus[i] >= 1e-3 * (1 - 1e-12) && mus[i] <= 3e-2 * (1 + 1e-12)))
      throw std::invalid_argument("sharpness_study: mu outside [1e-3, 3e-2]");
    if (i > 0 && !(mus[i] > mus[i - 1]))
      throw std::invalid_argument("sharpness_study: mu values must increase");
  }
  const CounterexampleFamily fam(d);
  SharpnessReport rep;
  std::vector<double> r, dist, naive, py, perp;
  for (double mu : mus) {
    SharpnessPoint pt;
    pt.mu = mu;
    const ZonalField w = fam.w(mu);
    const Residual res = apply_H1(w);
    pt.residual = hminus1_norm(res);
    pt.tail_fraction = res.tail_fraction();
    const BubbleFit fit = nearest_bubble(w, false);
    pt.distance = fit.distance;
    pt.t_star = fit.t_star;
    pt.ratio = pt.residual / std::pow(pt.distance, 3);
    pt.projY_norm = fit.projY_norm;
    const YProjection proj = project_Y(w, fit.t_star);
    pt.perp_distance = h1_norm(proj.remainder - ZonalField::bubble(d, fit.t_star));
    pt.naive_residual = hminus1_norm(apply_H1(fam.naive(mu)));
    r.push_back(pt.residual);
    dist.push_back(pt.distance);
    naive.push_back(pt.naive_residual);
    py.push_back(pt.projY_norm);
    perp.push_back(pt.perp_distance);
    rep.points.push_back(pt);
  }
  rep.slope_residual = loglog_slope(mus, r);
  rep.slope_distance = loglog_slope(mus, dist);
  rep.slope_naive = loglog_slope(mus, naive);
  rep.slope_projY = loglog_slope(mus, py);
  rep.slope_perp = loglog_slope(mus, perp);
  rep.ratio_limit = rep.points.front().ratio;
  for (std::size_t i = 1; i < rep.points.size(); ++i)
    rep.ratio_drift = std::max(rep.ratio_drift,
                               std::abs(rep.points[i].ratio / rep.points[i - 1].ratio - 1.0));
  return rep;
}

}  // namespace ckn
