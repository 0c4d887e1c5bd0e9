#include "ckn/operators.hpp"

#include "disc_internal.hpp"

namespace ckn {

Residual apply_H1(const ZonalField& v) {
  const auto& d = *v.disc();
  const double pm2 = d.params().p - 2.0;
  auto nl = pointwise_map_diag(v, [pm2](double x) { return std::pow(std::abs(x), pm2) * x; });
  Eigen::MatrixXd R = nl.field.profiles();
  for (int l = 0; l <= v.L(); ++l) {
    if (v.profiles().col(l).isZero(0.0)) continue;
    R.col(l) -= d.apply_A(l, v.profiles().col(l));
  }
  return Residual(ZonalField(v.disc(), std::move(R)), nl.tail_fraction);
}

Residual linearized_apply(const ZonalField& rho, double t) {
  const auto& d = *rho.disc();
  const double p = d.params().p;
  Eigen::VectorXd pot = d.bubble(t).array().pow(p - 2.0).matrix() * (p - 1.0);
  Eigen::MatrixXd R(d.N(), rho.L() + 1);
  for (int l = 0; l <= rho.L(); ++l)
    R.col(l) = d.apply_A(l, rho.profiles().col(l)) - pot.cwiseProduct(rho.profiles().col(l));
  return Residual(ZonalField(rho.disc(), std::move(R)));
}

ZonalField riesz_solve(const Residual& f) {
  const auto& d = *f.values().disc();
  Eigen::MatrixXd P(d.N(), f.values().L() + 1);
  for (int l = 0; l <= f.values().L(); ++l) {
    const auto col = f.values().profiles().col(l);
    P.col(l) = col.isZero(0.0) ? Eigen::VectorXd::Zero(d.N()) : d.solve_A(l, col);
  }
  return ZonalField(f.values().disc(), std::move(P));
}

double hminus1_norm(const Residual& f) {
  const ZonalField phi = riesz_solve(f);
  return std::sqrt(std::max(0.0, l2_inner(f.values(), phi)));
}

double dual_pairing(const Residual& f, const ZonalField& w) { return l2_inner(f.values(), w); }

Eigen::VectorXd bvp_solve(const Discretization& d, int ell, double c, const Eigen::VectorXd& rhs) {
  using namespace detail;
  const auto& prm = d.params();
  const int n = d.N();
  if (rhs.size() != n) throw std::invalid_argument("bvp_solve: rhs length mismatch");
  if (rhs.isZero(0.0)) return Eigen::VectorXd::Zero(n);

  const Eigen::VectorXd pot = d.V0().array().pow(prm.p - 2.0).matrix() * (prm.p - 1.0);
  SymBand m = axial_band(d, c);
  m.add_diagonal(-pot);

  const Eigen::VectorXd rev = rhs.reverse();
  const double scale = rhs.norm();
  const bool even = (rhs - rev).norm() <= 1e-13 * scale;
  const bool odd = !even && (rhs + rev).norm() <= 1e-13 * scale;

  SymBand red;
  Eigen::VectorXd b, mass;
  if (even) {
    red = even_reduce(m);
    b = even_restrict(rhs);
    mass = even_mass(Eigen::VectorXd::Ones(n));
  } else if (odd) {
    red = odd_reduce(m);
    b = odd_restrict(rhs);
    mass = odd_mass(Eigen::VectorXd::Ones(n));
  } else {
    red = m;
    b = rhs;
    mass = Eigen::VectorXd::Ones(n);
  }

  // eigenvalues of the restricted operator: symmetric scaling by mass^{-1/2}
  SymBand scaled = red;
  const Eigen::VectorXd isq = mass.cwiseSqrt().cwiseInverse();
  for (int k = 0; k <= scaled.kd; ++k)
    for (int j = 0; j + k < scaled.n; ++j) scaled.ab(k, j) *= isq(j) * isq(j + k);
  const double lam_min = smallest_abs_eigenvalue(scaled);
  const char* cls = even ? "even" : (odd ? "odd" : "full");
  if (!(lam_min > 1e-8))
    throw NumericalError("bvp_solve: near-singular operator in sector ell=" + std::to_string(ell) +
                         " (" + cls + " class) at " + prm.label() +
                         ", smallest |eigenvalue|=" + std::to_string(lam_min));

  BandLU lu(red);
  if (!lu.ok())
    throw NumericalError("bvp_solve: singular band matrix in sector ell=" + std::to_string(ell) +
                         " at " + prm.label());
  if (lu.rcond() < 1e-12)
    throw NumericalError("bvp_solve: condition number exceeds 1e12 in sector ell=" +
                         std::to_string(ell) + " at " + prm.label());
  const Eigen::VectorXd y = lu.solve(b);
  Eigen::VectorXd g = even ? even_extend(y, n) : (odd ? odd_extend(y, n) : y);

  const Eigen::VectorXd res = m.multiply(g) - rhs;
  const double res_l2 = std::sqrt(d.h()) * res.norm();
  const double ref = std::max(1.0, std::sqrt(d.h()) * scale);
  if (res_l2 > 1e-9 * ref)
    throw NumericalError("bvp_solve: residual " + std::to_string(res_l2) +
                         " above 1e-9 in sector ell=" + std::to_string(ell) + " at " + prm.label());
  return g;
}

DecayFit fit_decay_rate(const Discretization& d, const Eigen::VectorXd& g) {
  const double gmax = g.cwiseAbs().maxCoeff();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = d.grid().center() + 1; i < d.N(); ++i) {
    const double r = std::abs(g(i)) / gmax;
    if (r > 1e-3 || r < 1e-10) continue;
    const double x = d.s()(i), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  DecayFit fit;
  fit.points = cnt;
  if (cnt < 2) throw NumericalError("fit_decay_rate: not enough points in the decay window");
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  fit.rate = -slope;
  return fit;
}

}  // namespace ckn
