#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ckn/nonlinearity_bounds.hpp"
#include "ckn/rseries.hpp"
#include "ckn/stability.hpp"

using namespace ckn;
using doctest::Approx;

namespace {

struct Frozen {
  int n;
  double p, F, E0, R, phi2;
};

// Reference values from an independent spectral prototype.
const Frozen kFrozen[] = {
    {2, 4.0, 1.6951826439065267, -0.5144750019636029, 0.08871539026972, 5.15925152493},
    {3, 3.0, 137.76176928277175, -64.17072575978725, 0.00091164118443904, 401.805160408},
    {3, 4.0, 16.306614503781436, -10.921525017408552, 0.007112496509456793, 38.913511884},
    {4, 3.0, 754.7129140874292, -515.4030642255725, 0.00012501394364676, 1956.66311059},
};

// int_R V_0^q ds
double line_power(const CknParams& prm, double q) {
  const double m = q / (prm.p - 2.0);
  return std::pow(prm.beta, q) * std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(m) - std::lgamma(m + 0.5)) / prm.alpha;
}

}  // namespace

TEST_CASE("constants against frozen reference values") {
  for (const auto& f : kFrozen) {
    const auto d = Discretization::make(CknParams::from_pn(f.p, f.n), {});
    const auto c = compute_constants(d);
    CAPTURE(f.n);
    CAPTURE(f.p);
    CHECK(c.F == Approx(f.F).epsilon(1e-8));
    CHECK(c.E0 == Approx(f.E0).epsilon(1e-8));
    CHECK(c.R_gamma == Approx(f.R).epsilon(1e-8));
    CHECK(c.R_energy == Approx(f.R).epsilon(1e-8));
    CHECK(c.phi_norm2 == Approx(f.phi2).epsilon(1e-9));
    CHECK(c.relative_discrepancy() <= 1e-8);
    CHECK(c.tail_bound <= 1e-9);
    CHECK(c.E0_sector0 + c.E0_sector2 == Approx(c.E0));
    CHECK(c.grid_signature == d->signature());
  }
}

TEST_CASE("kernel direction norm") {
  // |V^{p/2} theta_n|^2 = m1 int (V^{p/2})'^2 + (n - 1 + Lambda) V^p,  with (V^{p/2})' = (p/2) V^{p/2} V'/V
  const auto prm = CknParams::from_pn(4.0, 3);
  const auto d = Discretization::make(prm, {});
  const double m1 = 4.0 * std::numbers::pi / 3.0;
  // V'^2 = Lambda V^2 - (2/p) V^p for the profile equation
  const double grad = 0.25 * prm.p * prm.p * (prm.Lambda * line_power(prm, prm.p) - 2.0 / prm.p * line_power(prm, 2.0 * prm.p - 2.0));
  const double exact = m1 * (grad + (2.0 + prm.Lambda) * line_power(prm, prm.p));
  CHECK(phi_norm2(*d) == Approx(exact).epsilon(1e-9));
}

TEST_CASE("Lemma sign pattern and monotone approach along n=3") {
  double prev = INFINITY;
  for (double p : {4.0, 5.0, 5.5, 5.8}) {
    const auto d = Discretization::make(CknParams::from_pn(p, 3), {});
    const double F = compute_F(*d), E0 = compute_E0(*d);
    CHECK(F > 0.0);
    CHECK(E0 + F > 0.0);
    const double q = E0 / F + 1.0;
    CHECK(q < prev);
    prev = q;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("E_eps is monotone in eps") {
  const auto d = Discretization::make(CknParams::from_pn(4.0, 3), {});
  const auto e0 = compute_E_eps(*d, 0.0), e1 = compute_E_eps(*d, 0.05);
  CHECK(e1.value < e0.value);
  CHECK(e0.margin0 > 0.0);
  CHECK(e0.margin0 == Approx(6.0 - 3.0).epsilon(1e-8));
}

TEST_CASE("test function bound") {
  CHECK(test_function_bound(-1.0, 3.0, 2.0) == Approx(4.0));
  CHECK_THROWS_AS(test_function_bound(-1.0, 3.0, 0.0), std::invalid_argument);
  for (double lam : {0.5, 1.0, 1.9, 2.1, 4.0})
    CHECK(test_function_bound(1.0, 0.0, lam) > test_function_bound(1.0, 0.0, 2.0));
  const auto prm = CknParams::from_pn(5.8, 3);
  CHECK(test_function_bound(prm, 2.0) > 0.0);
  CHECK(test_function_bound(prm, 1.0) < 0.0);
}

TEST_CASE("R series") {
  CHECK_THROWS_AS(gamma_ratio_P(-1.5, 1.0, 0.2), NumericalError);
  const auto prm = CknParams::from_pn(4.0, 3);
  const auto r = compute_R_gamma(prm);
  CHECK(r.series.decay_exponent >= 2.5);
  CHECK(r.series.tail_bound <= 1e-10);
  CHECK(std::abs(r.series.tail_correction) <= r.series.tail_bound);
  RSeriesOptions fixed;
  fixed.fixed_terms = 4 * r.series.terms;
  const auto r2 = compute_R_gamma(prm, fixed);
  CHECK(r2.value == Approx(r.value).epsilon(1e-10));
  // P(x) ~ x^{-2}
  const double x = 1e6;
  CHECK(gamma_ratio_P(x, r.xi1, r.xi2) * x * x / (gamma_ratio_P(2 * x, r.xi1, r.xi2) * 4 * x * x) ==
        Approx(1.0).epsilon(1e-5));
}

TEST_CASE("corrector and its orthogonality") {
  for (const auto& f : kFrozen) {
    const auto prm = CknParams::from_pn(f.p, f.n);
    const auto d = Discretization::make(prm, {});
    const CounterexampleFamily fam(d);
    CAPTURE(f.n);
    CAPTURE(f.p);
    const double kappa = f.p * line_power(prm, 2 * f.p - 2) / (4.0 * f.n * line_power(prm, f.p));
    CHECK(fam.kappa() == Approx(kappa).epsilon(1e-10));
    CHECK(fam.C0() == Approx(f.p * f.p / (4.0 * f.n) * prm.Lambda - kappa).epsilon(1e-10));
    CHECK(fam.corrector_residual() <= 1e-7);
    const auto o = fam.orthogonality();
    CHECK(std::abs(o.bubble) <= 1e-8);
    CHECK(std::abs(o.ds) <= 1e-8);
    CHECK(std::abs(o.kernel) <= 1e-8);
    const auto w0 = fam.w(0.0);
    CHECK((w0.profiles() - ZonalField::bubble(d).profiles()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(fam.w(0.1), std::invalid_argument);
  }
}

TEST_CASE("nearest bubble") {
  const auto d = Discretization::make(CknParams::from_pn(4.0, 3), {});
  const auto fit = nearest_bubble(ZonalField::bubble(d, 0.8));
  CHECK(fit.t_star == Approx(0.8).epsilon(1e-8));
  CHECK(fit.distance <= 1e-8);
  // translation equivariance on grid shifts
  const auto w = counterexample(d, 0.02);
  const auto base = nearest_bubble(w);
  for (int k : {7, -23}) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(w.profiles().rows(), w.profiles().cols());
    const int N = d->N();
    for (int i = 0; i < N; ++i)
      if (i - k >= 0 && i - k < N) P.row(i) = w.profiles().row(i - k);
    const auto shifted = nearest_bubble(ZonalField(d, P));
    CHECK(shifted.t_star - base.t_star == Approx(k * d->h()).epsilon(1e-8));
    CHECK(shifted.distance == Approx(base.distance).epsilon(1e-8));
  }
  CHECK(std::abs(base.stationarity) <= 1e-8 * h1_norm(w));
}

TEST_CASE("projection onto the kernel direction") {
  const auto d = Discretization::make(CknParams::from_pn(3.0, 3), {});
  const CounterexampleFamily fam(d);
  const auto y = project_Y(fam.naive(0.01), 0.0);
  // coefficient on V^{p/2} Y_1, and theta_n = sqrt(m1) Y_1
  CHECK(y.coefficient == Approx(0.01 * std::sqrt(4.0 * std::numbers::pi / 3.0)).epsilon(1e-10));
  CHECK(std::abs(h1_inner(y.remainder, fam.phi())) <= 1e-12 * h1_norm(fam.phi()));
}

TEST_CASE("sharpness slopes") {
  const auto d = Discretization::make(CknParams::from_pn(4.0, 3), {});
  const auto rep = sharpness_study(d, default_mus());
  CHECK(rep.slope_residual == Approx(3.0).epsilon(0.1 / 3.0));
  CHECK(rep.slope_distance == Approx(1.0).epsilon(0.02));
  CHECK(rep.slope_naive == Approx(2.0).epsilon(0.05));
  CHECK(rep.slope_projY == Approx(1.0).epsilon(0.1));
  CHECK(rep.slope_perp == Approx(2.0).epsilon(0.05));
  CHECK(rep.ratio_drift <= 0.05);
  CHECK(rep.ratio_limit >= 0.95 * compute_R_gamma(d->params()).value);
  CHECK_THROWS_AS(sharpness_study(d, {1e-3, 2e-3}), std::invalid_argument);
  CHECK(loglog_slope({1.0, 10.0, 100.0}, {2.0, 200.0, 20000.0}) == Approx(2.0));
}

TEST_CASE("elementary inequalities") {
  // p = 4: f(x+y) - f(x) - f'(x) y = 3 x y^2 + y^3
  CHECK(ineq_first_ratio(4.0, 1.0, 1.0) == Approx(4.0 / 2.0));
  CHECK(ineq_first_ratio(4.0, 2.0, 0.5) == Approx((3 * 2 * 0.25 + 0.125) / (2 * 0.25 + 0.125)));
  // third-order remainder is O(y^4)
  const double r1 = ineq_third_ratio(5.0, 1.0, 1e-2), r2 = ineq_third_ratio(5.0, 1.0, 1e-3);
  CHECK(r1 == Approx(r2).epsilon(0.05));
  CHECK(ineq_third_ratio(3.5, 1.0, 0.9) < 0.0);
  for (double p : {2.5, 3.0, 3.5, 4.0, 6.0}) {
    const auto ec = elementary_constants(p, 10000, 7);
    CAPTURE(p);
    CHECK(std::isfinite(ec.first));
    CHECK(std::isfinite(ec.second));
    CHECK(std::isfinite(ec.third));
    CHECK(ec.stable());
    const auto again = elementary_constants(p, 10000, 7);
    CHECK(again.first == ec.first);
  }
}
