#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ckn/cylinder.hpp"
#include "ckn/emden_fowler.hpp"

using namespace ckn;
using doctest::Approx;

namespace {

// int_{S^{n-1}} x^{2k} = |S^{n-2}| B(k + 1/2, (n-1)/2)
double beta_moment(int n, int k) {
  const double sn2 = 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1));
  return sn2 * std::exp(std::lgamma(k + 0.5) + std::lgamma(0.5 * (n - 1)) - std::lgamma(k + 0.5 * n));
}

// int V_0^p over the cylinder
double bubble_p_integral(const CknParams& prm) {
  const double q = 2.0 * prm.p / (prm.p - 2.0);
  return std::pow(prm.beta, prm.p) * prm.sphere() * std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(0.5 * q) - std::lgamma(0.5 * (q + 1.0))) / prm.alpha;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid::make(10.0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(Grid::make(10.0, 127), std::invalid_argument);
  CHECK_THROWS_AS(Grid::make(10.0, 201), std::invalid_argument);  // h = 0.1
  const Grid g = Grid::make(10.0, 401);
  CHECK(g.h == Approx(0.05));
  CHECK(g.nodes()(g.center()) == 0.0);
  CHECK(g.refined().N == 801);
  const Grid d = Grid::default_for(CknParams::from_pn(4.0, 3));
  CHECK(d.N >= 4097);
  CHECK(d.h <= 0.05);
  CHECK(d.S >= 30.0 / std::sqrt(2.0 / 3.0));
}

TEST_CASE("sphere moments against the Beta function") {
  for (int n = 2; n <= 7; ++n)
    for (int k = 0; k <= 5; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(std::abs(sphere_moment(n, k) / beta_moment(n, k) - 1.0) <= 1e-12);
    }
  CHECK(sphere_moment(3, 1) == Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("sphere quadrature") {
  for (int n : {2, 3, 4, 6}) {
    const SphereQuad q = SphereQuad::make(n, 64, 8);
    CAPTURE(n);
    CHECK(q.w.sum() == Approx(sphere_area(n)).epsilon(1e-13));
    const Eigen::MatrixXd G = q.Y.transpose() * q.w.asDiagonal() * q.Y;
    CHECK((G - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-12);
    const double c1 = std::sqrt(n / sphere_area(n));
    for (int i = 0; i < q.M; ++i) CHECK(q.Y(i, 1) == Approx(c1 * q.x(i)).epsilon(1e-12));
    for (int k = 0; k <= 6; ++k)
      CHECK((q.x.array().pow(2 * k).matrix().dot(q.w)) == Approx(beta_moment(n, k)).epsilon(1e-12));
  }
}

TEST_CASE("discretization invariants") {
  const auto prm = CknParams::from_pn(4.0, 3);
  const auto d = Discretization::make(prm, {});
  CHECK(d->signature().find("n=3;p=4;") == 0);
  CHECK(d->rcond_A(0) > 1e-12);
  CHECK(d->lambda(2) == Approx(6.0));
  DiscOptions small;
  small.S = 5.0;
  CHECK_THROWS_AS(Discretization::make(prm, small), std::invalid_argument);
  CHECK(d->refined()->N() == 2 * d->N() - 1);
  CHECK(d->with_L(3)->L() == 3);
}

TEST_CASE("axial stencil is eighth order") {
  const auto prm = CknParams::from_pn(4.0, 3);
  double prev = 0.0;
  for (int N : {1001, 2001}) {
    DiscOptions o;
    o.S = 20.0 / prm.sqrt_lambda();
    o.N = N;
    o.L = 2;
    const auto d = Discretization::make(prm, o);
    Eigen::VectorXd g(d->N()), exact(d->N());
    for (int i = 0; i < d->N(); ++i) {
      const double s = d->s()(i);
      // narrow enough that truncation error stays above roundoff
      g(i) = std::exp(-4.0 * s * s);
      exact(i) = (8.0 - 64.0 * s * s) * std::exp(-4.0 * s * s);  // -g''
    }
    const double err = (d->apply_K(g) - exact).cwiseAbs().maxCoeff();
    if (prev > 0.0) CHECK(std::log2(prev / err) > 7.0);
    prev = err;
  }
}

TEST_CASE("bubble integral against the Gamma closed form") {
  for (auto [n, p] : {std::pair{3, 4.0}, {2, 4.0}, {3, 3.0}, {4, 3.0}, {2, 7.0}, {5, 2.5}}) {
    const auto prm = CknParams::from_pn(p, n);
    const auto d = Discretization::make(prm, {});
    const auto V = ZonalField::bubble(d);
    const double exact = bubble_p_integral(prm);
    CAPTURE(n);
    CAPTURE(p);
    CHECK(std::abs(std::pow(lp_norm(V, p), p) / exact - 1.0) <= 1e-9);
    // the profile equation tested against V itself
    CHECK(h1_inner(V, V) == Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("zonal synthesis and projection") {
  const auto d = Discretization::make(CknParams::from_pn(3.0, 4), {});
  const auto f = ZonalField::from_function(d, [](double s, double x) {
    return std::exp(-s * s) * (1.0 + x + 3.0 * x * x - x * x * x * x);
  });
  CHECK(f.profiles().col(5).cwiseAbs().maxCoeff() <= 1e-12);
  const auto g = ZonalField::project(d, f.synthesize());
  CHECK((g.profiles() - f.profiles()).cwiseAbs().maxCoeff() <= 1e-12);
  const auto sep = ZonalField::separable(d, d->V0(), [](double x) { return x; });
  const double m1 = std::sqrt(sphere_moment(4, 1));
  CHECK((sep.profile(1) - m1 * d->V0()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sep.profile(0).cwiseAbs().maxCoeff() <= 1e-12);
  const auto r = ZonalField::radial(d, d->V0());
  CHECK(r.profile(0)(d->grid().center()) == Approx(d->params().beta * std::sqrt(sphere_area(4))));
  CHECK(l2_inner(2.0 * r - r, r) == Approx(l2_inner(r, r)));
}

TEST_CASE("pointwise map tail fraction") {
  const auto d = Discretization::make(CknParams::from_pn(3.0, 3), {});
  const auto f = ZonalField::separable(d, d->V0(), [](double x) { return x; });
  const auto sq = pointwise_map_diag(f, [](double v) { return v * v; });
  CHECK(sq.tail_fraction <= 1e-20);
  const auto ab = pointwise_map_diag(f, [](double v) { return std::abs(v); });
  CHECK(ab.tail_fraction > 1e-6);
}

TEST_CASE("csv round trip") {
  const auto d = Discretization::make(CknParams::from_pn(4.0, 3), {});
  const auto f = ZonalField::separable(d, d->bubble(0.3), [](double x) { return 1.0 + x * x; });
  std::stringstream ss;
  write_csv(ss, f);
  const auto g = read_csv(ss);
  CHECK(g.disc()->N() == d->N());
  CHECK((g.profiles() - f.profiles()).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream bad("x\n");
  CHECK_THROWS(read_csv(bad));
}

TEST_CASE("mismatched discretizations are rejected") {
  const auto prm = CknParams::from_pn(4.0, 3);
  const auto d1 = Discretization::make(prm, {});
  const auto d2 = d1->with_L(4);
  CHECK_THROWS_AS(h1_inner(ZonalField::bubble(d1), ZonalField::bubble(d2)), std::invalid_argument);
}

TEST_CASE("Emden-Fowler map of the radial bubble") {
  for (auto [n, p] : {std::pair{3, 4.0}, {2, 3.0}, {4, 3.0}}) {
    const auto prm = CknParams::from_pn(p, n);
    const auto d = Discretization::make(prm, {});
    const double lam = 2.3;
    std::vector<double> radii, u;
    for (int i = 0; i < d->N(); ++i) {
      const double r = std::exp(-d->s()(i));
      radii.push_back(r);
      u.push_back(radial_bubble(prm, r, lam));
    }
    const auto v = emden_fowler(radii, u, d);
    const Eigen::VectorXd exact = d->bubble(std::log(lam)) * std::sqrt(prm.sphere());
    CHECK((v.profile(0) - exact).cwiseAbs().maxCoeff() <= 1e-10 * exact.maxCoeff());
    std::vector<double> rr{0.01, 0.5, 1.0, 3.0};
    const auto back = inverse_emden_fowler(ZonalField::bubble(d, std::log(lam)), rr);
    for (std::size_t i = 0; i < rr.size(); ++i)
      CHECK(back[i] == Approx(radial_bubble(prm, rr[i], lam)).epsilon(1e-10));
  }
}

TEST_CASE("lagrange interpolation is exact on polynomials") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 20; ++i) {
    xs.push_back(0.3 * i);
    ys.push_back(1.0 - 2.0 * xs.back() + std::pow(xs.back(), 7));
  }
  CHECK(lagrange_interpolate(xs, ys, 2.71) == Approx(1.0 - 5.42 + std::pow(2.71, 7)).epsilon(1e-12));
}

TEST_CASE("Parseval and grid convergence") {
  const auto prm = CknParams::from_pn(3.0, 3);
  const auto d = Discretization::make(prm, {});
  const auto f = ZonalField::from_function(d, [](double s, double x) { return std::exp(-s * s) * (2.0 - x + x * x * x); });
  CHECK(std::pow(lp_norm(f, 2.0), 2) == Approx(f.profiles().squaredNorm() * d->h()).epsilon(1e-10));
  const auto fine = d->refined();
  const auto fine2 = Discretization::make(prm, {fine->N(), fine->grid().S, 8, 128});
  const double a = lp_norm(ZonalField::bubble(d), 3.0), b = lp_norm(ZonalField::bubble(fine2), 3.0);
  CHECK(std::abs(std::pow(a, 3) / std::pow(b, 3) - 1.0) <= 1e-9);
}

TEST_CASE("square of the kernel direction lives in degrees 0 and 2") {
  for (int n : {2, 3, 5}) {
    const auto prm = CknParams::from_pn(n == 2 ? 4.0 : 3.0, n);
    const auto d = Discretization::make(prm, {});
    const Eigen::VectorXd g = d->V0().array().pow(0.5 * prm.p).matrix();
    const auto sq = pointwise_map(ZonalField::from_profile(d, 1, g), [](double v) { return v * v; });
    const double S = sphere_area(n);
    const Eigen::VectorXd vp = d->V0().array().pow(prm.p).matrix();
    const double c2 = std::sqrt(S * 2.0 * (n - 1) / (n * n * (n + 2.0)));
    CAPTURE(n);
    CHECK((sq.profile(0) - vp / std::sqrt(S)).cwiseAbs().maxCoeff() <= 1e-12 * vp.maxCoeff());
    CHECK((sq.profile(2) - (n / S) * c2 * vp).cwiseAbs().maxCoeff() <= 1e-12 * vp.maxCoeff());
    for (int l : {1, 3, 4, 5}) CHECK(sq.profile(l).cwiseAbs().maxCoeff() <= 1e-12 * vp.maxCoeff());
  }
}
