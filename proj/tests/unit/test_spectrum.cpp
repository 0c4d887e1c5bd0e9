#include <doctest.h>

#include <cmath>

#include "ckn/spectrum.hpp"

using namespace ckn;
using doctest::Approx;

namespace {

// -phi'' + kappa^2 phi = gamma beta^{p-2} sech^2(alpha s) phi has gamma_j = c m (m + 1), m = kappa/alpha + j.
double poschl_teller(const CknParams& prm, int ell, int j) {
  const double kappa = std::sqrt(ell * (ell + prm.n - 2.0) + prm.Lambda);
  const double m = kappa / prm.alpha + j;
  return (prm.p - 2.0) * (prm.p - 2.0) / (2.0 * prm.p) * m * (m + 1.0);
}

}  // namespace

TEST_CASE("sector eigenvalues match the sech^2 closed form") {
  for (auto [n, p] : {std::pair{3, 4.0}, {2, 4.0}, {4, 3.0}, {5, 2.5}, {2, 9.0}}) {
    const auto prm = CknParams::from_pn(p, n);
    const auto d = Discretization::make(prm, {});
    for (int ell = 0; ell <= 3; ++ell) {
      const auto sp = eigensolve_sector(*d, ell, 4);
      REQUIRE(sp.eigenvalues.size() == 4);
      for (int j = 0; j < 4; ++j) {
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(ell);
        CAPTURE(j);
        CHECK(sp.eigenvalues[j] == Approx(poschl_teller(prm, ell, j)).epsilon(1e-8));
        CHECK(sp.parity[j] == (j % 2 == 0 ? 1 : -1));
        CHECK(sp.residuals[j] <= 1e-8);
      }
    }
  }
}

TEST_CASE("degenerate spectrum on the curve") {
  for (auto [n, p] : {std::pair{3, 4.0}, {3, 5.5}, {4, 3.0}, {2, 3.0}}) {
    const auto prm = CknParams::from_pn(p, n);
    const auto s0 = eigensolve_sector(prm, 0, 3);
    const auto s1 = eigensolve_sector(prm, 1, 1);
    CHECK(s0.eigenvalues[0] == Approx(1.0).epsilon(1e-9));
    CHECK(s0.eigenvalues[1] == Approx(p - 1.0).epsilon(1e-9));
    CHECK(s1.eigenvalues[0] == Approx(p - 1.0).epsilon(1e-9));
    const double g3 = gamma3(prm);
    CHECK(g3 > p - 1.0 + 1e-3);
    CHECK(g3 == Approx(std::min(poschl_teller(prm, 0, 2), poschl_teller(prm, 2, 0))).epsilon(1e-8));
  }
}

TEST_CASE("eigenprofiles") {
  const auto d = Discretization::make(CknParams::from_pn(4.0, 3), {});
  const auto sp = eigensolve_sector(*d, 0, 2);
  Eigen::VectorXd B = d->V0().array().pow(2.0).matrix();
  for (const auto& phi : sp.eigenprofiles) {
    CHECK(d->h() * phi.dot(B.asDiagonal() * phi) == Approx(1.0).epsilon(1e-12));
    CHECK(phi.maxCoeff() >= -phi.minCoeff());
  }
  // ground state is a multiple of V_0
  const Eigen::VectorXd& g = sp.eigenprofiles[0];
  const double c = g.dot(d->V0()) / d->V0().squaredNorm();
  CHECK((g - c * d->V0()).cwiseAbs().maxCoeff() <= 1e-8 * g.cwiseAbs().maxCoeff());
  // odd partner is a multiple of d_s V_0
  const Eigen::VectorXd& o = sp.eigenprofiles[1];
  const Eigen::VectorXd ds = d->bubble_ds(0.0);
  const double c2 = o.dot(ds) / ds.squaredNorm();
  CHECK((o - c2 * ds).cwiseAbs().maxCoeff() <= 1e-8 * o.cwiseAbs().maxCoeff());
}

TEST_CASE("parity classes") {
  const auto d = Discretization::make(CknParams::from_pn(3.0, 4), {});
  const auto even = eigensolve_parity(*d, 1, 1, 2);
  const auto odd = eigensolve_parity(*d, 1, -1, 2);
  const auto prm = d->params();
  CHECK(even.eigenvalues[0] == Approx(poschl_teller(prm, 1, 0)).epsilon(1e-9));
  CHECK(even.eigenvalues[1] == Approx(poschl_teller(prm, 1, 2)).epsilon(1e-9));
  CHECK(odd.eigenvalues[0] == Approx(poschl_teller(prm, 1, 1)).epsilon(1e-9));
  CHECK_THROWS(eigensolve_sector(*d, 0, 11));
}
