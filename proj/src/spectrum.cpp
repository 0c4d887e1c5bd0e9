#include "ckn/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "disc_internal.hpp"

namespace ckn {

namespace {

constexpr int kMaxIter = 3000;
constexpr double kResidualTol = 1e-10;
constexpr double kMassFloor = 1e-300;

}  // namespace

SectorSpectrum eigensolve_parity(const Discretization& d, int ell, int parity, int k) {
  using namespace detail;
  if (k < 1 || k > 10) throw std::invalid_argument("eigensolve: k must be in [1, 10]");
  if (ell < 0 || ell > d.L()) throw std::invalid_argument("eigensolve: degree out of range");
  const auto& prm = d.params();
  const int n = d.N();

  Eigen::VectorXd B = d.V0().array().pow(prm.p - 2.0).max(kMassFloor).matrix();
  SymBand A = axial_band(d, d.lambda(ell) + prm.Lambda);
  SymBand Ar = parity > 0 ? even_reduce(A) : odd_reduce(A);
  Eigen::VectorXd Br = parity > 0 ? even_mass(B) : odd_mass(B);
  BandCholesky chol(Ar);
  if (!chol.ok()) throw NumericalError("eigensolve: stiffness not positive definite");

  const int nr = Ar.n;
  const int m = std::min(k + 6, nr);
  std::mt19937_64 rng(0x5eed0000ULL + 97 * ell + (parity > 0 ? 0 : 1));
  std::normal_distribution<double> nd;
  Eigen::MatrixXd X(nr, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < nr; ++i) X(i, j) = nd(rng);

  Eigen::VectorXd theta;
  std::vector<double> res(k, 1.0);
  int it = 0;
  for (; it < kMaxIter; ++it) {
    Eigen::MatrixXd Y = chol.solve(Eigen::MatrixXd(Br.asDiagonal() * X));
    // column scaling keeps the projected pencil well conditioned
    for (int j = 0; j < m; ++j) Y.col(j) /= Y.col(j).norm();
    Eigen::MatrixXd AY(nr, m);
    for (int j = 0; j < m; ++j) AY.col(j) = Ar.multiply(Y.col(j));
    Eigen::MatrixXd Ap = Y.transpose() * AY;
    Eigen::MatrixXd Bp = Y.transpose() * Br.asDiagonal() * Y;
    Ap = 0.5 * (Ap + Ap.transpose()).eval();
    Bp = 0.5 * (Bp + Bp.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Ap, Bp);
    if (ges.info() != Eigen::Success)
      throw NumericalError("eigensolve: Rayleigh-Ritz failed in sector ell=" + std::to_string(ell) +
                           " at " + prm.label());
    theta = ges.eigenvalues();
    X = Y * ges.eigenvectors();
    AY = AY * ges.eigenvectors();
    bool done = true;
    for (int j = 0; j < k; ++j) {
      const Eigen::VectorXd r = AY.col(j) - theta(j) * Br.cwiseProduct(X.col(j));
      res[j] = r.norm();
      if (!(res[j] <= kResidualTol * std::max(1.0, std::abs(theta(j))))) done = false;
    }
    if (done) break;
  }
  if (it == kMaxIter)
    throw NumericalError("eigensolve: subspace iteration did not converge in sector ell=" +
                         std::to_string(ell) + " at " + prm.label());

  SectorSpectrum out;
  out.ell = ell;
  out.iterations = it + 1;
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd x = parity > 0 ? even_extend(X.col(j), n) : odd_extend(X.col(j), n);
    const double bn = std::sqrt(d.h() * x.dot(B.cwiseProduct(x)));
    x /= bn;
    Eigen::Index imax;
    x.cwiseAbs().maxCoeff(&imax);
    if (x(imax) < 0) x = -x;
    const Eigen::VectorXd r = axial_band(d, d.lambda(ell) + prm.Lambda).multiply(x) -
                              theta(j) * B.cwiseProduct(x);
    out.eigenvalues.push_back(theta(j));
    out.eigenprofiles.push_back(std::move(x));
    out.parity.push_back(parity);
    out.residuals.push_back(std::sqrt(d.h()) * r.norm());
  }
  return out;
}

SectorSpectrum eigensolve_sector(const Discretization& d, int ell, int k) {
  SectorSpectrum e = eigensolve_parity(d, ell, +1, k);
  SectorSpectrum o = eigensolve_parity(d, ell, -1, k);
  std::vector<int> idx;
  for (int j = 0; j < 2 * k; ++j) idx.push_back(j);
  auto val = [&](int j) { return j < k ? e.eigenvalues[j] : o.eigenvalues[j - k]; };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return val(a) < val(b); });
  SectorSpectrum out;
  out.ell = ell;
  out.iterations = e.iterations + o.iterations;
  for (int q = 0; q < k; ++q) {
    const int j = idx[q];
    const SectorSpectrum& src = j < k ? e : o;
    const int jj = j < k ? j : j - k;
    out.eigenvalues.push_back(src.eigenvalues[jj]);
    out.eigenprofiles.push_back(src.eigenprofiles[jj]);
    out.parity.push_back(src.parity[jj]);
    out.residuals.push_back(src.residuals[jj]);
  }
  return out;
}

SectorSpectrum eigensolve_sector(const CknParams& prm, int ell, int k) {
  DiscOptions o;
  o.L = std::max(8, ell);
  return eigensolve_sector(*Discretization::make(prm, o), ell, k);
}

double gamma3(const Discretization& d) {
  const double thr = d.params().p - 1.0 + 1e-6;
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= d.L(); ++l) {
    const SectorSpectrum sp = eigensolve_sector(d, l, 3);
    for (double g : sp.eigenvalues)
      if (g > thr) {
        best = std::min(best, g);
        break;
      }
    if (sp.eigenvalues.front() > best) break;  // higher degrees only increase
  }
  return best;
}

double gamma3(const CknParams& prm) { return gamma3(*Discretization::make(prm)); }

}  // namespace ckn
