#pragma once

#include <vector>

#include "ckn/cylinder.hpp"

namespace ckn {

/// Generalized eigenpairs of  -phi'' + (lambda_ell + Lambda) phi = gamma V_0^{p-2} phi.
struct SectorSpectrum {
  int ell = 0;
  std::vector<double> eigenvalues;               // ascending
  std::vector<Eigen::VectorXd> eigenprofiles;    // h phi^T B phi = 1, largest entry positive
  std::vector<int> parity;                       // +1 even, -1 odd in s
  std::vector<double> residuals;                 // sqrt(h) |A phi - gamma B phi|
  int iterations = 0;
};

/// k smallest eigenpairs of one degree (k <= 10), computed per parity class.
SectorSpectrum eigensolve_sector(const Discretization& d, int ell, int k);
SectorSpectrum eigensolve_sector(const CknParams& prm, int ell, int k);

/// k smallest eigenpairs within one parity class (+1 even, -1 odd).
SectorSpectrum eigensolve_parity(const Discretization& d, int ell, int parity, int k);

/// Smallest eigenvalue above p - 1 + 1e-6 over degrees 0..L.
double gamma3(const Discretization& d);
double gamma3(const CknParams& prm);

}  // namespace ckn
