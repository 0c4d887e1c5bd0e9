#pragma once

#include <vector>

#include "ckn/cylinder.hpp"

namespace ckn {

/// Radial profile u(r) on R^n -> cylinder field v(s) = r^{sqrt(Lambda)} u(r), s = -ln r.
/// Resampled onto the grid by local degree-7 Lagrange interpolation; grid nodes
/// outside the sampled range are set to zero. Result lives in degree 0.
ZonalField emden_fowler(const std::vector<double>& radii, const std::vector<double>& u, DiscPtr d);

/// Inverse map: evaluates u(r) = r^{-sqrt(Lambda)} v(-ln r) at the given radii
/// from the degree-0 profile (zero outside [-S, S]).
std::vector<double> inverse_emden_fowler(const ZonalField& v, const std::vector<double>& radii);

/// Local Lagrange interpolation of order+1 points; xs strictly monotone.
double lagrange_interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x,
                            int order = 7);

}  // namespace ckn
