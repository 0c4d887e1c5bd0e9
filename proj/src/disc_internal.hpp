#pragma once

#include "banded.hpp"
#include "ckn/cylinder.hpp"

namespace ckn::detail {

// kscale K + shift I on the axial grid.
SymBand axial_band(const Discretization& d, double shift, double kscale = 1.0);

// Coefficients c_k of -h^2 d^2 = sum_k c_k (-delta^2)^k, stencil offsets -q..q.
std::vector<double> central_stencil(int q);

}  // namespace ckn::detail
