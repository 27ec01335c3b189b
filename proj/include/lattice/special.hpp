#pragma once

#include "lattice/core.hpp"

namespace lattice {

// Generalized exponential integral E_s(w) = int_1^inf e^{-wx} x^{-s} dx for s > 0, Re w >= 0.
// w = 0 is allowed when s > 1.
cplx expint_e(double s, cplx w);

}  // namespace lattice
