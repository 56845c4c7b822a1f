#pragma once

#include <vector>

#include "lcl/forcing_basis.hpp"

namespace lcl {

// The saturation recursion: E_0 = span{e_j}, E_{k+1} = E_k + span{Q(zeta) xi :
// zeta in E_k, xi in E_0}, computed with the exact two-mode convolution of
// trigonometric fields restricted to |k_i| <= R.
struct SaturationLadder {
    int R = 3;
    int depth = 8;
    std::vector<int> dims;     // dims[k] = dim E_k at the cutoff
    int covered_at_level = -1; // first level spanning every retained mode
    int full_dim = 0;          // 2 per lattice pair at the cutoff
};

SaturationLadder saturation_ladder(int R, int depth, double tol = 1e-10);

}  // namespace lcl
