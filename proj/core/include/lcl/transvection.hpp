#pragma once

#include <vector>

#include "lcl/lagrangian.hpp"

namespace lcl {

// Shear matrix T12(alpha) = [[1,alpha],[0,1]] or T21(beta) = [[1,0],[beta,1]].
struct Transvection {
    enum Kind { T12, T21 };
    Kind kind;
    double param;

    Mat2 matrix() const {
        if (kind == T12) return {1.0, param, 0.0, 1.0};
        return {1.0, 0.0, param, 1.0};
    }
    Transvection inverse() const { return {kind, -param}; }
};

// Writes A, |det A - 1| < tol, as a product of at most 4 transvections
// (left-to-right: A = F[0] * F[1] * ...).  Gaussian elimination on the
// larger off-diagonal pivot; a preparatory T21(1) handles the
// near-diagonal case.  Zero-parameter factors are omitted, so the identity
// returns an empty list.
std::vector<Transvection> transvection_factorize(const Mat2& A, double tol = 1e-9);

Mat2 transvection_product(const std::vector<Transvection>& factors);

}  // namespace lcl
