#pragma once

#include <array>
#include <complex>

#include "lcl/field.hpp"

namespace lcl {

// Sobolev order of the phase space; the forcing directions are normalized in
// this norm.
inline constexpr int kPhaseSpaceOrder = 5;

// One direction of the forced space: the span of the eight lowest
// trigonometric divergence-free fields
//
//   E_j(x) = jperp * cos<j,x>   (j1 > 0, or j1 = 0 and j2 > 0)
//   E_j(x) = jperp * sin<j,x>   (j1 < 0, or j1 = 0 and j2 < 0)
//
// with jperp = (-j2, j1) and j ranging over the index set
// I = { j != 0 : |j_i| <= 1 }.
struct ForcedMode {
    int j1, j2;
    bool cos_type;
    double jperp1, jperp2;
    double j_sq;       // |j|^2
    double norm_v5;    // ||E_j||_{V^5} = pi*sqrt(2)*|j|^6

    // canonical lattice representative (k2 > 0, or k2 = 0 and k1 > 0)
    int c1, c2;
    // velocity amplitude of E_j at the canonical mode (conjugate pair implied)
    Complex vamp1, vamp2;
    // scalar vorticity amplitude of curl E_j at the canonical mode
    Complex wamp;

    // pointwise value of E_j
    void eval(double x1, double x2, double out[2]) const;
};

class ForcingBasis {
  public:
    static constexpr int size() { return 8; }
    static const std::array<ForcedMode, 8>& modes();
    static const ForcedMode& mode(int i) { return modes()[i]; }
    static int index_of(int j1, int j2);

    // Accumulates coeff * e_j (the V^5-normalized direction) into the field.
    static void add_normalized(VelocityField& f, int i, double coeff);

    // E_j without normalization.
    static void add_raw(VelocityField& f, int i, double coeff);

    // Evaluates sum_i coeffs[i] * e_j at a point.
    static void eval_normalized(const double coeffs[8], double x1, double x2,
                                double out[2]);
};

}  // namespace lcl
