#pragma once

#include "lcl/noise.hpp"
#include "lcl/transvection.hpp"

namespace lcl {

// Time profiles of one shear segment:
//   g(t) = nu a1 + a_j psi_j(t),  a_j = a1 (1 - e^nu) / int_0^1 e^{nu s} psi_j,
//   f(t) = int_0^t e^{-nu(t-s)} g(s) ds,
// so f(0) = f(1) = 0 and int_0^1 f = a1.  The flow u = f(t) * (spatial shear)
// solves the forced equation with the control g(t) * (spatial shear), and B
// vanishes on it identically.
struct ShearProfile {
    double nu = 1.0;
    double a1 = 0.0;
    double aj = 0.0;
    int j_index = 2;  // oscillatory basis index
    TimeBasis basis;

    double g(double t) const;
    double f(double t) const;
};

ShearProfile make_shear_profile(double a1, double nu, const NoiseParams& params);

// Largest per-segment displacement whose control fits the support box with a
// 10% margin, together with the chosen oscillatory index.
struct ShearFeasibility {
    double a1_max = 0.0;
    int j_index = 2;
    double ratio = 0.0;  // |a_j| / |a1|
};

ShearFeasibility shear_feasibility(const NoiseParams& params, double nu);

enum class ShearAxis { Horizontal, Vertical };

// Position shear of Prop-5.2 type: moves one coordinate of the tracked
// particle by a1 while keeping u(1) = 0 and the cocycle frozen.
// `phase` is the passive coordinate (y02 for horizontal, y1# vertical).
NoiseRealization make_position_shear(ShearAxis axis, double phase, double a1,
                                     double nu, const NoiseParams& params);

// Matrix shear at y~ = (pi/2, pi/2): multiplies the cocycle by T12(-a1) or
// T21(-a1) while fixing u and y.
NoiseRealization make_matrix_shear(Transvection::Kind kind, double a1, double nu,
                                   const NoiseParams& params);

}  // namespace lcl
