#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lcl/dense_path.hpp"
#include "lcl/solver.hpp"

namespace lcl {

using Mat2 = std::array<double, 4>;  // row-major {a11, a12, a21, a22}
using Vec2 = std::array<double, 2>;

inline Mat2 mat2_identity() { return {1.0, 0.0, 0.0, 1.0}; }
Mat2 mat2_mul(const Mat2& a, const Mat2& b);
double mat2_det(const Mat2& a);
double mat2_norm(const Mat2& a);  // Frobenius
Mat2 mat2_inverse(const Mat2& a);

// (u, y, A): velocity, particle position on T^2, cocycle matrix.
struct TripleState {
    VelocityField u;
    Vec2 y{0.0, 0.0};
    Mat2 A = mat2_identity();

    double det_defect() const { return std::abs(mat2_det(A) - 1.0); }
};

// Unit direction modulo sign; stored representative has its first nonzero
// component positive.
struct ProjectiveState {
    Vec2 v{1.0, 0.0};
    void canonicalize();
};

// Particle trajectory at the substep nodes of a velocity path, stored as the
// continuous lift (not wrapped) so that cubic interpolation is safe across
// the 2pi seam.
struct ParticlePath {
    double t0 = 0.0, h = 0.0;
    std::vector<Vec2> y;  // unwrapped

    Vec2 at_node(int i) const { return y[i]; }
    Vec2 interp(double t) const;  // cubic, unwrapped
};

// Classical RK4 for dy/dt = u(t, y) along a stored velocity path.  In all
// advance_* routines dt must tile [t0, t1] with an integer number of steps.
Vec2 advance_particle(const DensePath& path, const Vec2& y0, double t0, double t1,
                      double dt, ParticlePath* record = nullptr);

// RK4 for dA/dt = Du(t, y(t)) A with y(t) interpolated from the recorded
// particle path.
Mat2 advance_cocycle(const DensePath& path, const ParticlePath& ypath,
                     const Mat2& A0, double t0, double t1, double dt,
                     bool renorm_det = false);

// RK4 with per-step renormalization for the projective direction equation.
Vec2 advance_projective(const DensePath& path, const ParticlePath& ypath,
                        const Vec2& v0, double t0, double t1, double dt);

// Joint RK4 advance of (y, A[, v]) over a full stored path, one eval sweep
// per stage shared among the three equations.
struct UnitAdvanceResult {
    Vec2 y;            // wrapped
    Mat2 A;
    Vec2 v;            // unit
    double log_growth; // log |A(t1) v0| accumulated before renormalization
};

UnitAdvanceResult advance_triple_unit(const DensePath& path, const Vec2& y0,
                                      const Mat2& A0, const Vec2& v0,
                                      double dt_ode);

struct StepTripleOptions {
    double dt = 1e-3;        // PDE substep
    double dt_ode = 0.0;     // 0: same as dt
    bool renorm_det = false; // A <- A / sqrt(det A) at the unit boundary
};

// The unit-time map R_1 of the discrete random dynamical system: evolves the
// velocity under one noise segment and transports (y, A) along it.
TripleState step_triple(const TripleState& state, const NoiseRealization& zeta,
                        const StepTripleOptions& opts,
                        DensePath* path_out = nullptr);

}  // namespace lcl
