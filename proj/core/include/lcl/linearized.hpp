#pragma once

#include <Eigen/Dense>

#include "lcl/lagrangian.hpp"

namespace lcl {

// Tangent of the unit-time triple map at a stored trajectory.
struct TangentTriple {
    VelocityField v;
    Vec2 z{0.0, 0.0};
    Mat2 B{0.0, 0.0, 0.0, 0.0};
    double sl2_tangency = 0.0;  // tr(A(1)^{-1} B(1))
};

// Everything the linearized solver needs about one nonlinear unit step:
// dense velocity output, the driving segment (to rebuild predictor stages),
// and the initial (y, A).
struct TripleTrajectory {
    GridSpec grid;
    NoiseRealization eta;
    DensePath path;
    Vec2 y0{0.0, 0.0};
    Mat2 A0 = mat2_identity();
    double dt = 1e-3;

    static TripleTrajectory make(const TripleState& z0,
                                 const NoiseRealization& eta, double dt);
};

// Integrates the linearized triple system along the trajectory for a control
// direction zeta.  The velocity tangent is stepped by the exact derivative
// of the nonlinear scheme (same integrating-factor midpoint structure, Q
// evaluated at the stored state and recomputed predictor); (z, B) ride the
// same RK4 stages as the nonlinear (y, A), so central differences of the
// nonlinear map match the output to O(eps^2).
class LinearizedSolver {
  public:
    explicit LinearizedSolver(const TripleTrajectory& traj);
    ~LinearizedSolver();

    TangentTriple solve(const NoiseRealization& zeta,
                        DensePath* vpath_out = nullptr);

    const TripleTrajectory& trajectory() const { return traj_; }

  private:
    void precompute();
    void linearized_rhs(const double* u1, const double* u2, const double* dwx,
                        const double* dwy, const std::vector<Complex>& wv,
                        std::vector<Complex>& out);

    const TripleTrajectory& traj_;
    FftWorkspace ws_;
    int n_steps_;
    // physical-space fields of the nonlinear trajectory, per substep:
    // {u1, u2, d1 w, d2 w} at the step start and at the predictor stage
    std::vector<std::vector<double>> phys_;
    std::vector<Complex> wv_, wvstar_, nl0_, nl1_;
    std::vector<double> lam_;
    DensePath vpath_;
};

struct GramianReport {
    std::string trajectory_id;
    int K_v = 2;
    int L_c = 12;
    std::vector<double> singular_values;
    int rank = 0;
    double threshold = 1e-10;
    int dim_velocity = 0;  // 2 per retained mode pair
    int dim_total = 0;     // velocity + 2 position + 3 matrix-tangent
    int velocity_block_rank = 0;
};

// Discretizes the control-to-tangent map A on the K_v truncation: columns
// are solve() outputs over the control basis {psi_l e_j}, l <= L_c in the
// Fourier-cosine time basis; reports the singular values of the resulting
// real matrix.
GramianReport gramian(const TripleTrajectory& traj, int K_v, int L_c,
                      double threshold = 1e-10);

// Real coordinates of a divergence-free field on the modes |k_i| <= K_v
// (canonical pairs, L^2 scaling).
Eigen::VectorXd velocity_coords(const VelocityField& v, int K_v);

}  // namespace lcl
