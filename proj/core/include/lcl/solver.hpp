#pragma once

#include <memory>
#include <optional>

#include "lcl/dense_path.hpp"
#include "lcl/fft_workspace.hpp"
#include "lcl/field.hpp"
#include "lcl/noise.hpp"

namespace lcl {

// Galerkin time stepper for the projected Navier-Stokes equation
//   d_t u + L u + B(u) = eta,  L = -nu Laplace
// in scalar vorticity form.  The linear term is applied exactly through the
// integrating factor; B is advanced by an explicit midpoint stage (second
// order); the forcing segment enters through its closed-form Duhamel
// integral, so trajectories with B = 0 (single modes, shear flows) are exact
// to roundoff at any step size.
class PdeStepper {
  public:
    explicit PdeStepper(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }

    void set_state(const VelocityField& u);
    void set_zero_state();
    VelocityField state() const;
    void state_block(SpectrumBlock& out) const;

    double time() const { return t_; }
    void set_time(double t) { t_ = t; }

    // One substep of size h; zeta may be null (unforced).  Segment-local
    // time: the forcing is evaluated on [t, t+h] within [0,1].
    void substep(const NoiseRealization* zeta, double h);

    // One substep with frozen forcing coefficients (8 entries in the
    // normalized basis e_j), the spec-level `step` operation.
    void substep_sampled(const double coeffs8[8], double h);

    // Predictor (midpoint stage) vorticity of the most recent substep; the
    // linearized solver differentiates through it.
    const std::vector<Complex>& w_hat() const { return w_; }
    const std::vector<Complex>& w_predictor() const { return wstar_; }

    FftWorkspace& workspace() { return ws_; }

    double overflow_guard = 1e8;

  private:
    void nonlinear_w(const std::vector<Complex>& w, std::vector<Complex>& out);
    void apply_forcing_duhamel(const NoiseRealization& zeta, double a, double b,
                               std::vector<Complex>& target);
    void check_stability() const;

    GridSpec grid_;
    FftWorkspace ws_;
    double t_ = 0.0;
    std::vector<Complex> w_, wstar_, n0_, n1_;
    std::vector<double> lam_;        // nu |k|^2 in storage layout
    std::vector<double> ef_full_, ef_half_;  // scratch integrating factors
};

// Single public step on a velocity field (spec operation `step`).
VelocityField step(const VelocityField& u, const double forcing_coeffs8[8],
                   double dt);

// Integrates one unit interval under the control/noise segment zeta.
// Returns u(1); if path is non-null it receives the dense output.
VelocityField evolve_unit(const VelocityField& u0, const NoiseRealization& zeta,
                          double dt, DensePath* path = nullptr);

// Same, holding the workspace/stepper externally for reuse across many calls.
VelocityField evolve_unit_with(PdeStepper& stepper, const VelocityField& u0,
                               const NoiseRealization& zeta, double dt,
                               DensePath* path = nullptr);

// Number of substeps for a unit interval; dt must divide 1 to 1e-9.
int unit_substeps(double dt);

}  // namespace lcl
