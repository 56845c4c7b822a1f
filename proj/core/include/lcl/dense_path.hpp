#pragma once

#include <vector>

#include "lcl/ops.hpp"

namespace lcl {

// Dense output of one PDE integration: compact velocity spectra at every
// substep endpoint.  Times between nodes are served by cubic (4-point
// Lagrange) interpolation of the coefficients, matching the stepper's
// second-order accuracy with room to spare for the RK4 consumers.
class DensePath {
  public:
    DensePath() = default;
    DensePath(const GridSpec& grid, double t0, double h, int n_steps);

    const GridSpec& grid() const { return grid_; }
    double t0() const { return t0_; }
    double t1() const { return t0_ + h_ * n_; }
    double h() const { return h_; }
    int steps() const { return n_; }

    SpectrumBlock& snapshot(int i) { return snaps_[i]; }
    const SpectrumBlock& snapshot(int i) const { return snaps_[i]; }

    // Interior times where the coefficients have corners (forcing
    // breakpoints); interpolation stencils are clipped so they never
    // straddle one.
    void set_kinks(std::vector<double> kinks);

    // Cubic interpolation of the spectrum at time t (nodes returned

    // directly).  out is overwritten.
    void spectrum_at(double t, SpectrumBlock& out) const;

    // Point evaluation u(t,x) with derivatives up to the given order.
    void eval(double t, double x1, double x2, int order, PointEval& out) const;

    VelocityField field_at(double t) const;

  private:
    void check_time(double t) const;

    GridSpec grid_;
    double t0_ = 0.0, h_ = 0.0;
    int n_ = 0;
    std::vector<SpectrumBlock> snaps_;
    std::vector<double> kinks_;
};

// Lagrange weights of the 4 nodes {base, base+1, base+2, base+3} (unit
// spacing) evaluated at offset tau from node `base`.
void lagrange4_weights(double tau, double w[4]);

}  // namespace lcl
