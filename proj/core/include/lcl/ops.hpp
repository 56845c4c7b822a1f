#pragma once

#include <vector>

#include "lcl/fft_workspace.hpp"
#include "lcl/field.hpp"

namespace lcl {

// Dealiased rectangular block of a half spectrum: k1 in [-K,K], k2 in [0,K],
// index (k1+K)*(K+1)+k2.  Entries with k2 = 0 and k1 <= 0 are kept zero; the
// canonical representative of those pairs is (|k1|, 0).  This is the compact
// snapshot format used by dense output and by the point-evaluation kernel.
struct SpectrumBlock {
    int K = 0;
    std::vector<Complex> a1, a2;

    void resize(int K_) {
        K = K_;
        std::size_t n = std::size_t(2 * K + 1) * (K + 1);
        a1.assign(n, Complex(0, 0));
        a2.assign(n, Complex(0, 0));
    }
    std::size_t index(int k1, int k2) const {
        return std::size_t(k1 + K) * (K + 1) + k2;
    }
    std::size_t size() const { return a1.size(); }
};

void field_to_block(const VelocityField& f, SpectrumBlock& out);
VelocityField block_to_field(const GridSpec& grid, const SpectrumBlock& b);

// dst = sum_i w[i] * src[i]  (all blocks share K)
void blend_blocks(SpectrumBlock& dst, const SpectrumBlock* const src[4],
                  const double w[4]);

// Pointwise velocity data produced by exact trigonometric summation over the
// retained modes: value, Jacobian, and optionally the second derivatives.
struct PointEval {
    double u[2];
    double du[2][2];      // du[c][j] = d_j u_c
    double d2u[2][2][2];  // d2u[c][j][l] = d_j d_l u_c
};

// order: 0 = value, 1 = +Jacobian, 2 = +second derivatives.
void eval_block(const SpectrumBlock& b, double x1, double x2, int order,
                PointEval& out);
void eval_field(const VelocityField& f, double x1, double x2, int order,
                PointEval& out);

// Leray projection of raw per-mode 2-vectors given in the same r2c half
// layout as VelocityField storage.  The k = 0 entry is discarded; modes
// outside the dealias cutoff are dropped.  Throws SymmetryViolation if the
// stored k2 = 0 line is not conjugate-symmetric within tol.
VelocityField leray_project(const GridSpec& grid, const std::vector<Complex>& raw1,
                            const std::vector<Complex>& raw2, double tol = 1e-12);

// B(u) = Pi(<u,grad>u), dealiased pseudo-spectral product.
VelocityField nonlinear_term(const VelocityField& u, FftWorkspace& ws);

// Q(u)v = Pi(<u,grad>v + <v,grad>u).
VelocityField linearized_term(const VelocityField& u, const VelocityField& v,
                              FftWorkspace& ws);

// <a, b>_{L^2} = (2pi)^2 sum_k a_k . conj(b_k)
double l2_inner(const VelocityField& a, const VelocityField& b);

// Scalar vorticity w = d1 u2 - d2 u1 in the full r2c half layout, and back.
void field_to_vorticity(const VelocityField& f, std::vector<Complex>& w_hat);
VelocityField vorticity_to_field(const GridSpec& grid,
                                 const std::vector<Complex>& w_hat);

}  // namespace lcl
