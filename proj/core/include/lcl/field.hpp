#pragma once

#include <array>
#include <complex>
#include <vector>

#include "lcl/grid.hpp"

namespace lcl {

using Complex = std::complex<double>;

// Divergence-free, zero-mean velocity field on T^2 in truncated Fourier
// representation.  Immutable in spirit: solver and planner code construct a
// field once and then only read it.  Invariants (Hermitian symmetry on the
// stored k2 = 0 line, k.u_k = 0, no mean mode) are maintained by every
// constructor path; check_* helpers exist for tests.
class VelocityField {
  public:
    VelocityField() = default;
    explicit VelocityField(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }

    const std::vector<Complex>& comp(int c) const { return c == 0 ? u1_ : u2_; }
    std::vector<Complex>& comp(int c) { return c == 0 ? u1_ : u2_; }

    // Amplitude of mode (k1,k2) for any k in the retained square, including
    // k2 < 0 (reconstructed by conjugation).
    std::array<Complex, 2> coeff(int k1, int k2) const;

    // Adds a Hermitian pair: u_{k} += a, u_{-k} += conj(a).  The mean mode and
    // non-retained modes are rejected.
    void add_mode_pair(int k1, int k2, Complex a1, Complex a2);

    void set_zero();
    bool is_zero() const;

    // this += alpha * other
    void axpy(double alpha, const VelocityField& other);
    void scale(double alpha);

    // V^m norm: 2*pi * sqrt(sum_k |k|^{2m} |u_k|^2), sum over the full lattice.
    double sobolev_norm(int m) const;
    double l2_norm() const { return sobolev_norm(0); }

    double max_abs_coeff() const;

    // Test support: worst-case invariant defects.
    double divergence_defect() const;   // max over retained k of |k . u_k|
    double hermitian_defect() const;    // k2 = 0 line conjugate-pair mismatch

    void require_same_grid(const VelocityField& other) const;

  private:
    GridSpec grid_;
    std::vector<Complex> u1_, u2_;
};

// Iterates the canonical half lattice (k2 = 0, k1 >= 1) U (k2 >= 1, any k1)
// restricted to |k_i| <= K.
template <typename Fn>
void for_each_canonical(int K, Fn&& fn) {
    for (int k1 = 1; k1 <= K; ++k1) fn(k1, 0);
    for (int k2 = 1; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) fn(k1, k2);
}

}  // namespace lcl
