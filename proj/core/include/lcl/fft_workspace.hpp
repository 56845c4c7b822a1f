#pragma once

#include <complex>

#include "lcl/grid.hpp"

namespace lcl {

using Complex = std::complex<double>;

// Per-integrator FFT scratch: plans plus a fixed set of aligned buffers.
// Not shareable between threads; each solver instance owns one.  Plans are
// created with FFTW_ESTIMATE so that plan choice (and hence roundoff) is
// reproducible run to run.
class FftWorkspace {
  public:
    static constexpr int kRealBufs = 10;
    static constexpr int kCplxBufs = 4;

    explicit FftWorkspace(int N);
    ~FftWorkspace();

    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;

    int N() const { return N_; }
    std::size_t nreal() const { return std::size_t(N_) * N_; }
    std::size_t ncplx() const { return std::size_t(N_) * (N_ / 2 + 1); }

    double* real_buf(int i);
    Complex* cplx_buf(int i);

    // Backward transform (spectrum -> collocation values), unnormalized sum.
    // src is preserved; dst must be one of this workspace's buffers or
    // another fftw-aligned array of the right size.
    void c2r(const Complex* src, double* dst);

    // Forward transform normalized by 1/N^2, so r2c(c2r(x)) == x.
    void r2c(const double* src, Complex* dst);

  private:
    int N_;
    void* plan_fwd_;
    void* plan_bwd_;
    double* rbuf_[kRealBufs];
    Complex* cbuf_[kCplxBufs];
    Complex* cscratch_;  // c2r input (destroyed by fftw)
};

}  // namespace lcl
