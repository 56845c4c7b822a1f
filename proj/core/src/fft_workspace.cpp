#include "lcl/fft_workspace.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace lcl {

namespace {
// The FFTW planner is not thread-safe; plan creation/destruction is global.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}
}  // namespace

FftWorkspace::FftWorkspace(int N) : N_(N) {
    std::lock_guard<std::mutex> lk(planner_mutex());
    for (auto& p : rbuf_) p = fftw_alloc_real(nreal());
    for (auto& p : cbuf_)
        p = reinterpret_cast<Complex*>(fftw_alloc_complex(ncplx()));
    cscratch_ = reinterpret_cast<Complex*>(fftw_alloc_complex(ncplx()));
    plan_fwd_ = fftw_plan_dft_r2c_2d(N_, N_, rbuf_[0],
                                     reinterpret_cast<fftw_complex*>(cbuf_[0]),
                                     FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_2d(N_, N_,
                                     reinterpret_cast<fftw_complex*>(cscratch_),
                                     rbuf_[0], FFTW_ESTIMATE);
}

FftWorkspace::~FftWorkspace() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    for (auto& p : rbuf_) fftw_free(p);
    for (auto& p : cbuf_) fftw_free(reinterpret_cast<fftw_complex*>(p));
    fftw_free(reinterpret_cast<fftw_complex*>(cscratch_));
}

double* FftWorkspace::real_buf(int i) { return rbuf_[i]; }
Complex* FftWorkspace::cplx_buf(int i) { return cbuf_[i]; }

void FftWorkspace::c2r(const Complex* src, double* dst) {
    // multidim c2r destroys its input, so go through the scratch copy
    std::memcpy(cscratch_, src, ncplx() * sizeof(Complex));
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(cscratch_), dst);
}

void FftWorkspace::r2c(const double* src, Complex* dst) {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_),
                         const_cast<double*>(src),
                         reinterpret_cast<fftw_complex*>(dst));
    double inv = 1.0 / (double(N_) * N_);
    for (std::size_t i = 0; i < ncplx(); ++i) dst[i] *= inv;
}

}  // namespace lcl
