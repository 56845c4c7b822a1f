#include "lcl/solver.hpp"

#include <cmath>

namespace lcl {

PdeStepper::PdeStepper(const GridSpec& grid) : grid_(grid), ws_(grid.N) {
    grid_.validate();
    std::size_t n = grid_.spectral_size();
    w_.assign(n, Complex(0, 0));
    wstar_.assign(n, Complex(0, 0));
    n0_.assign(n, Complex(0, 0));
    n1_.assign(n, Complex(0, 0));
    lam_.assign(n, 0.0);
    int H = grid_.half();
    for (int k2 = 0; k2 <= H; ++k2)
        for (int k1 = -H; k1 <= H - 1; ++k1)
            lam_[grid_.index(k1, k2)] = grid_.nu * (double(k1) * k1 + double(k2) * k2);
    ef_full_.assign(n, 0.0);
    ef_half_.assign(n, 0.0);
}

void PdeStepper::set_state(const VelocityField& u) {
    if (u.grid() != grid_) throw GridMismatch("stepper and field grids differ");
    field_to_vorticity(u, w_);
    t_ = 0.0;
}

void PdeStepper::set_zero_state() {
    std::fill(w_.begin(), w_.end(), Complex(0, 0));
    t_ = 0.0;
}

VelocityField PdeStepper::state() const { return vorticity_to_field(grid_, w_); }

void PdeStepper::state_block(SpectrumBlock& out) const {
    int K = grid_.cutoff();
    if (out.K != K) out.resize(K);
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t i = grid_.index(k1, k2);
        double kk = double(k1) * k1 + double(k2) * k2;
        Complex w = w_[i];
        std::size_t d = out.index(k1, k2);
        out.a1[d] = Complex(0, 1) * (double(k2) / kk) * w;
        out.a2[d] = Complex(0, -1) * (double(k1) / kk) * w;
    });
}

// out = -(u . grad w), dealiased; u reconstructed from w.
void PdeStepper::nonlinear_w(const std::vector<Complex>& w,
                             std::vector<Complex>& out) {
    int K = grid_.cutoff();
    std::size_t nr = ws_.nreal();

    Complex* cu1 = ws_.cplx_buf(0);
    Complex* cu2 = ws_.cplx_buf(1);
    Complex* cdx = ws_.cplx_buf(2);
    Complex* cdy = ws_.cplx_buf(3);
    std::fill(cu1, cu1 + ws_.ncplx(), Complex(0, 0));
    std::fill(cu2, cu2 + ws_.ncplx(), Complex(0, 0));
    std::fill(cdx, cdx + ws_.ncplx(), Complex(0, 0));
    std::fill(cdy, cdy + ws_.ncplx(), Complex(0, 0));
    for (int k2 = 0; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            std::size_t i = grid_.index(k1, k2);
            Complex wv = w[i];
            double kk = double(k1) * k1 + double(k2) * k2;
            cu1[i] = Complex(0, 1) * (double(k2) / kk) * wv;
            cu2[i] = Complex(0, -1) * (double(k1) / kk) * wv;
            cdx[i] = Complex(0, double(k1)) * wv;
            cdy[i] = Complex(0, double(k2)) * wv;
        }

    double* ru1 = ws_.real_buf(0);
    double* ru2 = ws_.real_buf(1);
    double* rdx = ws_.real_buf(2);
    double* rdy = ws_.real_buf(3);
    double* prod = ws_.real_buf(4);
    ws_.c2r(cu1, ru1);
    ws_.c2r(cu2, ru2);
    ws_.c2r(cdx, rdx);
    ws_.c2r(cdy, rdy);
    for (std::size_t i = 0; i < nr; ++i)
        prod[i] = ru1[i] * rdx[i] + ru2[i] * rdy[i];

    Complex* conv = ws_.cplx_buf(0);
    ws_.r2c(prod, conv);

    std::fill(out.begin(), out.end(), Complex(0, 0));
    for (int k2 = 0; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            std::size_t i = grid_.index(k1, k2);
            out[i] = -conv[i];
        }
}

void PdeStepper::apply_forcing_duhamel(const NoiseRealization& zeta, double a,
                                       double b, std::vector<Complex>& target) {
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        const ForcedMode& m = ForcingBasis::mode(j);
        double lam = grid_.nu * m.j_sq;
        double d = zeta.duhamel_coeff(j, lam, a, b);
        if (d == 0.0) continue;
        Complex amp = (d / m.norm_v5) * m.wamp;
        std::size_t i = grid_.index(m.c1, m.c2);
        target[i] += amp;
        if (m.c2 == 0) target[grid_.index(-m.c1, 0)] += std::conj(amp);
    }
}

void PdeStepper::check_stability() const {
    for (const Complex& c : w_)
        if (!(std::abs(c.real()) < overflow_guard) ||
            !(std::abs(c.imag()) < overflow_guard))
            throw Instability("spectral coefficient exceeded the overflow guard; dt too large");
}

void PdeStepper::substep(const NoiseRealization* zeta, double h) {
    std::size_t n = w_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double e = std::exp(-lam_[i] * h);
        ef_full_[i] = e;
        ef_half_[i] = std::exp(-lam_[i] * 0.5 * h);
    }

    nonlinear_w(w_, n0_);
    // predictor: exact linear half step + Euler on B + exact forcing
    for (std::size_t i = 0; i < n; ++i)
        wstar_[i] = ef_half_[i] * (w_[i] + 0.5 * h * n0_[i]);
    if (zeta) apply_forcing_duhamel(*zeta, t_, t_ + 0.5 * h, wstar_);

    nonlinear_w(wstar_, n1_);
    for (std::size_t i = 0; i < n; ++i)
        w_[i] = ef_full_[i] * w_[i] + h * ef_half_[i] * n1_[i];
    if (zeta) apply_forcing_duhamel(*zeta, t_, t_ + h, w_);

    t_ += h;
    check_stability();
}

void PdeStepper::substep_sampled(const double coeffs8[8], double h) {
    std::size_t n = w_.size();
    for (std::size_t i = 0; i < n; ++i) {
        ef_full_[i] = std::exp(-lam_[i] * h);
        ef_half_[i] = std::exp(-lam_[i] * 0.5 * h);
    }

    auto add_const_forcing = [&](double span, std::vector<Complex>& target) {
        for (int j = 0; j < ForcingBasis::size(); ++j) {
            if (coeffs8[j] == 0.0) continue;
            const ForcedMode& m = ForcingBasis::mode(j);
            double lam = grid_.nu * m.j_sq;
            double box = lam == 0.0 ? span : -std::expm1(-lam * span) / lam;
            Complex amp = (coeffs8[j] * box / m.norm_v5) * m.wamp;
            std::size_t i = grid_.index(m.c1, m.c2);
            target[i] += amp;
            if (m.c2 == 0) target[grid_.index(-m.c1, 0)] += std::conj(amp);
        }
    };

    nonlinear_w(w_, n0_);
    for (std::size_t i = 0; i < n; ++i)
        wstar_[i] = ef_half_[i] * (w_[i] + 0.5 * h * n0_[i]);
    add_const_forcing(0.5 * h, wstar_);

    nonlinear_w(wstar_, n1_);
    for (std::size_t i = 0; i < n; ++i)
        w_[i] = ef_full_[i] * w_[i] + h * ef_half_[i] * n1_[i];
    add_const_forcing(h, w_);

    t_ += h;
    check_stability();
}

int unit_substeps(double dt) {
    if (!(dt > 0)) throw ConfigError("dt must be positive");
    double steps = 1.0 / dt;
    int n = int(std::lround(steps));
    if (n < 1 || std::abs(n * dt - 1.0) > 1e-9)
        throw ConfigError("dt must divide the unit interval");
    return n;
}

VelocityField step(const VelocityField& u, const double forcing_coeffs8[8],
                   double dt) {
    PdeStepper s(u.grid());
    s.set_state(u);
    s.substep_sampled(forcing_coeffs8, dt);
    return s.state();
}

VelocityField evolve_unit_with(PdeStepper& stepper, const VelocityField& u0,
                               const NoiseRealization& zeta, double dt,
                               DensePath* path) {
    stepper.set_state(u0);
    int n = unit_substeps(dt);
    if (path) {
        if (path->steps() != n || path->grid() != stepper.grid() ||
            path->t0() != 0.0 || path->h() != dt)
            *path = DensePath(stepper.grid(), 0.0, dt, n);
        path->set_kinks(zeta.breakpoints());
        stepper.state_block(path->snapshot(0));
    }
    for (int i = 0; i < n; ++i) {
        stepper.set_time(i * dt);
        stepper.substep(&zeta, dt);
        if (path) stepper.state_block(path->snapshot(i + 1));
    }
    return stepper.state();
}

VelocityField evolve_unit(const VelocityField& u0, const NoiseRealization& zeta,
                          double dt, DensePath* path) {
    PdeStepper stepper(u0.grid());
    return evolve_unit_with(stepper, u0, zeta, dt, path);
}

}  // namespace lcl
