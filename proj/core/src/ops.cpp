#include "lcl/ops.hpp"

#include <cmath>
#include <numbers>

namespace lcl {

void field_to_block(const VelocityField& f, SpectrumBlock& out) {
    const GridSpec& g = f.grid();
    int K = g.cutoff();
    if (out.K != K) out.resize(K);
    const auto& u1 = f.comp(0);
    const auto& u2 = f.comp(1);
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t src = g.index(k1, k2);
        std::size_t dst = out.index(k1, k2);
        out.a1[dst] = u1[src];
        out.a2[dst] = u2[src];
    });
}

VelocityField block_to_field(const GridSpec& grid, const SpectrumBlock& b) {
    VelocityField f(grid);
    int K = std::min(grid.cutoff(), b.K);
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t src = b.index(k1, k2);
        if (b.a1[src] == Complex(0, 0) && b.a2[src] == Complex(0, 0)) return;
        f.add_mode_pair(k1, k2, b.a1[src], b.a2[src]);
    });
    return f;
}

void blend_blocks(SpectrumBlock& dst, const SpectrumBlock* const src[4],
                  const double w[4]) {
    int K = src[0]->K;
    if (dst.K != K) dst.resize(K);
    std::size_t n = dst.size();
    for (std::size_t i = 0; i < n; ++i) {
        dst.a1[i] = w[0] * src[0]->a1[i] + w[1] * src[1]->a1[i] +
                    w[2] * src[2]->a1[i] + w[3] * src[3]->a1[i];
        dst.a2[i] = w[0] * src[0]->a2[i] + w[1] * src[1]->a2[i] +
                    w[2] * src[2]->a2[i] + w[3] * src[3]->a2[i];
    }
}

namespace {

// Tables of e^{i k x} for k = -K..K (p1) and k = 0..K (p2), by recurrence.
struct PhaseTables {
    std::vector<double> p1re, p1im, p2re, p2im;
    void fill(int K, double x1, double x2) {
        p1re.resize(2 * K + 1);
        p1im.resize(2 * K + 1);
        p2re.resize(K + 1);
        p2im.resize(K + 1);
        double c1 = std::cos(x1), s1 = std::sin(x1);
        p1re[K] = 1.0;
        p1im[K] = 0.0;
        for (int k = 1; k <= K; ++k) {
            p1re[K + k] = p1re[K + k - 1] * c1 - p1im[K + k - 1] * s1;
            p1im[K + k] = p1re[K + k - 1] * s1 + p1im[K + k - 1] * c1;
            p1re[K - k] = p1re[K + k];
            p1im[K - k] = -p1im[K + k];
        }
        double c2 = std::cos(x2), s2 = std::sin(x2);
        p2re[0] = 1.0;
        p2im[0] = 0.0;
        for (int k = 1; k <= K; ++k) {
            p2re[k] = p2re[k - 1] * c2 - p2im[k - 1] * s2;
            p2im[k] = p2re[k - 1] * s2 + p2im[k - 1] * c2;
        }
    }
};

thread_local PhaseTables g_phase;

template <int Order>
void eval_block_impl(const SpectrumBlock& b, double x1, double x2, PointEval& out) {
    int K = b.K;
    g_phase.fill(K, x1, x2);
    const double* p1re = g_phase.p1re.data();
    const double* p1im = g_phase.p1im.data();
    const double* p2re = g_phase.p2re.data();
    const double* p2im = g_phase.p2im.data();

    double u1 = 0, u2 = 0;
    double d1u1 = 0, d1u2 = 0, d2u1 = 0, d2u2 = 0;
    double h11u1 = 0, h11u2 = 0, h12u1 = 0, h12u2 = 0, h22u1 = 0, h22u2 = 0;

    for (int k1 = -K; k1 <= K; ++k1) {
        double rre = p1re[k1 + K], rim = p1im[k1 + K];
        const Complex* row1 = b.a1.data() + b.index(k1, 0);
        const Complex* row2 = b.a2.data() + b.index(k1, 0);
        int k2lo = (k1 >= 1) ? 0 : 1;
        // row partial sums: S = sum s, T = sum k2*s, U = sum k2^2*s
        double S1re = 0, S1im = 0, S2re = 0, S2im = 0;
        double T1re = 0, T1im = 0, T2re = 0, T2im = 0;
        double U1re = 0, U1im = 0, U2re = 0, U2im = 0;
        for (int k2 = k2lo; k2 <= K; ++k2) {
            double pre = rre * p2re[k2] - rim * p2im[k2];
            double pim = rre * p2im[k2] + rim * p2re[k2];
            double a1re = row1[k2].real(), a1im = row1[k2].imag();
            double a2re = row2[k2].real(), a2im = row2[k2].imag();
            double s1re = a1re * pre - a1im * pim;
            double s1im = a1re * pim + a1im * pre;
            double s2re = a2re * pre - a2im * pim;
            double s2im = a2re * pim + a2im * pre;
            S1re += s1re; S1im += s1im;
            S2re += s2re; S2im += s2im;
            if constexpr (Order >= 1) {
                double k2d = double(k2);
                T1re += k2d * s1re; T1im += k2d * s1im;
                T2re += k2d * s2re; T2im += k2d * s2im;
                if constexpr (Order >= 2) {
                    U1re += k2d * k2d * s1re; U1im += k2d * k2d * s1im;
                    U2re += k2d * k2d * s2re; U2im += k2d * k2d * s2im;
                }
            }
        }
        double k1d = double(k1);
        u1 += 2.0 * S1re;
        u2 += 2.0 * S2re;
        if constexpr (Order >= 1) {
            d1u1 += -2.0 * k1d * S1im;
            d1u2 += -2.0 * k1d * S2im;
            d2u1 += -2.0 * T1im;
            d2u2 += -2.0 * T2im;
            if constexpr (Order >= 2) {
                h11u1 += -2.0 * k1d * k1d * S1re;
                h11u2 += -2.0 * k1d * k1d * S2re;
                h12u1 += -2.0 * k1d * T1re;
                h12u2 += -2.0 * k1d * T2re;
                h22u1 += -2.0 * U1re;
                h22u2 += -2.0 * U2re;
            }
        }
    }

    out.u[0] = u1;
    out.u[1] = u2;
    if (Order >= 1) {
        out.du[0][0] = d1u1;
        out.du[0][1] = d2u1;
        out.du[1][0] = d1u2;
        out.du[1][1] = d2u2;
        if (Order >= 2) {
            out.d2u[0][0][0] = h11u1;
            out.d2u[0][0][1] = h12u1;
            out.d2u[0][1][0] = h12u1;
            out.d2u[0][1][1] = h22u1;
            out.d2u[1][0][0] = h11u2;
            out.d2u[1][0][1] = h12u2;
            out.d2u[1][1][0] = h12u2;
            out.d2u[1][1][1] = h22u2;
        }
    }
}

}  // namespace

void eval_block(const SpectrumBlock& b, double x1, double x2, int order,
                PointEval& out) {
    switch (order) {
        case 0: eval_block_impl<0>(b, x1, x2, out); break;
        case 1: eval_block_impl<1>(b, x1, x2, out); break;
        default: eval_block_impl<2>(b, x1, x2, out); break;
    }
}

void eval_field(const VelocityField& f, double x1, double x2, int order,
                PointEval& out) {
    thread_local SpectrumBlock tmp;
    field_to_block(f, tmp);
    eval_block(tmp, x1, x2, order, out);
}

VelocityField leray_project(const GridSpec& grid, const std::vector<Complex>& raw1,
                            const std::vector<Complex>& raw2, double tol) {
    grid.validate();
    if (raw1.size() != grid.spectral_size() || raw2.size() != grid.spectral_size())
        throw SizeMismatch("leray_project: raw arrays have the wrong size");

    // Hermitian check on the k2 = 0 line (the only stored redundancy).
    double scale = 0.0;
    for (const auto& c : raw1) scale = std::max(scale, std::abs(c));
    for (const auto& c : raw2) scale = std::max(scale, std::abs(c));
    double allowed = tol * std::max(1.0, scale);
    for (int k1 = 1; k1 <= grid.half() - 1; ++k1) {
        std::size_t ip = grid.index(k1, 0);
        std::size_t im = grid.index(-k1, 0);
        if (std::abs(raw1[im] - std::conj(raw1[ip])) > allowed ||
            std::abs(raw2[im] - std::conj(raw2[ip])) > allowed)
            throw SymmetryViolation("leray_project: input is not Hermitian-symmetric");
    }

    VelocityField out(grid);
    auto& u1 = out.comp(0);
    auto& u2 = out.comp(1);
    int K = grid.cutoff();
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t i = grid.index(k1, k2);
        Complex r1 = raw1[i], r2 = raw2[i];
        double kk = double(k1) * k1 + double(k2) * k2;
        Complex kdot = (double(k1) * r1 + double(k2) * r2) / kk;
        u1[i] = r1 - double(k1) * kdot;
        u2[i] = r2 - double(k2) * kdot;
        if (k2 == 0) {
            std::size_t j = grid.index(-k1, 0);
            u1[j] = std::conj(u1[i]);
            u2[j] = std::conj(u2[i]);
        }
    });
    return out;
}

namespace {

// Writes i*ka*src (spectral derivative along axis a) into dst.
void spectral_derivative(const GridSpec& g, const std::vector<Complex>& src,
                         int axis, Complex* dst) {
    int K = g.cutoff();
    std::fill(dst, dst + g.spectral_size(), Complex(0, 0));
    for (int k2 = 0; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) {
            std::size_t i = g.index(k1, k2);
            double ka = axis == 0 ? k1 : k2;
            dst[i] = Complex(0, ka) * src[i];
        }
}

void dealias(const GridSpec& g, Complex* a) {
    int K = g.cutoff();
    int H = g.half();
    for (int k2 = 0; k2 <= H; ++k2)
        for (int k1 = -H; k1 <= H - 1; ++k1) {
            if (std::abs(k1) <= K && k2 <= K) continue;
            a[g.index(k1, k2)] = Complex(0, 0);
        }
}

}  // namespace

VelocityField nonlinear_term(const VelocityField& u, FftWorkspace& ws) {
    const GridSpec& g = u.grid();
    if (ws.N() != g.N) throw GridMismatch("workspace and field disagree on N");
    std::size_t nr = ws.nreal();

    double* pu1 = ws.real_buf(0);
    double* pu2 = ws.real_buf(1);
    double* d1u1 = ws.real_buf(2);
    double* d1u2 = ws.real_buf(3);
    double* d2u1 = ws.real_buf(4);
    double* d2u2 = ws.real_buf(5);
    double* conv1 = ws.real_buf(6);
    double* conv2 = ws.real_buf(7);
    Complex* scratch = ws.cplx_buf(0);

    ws.c2r(u.comp(0).data(), pu1);
    ws.c2r(u.comp(1).data(), pu2);
    spectral_derivative(g, u.comp(0), 0, scratch);
    ws.c2r(scratch, d1u1);
    spectral_derivative(g, u.comp(1), 0, scratch);
    ws.c2r(scratch, d1u2);
    spectral_derivative(g, u.comp(0), 1, scratch);
    ws.c2r(scratch, d2u1);
    spectral_derivative(g, u.comp(1), 1, scratch);
    ws.c2r(scratch, d2u2);

    for (std::size_t i = 0; i < nr; ++i) {
        conv1[i] = pu1[i] * d1u1[i] + pu2[i] * d2u1[i];
        conv2[i] = pu1[i] * d1u2[i] + pu2[i] * d2u2[i];
    }

    Complex* c1 = ws.cplx_buf(1);
    Complex* c2 = ws.cplx_buf(2);
    ws.r2c(conv1, c1);
    ws.r2c(conv2, c2);
    dealias(g, c1);
    dealias(g, c2);
    return leray_project(g, std::vector<Complex>(c1, c1 + ws.ncplx()),
                         std::vector<Complex>(c2, c2 + ws.ncplx()), 1e-8);
}

VelocityField linearized_term(const VelocityField& u, const VelocityField& v,
                              FftWorkspace& ws) {
    u.require_same_grid(v);
    const GridSpec& g = u.grid();
    if (ws.N() != g.N) throw GridMismatch("workspace and field disagree on N");
    std::size_t nr = ws.nreal();

    double* pu1 = ws.real_buf(0);
    double* pu2 = ws.real_buf(1);
    double* pv1 = ws.real_buf(2);
    double* pv2 = ws.real_buf(3);
    double* da = ws.real_buf(4);
    double* db = ws.real_buf(5);
    double* conv1 = ws.real_buf(6);
    double* conv2 = ws.real_buf(7);
    Complex* scratch = ws.cplx_buf(0);

    ws.c2r(u.comp(0).data(), pu1);
    ws.c2r(u.comp(1).data(), pu2);
    ws.c2r(v.comp(0).data(), pv1);
    ws.c2r(v.comp(1).data(), pv2);

    for (int c = 0; c < 2; ++c) {
        double* conv = c == 0 ? conv1 : conv2;
        // <u,grad> v_c
        spectral_derivative(g, v.comp(c), 0, scratch);
        ws.c2r(scratch, da);
        spectral_derivative(g, v.comp(c), 1, scratch);
        ws.c2r(scratch, db);
        for (std::size_t i = 0; i < nr; ++i)
            conv[i] = pu1[i] * da[i] + pu2[i] * db[i];
        // + <v,grad> u_c
        spectral_derivative(g, u.comp(c), 0, scratch);
        ws.c2r(scratch, da);
        spectral_derivative(g, u.comp(c), 1, scratch);
        ws.c2r(scratch, db);
        for (std::size_t i = 0; i < nr; ++i)
            conv[i] += pv1[i] * da[i] + pv2[i] * db[i];
    }

    Complex* c1 = ws.cplx_buf(1);
    Complex* c2 = ws.cplx_buf(2);
    ws.r2c(conv1, c1);
    ws.r2c(conv2, c2);
    dealias(g, c1);
    dealias(g, c2);
    return leray_project(g, std::vector<Complex>(c1, c1 + ws.ncplx()),
                         std::vector<Complex>(c2, c2 + ws.ncplx()), 1e-8);
}

double l2_inner(const VelocityField& a, const VelocityField& b) {
    a.require_same_grid(b);
    const GridSpec& g = a.grid();
    double sum = 0.0;
    for_each_canonical(g.cutoff(), [&](int k1, int k2) {
        std::size_t i = g.index(k1, k2);
        sum += 2.0 * (a.comp(0)[i] * std::conj(b.comp(0)[i]) +
                      a.comp(1)[i] * std::conj(b.comp(1)[i]))
                         .real();
    });
    double two_pi = 2.0 * std::numbers::pi;
    return two_pi * two_pi * sum;
}

void field_to_vorticity(const VelocityField& f, std::vector<Complex>& w_hat) {
    const GridSpec& g = f.grid();
    w_hat.assign(g.spectral_size(), Complex(0, 0));
    int K = g.cutoff();
    for (int k2 = 0; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            std::size_t i = g.index(k1, k2);
            w_hat[i] = Complex(0, 1) *
                       (double(k1) * f.comp(1)[i] - double(k2) * f.comp(0)[i]);
        }
}

VelocityField vorticity_to_field(const GridSpec& grid,
                                 const std::vector<Complex>& w_hat) {
    VelocityField f(grid);
    auto& u1 = f.comp(0);
    auto& u2 = f.comp(1);
    int K = grid.cutoff();
    for (int k2 = 0; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            std::size_t i = grid.index(k1, k2);
            double kk = double(k1) * k1 + double(k2) * k2;
            Complex w = w_hat[i];
            u1[i] = Complex(0, 1) * (double(k2) / kk) * w;
            u2[i] = Complex(0, -1) * (double(k1) / kk) * w;
        }
    return f;
}

}  // namespace lcl
