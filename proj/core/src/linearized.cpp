#include "lcl/linearized.hpp"

#include <cmath>
#include <numbers>

namespace lcl {

TripleTrajectory TripleTrajectory::make(const TripleState& z0,
                                        const NoiseRealization& eta, double dt) {
    TripleTrajectory t;
    t.grid = z0.u.grid();
    t.eta = eta;
    t.y0 = z0.y;
    t.A0 = z0.A;
    t.dt = dt;
    evolve_unit(z0.u, eta, dt, &t.path);
    return t;
}

LinearizedSolver::LinearizedSolver(const TripleTrajectory& traj)
    : traj_(traj), ws_(traj.grid.N), n_steps_(traj.path.steps()) {
    std::size_t n = traj_.grid.spectral_size();
    wv_.assign(n, Complex(0, 0));
    wvstar_.assign(n, Complex(0, 0));
    nl0_.assign(n, Complex(0, 0));
    nl1_.assign(n, Complex(0, 0));
    lam_.assign(n, 0.0);
    int H = traj_.grid.half();
    for (int k2 = 0; k2 <= H; ++k2)
        for (int k1 = -H; k1 <= H - 1; ++k1)
            lam_[traj_.grid.index(k1, k2)] =
                traj_.grid.nu * (double(k1) * k1 + double(k2) * k2);
    precompute();
}

LinearizedSolver::~LinearizedSolver() = default;

namespace {

// vorticity (full r2c array) from a compact velocity snapshot
void block_to_vorticity(const GridSpec& g, const SpectrumBlock& b,
                        std::vector<Complex>& w) {
    w.assign(g.spectral_size(), Complex(0, 0));
    int K = std::min(g.cutoff(), b.K);
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t s = b.index(k1, k2);
        Complex wv = Complex(0, 1) * (double(k1) * b.a2[s] - double(k2) * b.a1[s]);
        w[g.index(k1, k2)] = wv;
        if (k2 == 0) w[g.index(-k1, 0)] = std::conj(wv);
    });
}

// velocity block from a vorticity array
void vorticity_to_block(const GridSpec& g, const std::vector<Complex>& w,
                        SpectrumBlock& out) {
    int K = g.cutoff();
    if (out.K != K) out.resize(K);
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t i = g.index(k1, k2);
        double kk = double(k1) * k1 + double(k2) * k2;
        std::size_t d = out.index(k1, k2);
        out.a1[d] = Complex(0, 1) * (double(k2) / kk) * w[i];
        out.a2[d] = Complex(0, -1) * (double(k1) / kk) * w[i];
    });
}

void forcing_duhamel_into(const GridSpec& grid, const NoiseRealization& zeta,
                          double a, double b, std::vector<Complex>& target) {
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        const ForcedMode& m = ForcingBasis::mode(j);
        double lam = grid.nu * m.j_sq;
        double d = zeta.duhamel_coeff(j, lam, a, b);
        if (d == 0.0) continue;
        Complex amp = (d / m.norm_v5) * m.wamp;
        target[grid.index(m.c1, m.c2)] += amp;
        if (m.c2 == 0) target[grid.index(-m.c1, 0)] += std::conj(amp);
    }
}

}  // namespace

void LinearizedSolver::precompute() {
    const GridSpec& g = traj_.grid;
    int K = g.cutoff();
    double h = traj_.dt;
    std::size_t nr = ws_.nreal();
    phys_.assign(std::size_t(n_steps_) * 8, std::vector<double>(nr));

    std::vector<Complex> w(g.spectral_size()), wstar(g.spectral_size());
    std::vector<Complex> nl(g.spectral_size());
    Complex* cu1 = ws_.cplx_buf(0);
    Complex* cu2 = ws_.cplx_buf(1);
    Complex* cdx = ws_.cplx_buf(2);
    Complex* cdy = ws_.cplx_buf(3);

    auto fill_phys = [&](const std::vector<Complex>& ww, std::size_t slot) {
        std::fill(cu1, cu1 + ws_.ncplx(), Complex(0, 0));
        std::fill(cu2, cu2 + ws_.ncplx(), Complex(0, 0));
        std::fill(cdx, cdx + ws_.ncplx(), Complex(0, 0));
        std::fill(cdy, cdy + ws_.ncplx(), Complex(0, 0));
        for (int k2 = 0; k2 <= K; ++k2)
            for (int k1 = -K; k1 <= K; ++k1) {
                if (k1 == 0 && k2 == 0) continue;
                std::size_t i = g.index(k1, k2);
                Complex wv = ww[i];
                double kk = double(k1) * k1 + double(k2) * k2;
                cu1[i] = Complex(0, 1) * (double(k2) / kk) * wv;
                cu2[i] = Complex(0, -1) * (double(k1) / kk) * wv;
                cdx[i] = Complex(0, double(k1)) * wv;
                cdy[i] = Complex(0, double(k2)) * wv;
            }
        ws_.c2r(cu1, phys_[slot + 0].data());
        ws_.c2r(cu2, phys_[slot + 1].data());
        ws_.c2r(cdx, phys_[slot + 2].data());
        ws_.c2r(cdy, phys_[slot + 3].data());
    };

    for (int n = 0; n < n_steps_; ++n) {
        block_to_vorticity(g, traj_.path.snapshot(n), w);
        std::size_t slot = std::size_t(n) * 8;
        fill_phys(w, slot);

        // rebuild the predictor stage exactly as the nonlinear stepper did
        {
            const double* u1 = phys_[slot + 0].data();
            const double* u2 = phys_[slot + 1].data();
            const double* dx = phys_[slot + 2].data();
            const double* dy = phys_[slot + 3].data();
            double* prod = ws_.real_buf(0);
            for (std::size_t i = 0; i < nr; ++i)
                prod[i] = u1[i] * dx[i] + u2[i] * dy[i];
            Complex* conv = ws_.cplx_buf(0);
            ws_.r2c(prod, conv);
            std::fill(nl.begin(), nl.end(), Complex(0, 0));
            for (int k2 = 0; k2 <= K; ++k2)
                for (int k1 = -K; k1 <= K; ++k1) {
                    if (k1 == 0 && k2 == 0) continue;
                    std::size_t i = g.index(k1, k2);
                    nl[i] = -conv[i];
                }
        }
        double t = n * h;
        for (std::size_t i = 0; i < w.size(); ++i) {
            double ef = std::exp(-lam_[i] * 0.5 * h);
            wstar[i] = ef * (w[i] + 0.5 * h * nl[i]);
        }
        forcing_duhamel_into(g, traj_.eta, t, t + 0.5 * h, wstar);
        fill_phys(wstar, slot + 4);
    }
}

// out = -(u . grad dw + du . grad w) for the tangent vorticity wv, with the
// base-flow factors supplied as physical-space arrays.
void LinearizedSolver::linearized_rhs(const double* u1, const double* u2,
                                      const double* dwx, const double* dwy,
                                      const std::vector<Complex>& wv,
                                      std::vector<Complex>& out) {
    const GridSpec& g = traj_.grid;
    int K = g.cutoff();
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
            std::size_t i = g.index(k1, k2);
            Complex w = wv[i];
            double kk = double(k1) * k1 + double(k2) * k2;
            cu1[i] = Complex(0, 1) * (double(k2) / kk) * w;
            cu2[i] = Complex(0, -1) * (double(k1) / kk) * w;
            cdx[i] = Complex(0, double(k1)) * w;
            cdy[i] = Complex(0, double(k2)) * w;
        }
    double* du1 = ws_.real_buf(0);
    double* du2 = ws_.real_buf(1);
    double* ddx = ws_.real_buf(2);
    double* ddy = ws_.real_buf(3);
    double* prod = ws_.real_buf(4);
    ws_.c2r(cu1, du1);
    ws_.c2r(cu2, du2);
    ws_.c2r(cdx, ddx);
    ws_.c2r(cdy, ddy);
    for (std::size_t i = 0; i < nr; ++i)
        prod[i] = u1[i] * ddx[i] + u2[i] * ddy[i] + du1[i] * dwx[i] +
                  du2[i] * dwy[i];
    Complex* conv = ws_.cplx_buf(0);
    ws_.r2c(prod, conv);
    std::fill(out.begin(), out.end(), Complex(0, 0));
    for (int k2 = 0; k2 <= K; ++k2)
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            std::size_t i = g.index(k1, k2);
            out[i] = -conv[i];
        }
}

TangentTriple LinearizedSolver::solve(const NoiseRealization& zeta,
                                      DensePath* vpath_out) {
    const GridSpec& g = traj_.grid;
    double h = traj_.dt;
    std::size_t n = g.spectral_size();

    if (vpath_.steps() != n_steps_ || vpath_.grid() != g)
        vpath_ = DensePath(g, 0.0, h, n_steps_);
    {
        std::vector<double> kinks = traj_.eta.breakpoints();
        std::vector<double> zk = zeta.breakpoints();
        kinks.insert(kinks.end(), zk.begin(), zk.end());
        vpath_.set_kinks(std::move(kinks));
    }
    std::fill(wv_.begin(), wv_.end(), Complex(0, 0));
    vorticity_to_block(g, wv_, vpath_.snapshot(0));

    for (int step = 0; step < n_steps_; ++step) {
        std::size_t slot = std::size_t(step) * 8;
        double t = step * h;
        linearized_rhs(phys_[slot + 0].data(), phys_[slot + 1].data(),
                       phys_[slot + 2].data(), phys_[slot + 3].data(), wv_, nl0_);
        for (std::size_t i = 0; i < n; ++i) {
            double ef = std::exp(-lam_[i] * 0.5 * h);
            wvstar_[i] = ef * (wv_[i] + 0.5 * h * nl0_[i]);
        }
        forcing_duhamel_into(g, zeta, t, t + 0.5 * h, wvstar_);
        linearized_rhs(phys_[slot + 4].data(), phys_[slot + 5].data(),
                       phys_[slot + 6].data(), phys_[slot + 7].data(), wvstar_,
                       nl1_);
        for (std::size_t i = 0; i < n; ++i) {
            double ef = std::exp(-lam_[i] * h);
            double efh = std::exp(-lam_[i] * 0.5 * h);
            wv_[i] = ef * wv_[i] + h * efh * nl1_[i];
        }
        forcing_duhamel_into(g, zeta, t, t + h, wv_);
        vorticity_to_block(g, wv_, vpath_.snapshot(step + 1));
    }

    // Second pass: tangent (z, B) along the nonlinear (y, A) RK4 stages.
    Vec2 y = traj_.y0;
    Mat2 A = traj_.A0;
    Vec2 z{0.0, 0.0};
    Mat2 B{0.0, 0.0, 0.0, 0.0};

    PointEval ue, ve;
    thread_local SpectrumBlock umid, vmid;

    struct Stage {
        Vec2 ky, kz;
        Mat2 kA, kB;
    };
    auto rhs = [&](double t, double rel, int node, const Vec2& ys, const Mat2& As,
                   const Vec2& zs, const Mat2& Bs, Stage& st) {
        if (rel == 0.0) {
            eval_block(traj_.path.snapshot(node), ys[0], ys[1], 2, ue);
            eval_block(vpath_.snapshot(node), ys[0], ys[1], 1, ve);
        } else if (rel == 1.0) {
            eval_block(traj_.path.snapshot(node + 1), ys[0], ys[1], 2, ue);
            eval_block(vpath_.snapshot(node + 1), ys[0], ys[1], 1, ve);
        } else {
            eval_block(umid, ys[0], ys[1], 2, ue);
            eval_block(vmid, ys[0], ys[1], 1, ve);
        }
        st.ky = {ue.u[0], ue.u[1]};
        st.kA = {ue.du[0][0] * As[0] + ue.du[0][1] * As[2],
                 ue.du[0][0] * As[1] + ue.du[0][1] * As[3],
                 ue.du[1][0] * As[0] + ue.du[1][1] * As[2],
                 ue.du[1][0] * As[1] + ue.du[1][1] * As[3]};
        st.kz = {ue.du[0][0] * zs[0] + ue.du[0][1] * zs[1] + ve.u[0],
                 ue.du[1][0] * zs[0] + ue.du[1][1] * zs[1] + ve.u[1]};
        // (D^2_xx u) A z with (d_i Du)_{cj} = d2u[c][i][j]
        double m00 = zs[0] * ue.d2u[0][0][0] + zs[1] * ue.d2u[0][1][0];
        double m01 = zs[0] * ue.d2u[0][0][1] + zs[1] * ue.d2u[0][1][1];
        double m10 = zs[0] * ue.d2u[1][0][0] + zs[1] * ue.d2u[1][1][0];
        double m11 = zs[0] * ue.d2u[1][0][1] + zs[1] * ue.d2u[1][1][1];
        st.kB = {m00 * As[0] + m01 * As[2] + ue.du[0][0] * Bs[0] +
                     ue.du[0][1] * Bs[2] + ve.du[0][0] * As[0] +
                     ve.du[0][1] * As[2],
                 m00 * As[1] + m01 * As[3] + ue.du[0][0] * Bs[1] +
                     ue.du[0][1] * Bs[3] + ve.du[0][0] * As[1] +
                     ve.du[0][1] * As[3],
                 m10 * As[0] + m11 * As[2] + ue.du[1][0] * Bs[0] +
                     ue.du[1][1] * Bs[2] + ve.du[1][0] * As[0] +
                     ve.du[1][1] * As[2],
                 m10 * As[1] + m11 * As[3] + ue.du[1][0] * Bs[1] +
                     ue.du[1][1] * Bs[3] + ve.du[1][0] * As[1] +
                     ve.du[1][1] * As[3]};
    };

    Stage k1, k2, k3, k4;
    for (int step = 0; step < n_steps_; ++step) {
        double t = step * h;
        traj_.path.spectrum_at(t + 0.5 * h, umid);
        vpath_.spectrum_at(t + 0.5 * h, vmid);

        rhs(t, 0.0, step, y, A, z, B, k1);
        Vec2 ys{y[0] + 0.5 * h * k1.ky[0], y[1] + 0.5 * h * k1.ky[1]};
        Mat2 As, Bs;
        Vec2 zs;
        for (int m = 0; m < 4; ++m) As[m] = A[m] + 0.5 * h * k1.kA[m];
        zs = {z[0] + 0.5 * h * k1.kz[0], z[1] + 0.5 * h * k1.kz[1]};
        for (int m = 0; m < 4; ++m) Bs[m] = B[m] + 0.5 * h * k1.kB[m];
        rhs(t + 0.5 * h, 0.5, step, ys, As, zs, Bs, k2);

        ys = {y[0] + 0.5 * h * k2.ky[0], y[1] + 0.5 * h * k2.ky[1]};
        for (int m = 0; m < 4; ++m) As[m] = A[m] + 0.5 * h * k2.kA[m];
        zs = {z[0] + 0.5 * h * k2.kz[0], z[1] + 0.5 * h * k2.kz[1]};
        for (int m = 0; m < 4; ++m) Bs[m] = B[m] + 0.5 * h * k2.kB[m];
        rhs(t + 0.5 * h, 0.5, step, ys, As, zs, Bs, k3);

        ys = {y[0] + h * k3.ky[0], y[1] + h * k3.ky[1]};
        for (int m = 0; m < 4; ++m) As[m] = A[m] + h * k3.kA[m];
        zs = {z[0] + h * k3.kz[0], z[1] + h * k3.kz[1]};
        for (int m = 0; m < 4; ++m) Bs[m] = B[m] + h * k3.kB[m];
        rhs(t + h, 1.0, step, ys, As, zs, Bs, k4);

        y[0] += h / 6.0 * (k1.ky[0] + 2 * k2.ky[0] + 2 * k3.ky[0] + k4.ky[0]);
        y[1] += h / 6.0 * (k1.ky[1] + 2 * k2.ky[1] + 2 * k3.ky[1] + k4.ky[1]);
        for (int m = 0; m < 4; ++m) {
            A[m] += h / 6.0 * (k1.kA[m] + 2 * k2.kA[m] + 2 * k3.kA[m] + k4.kA[m]);
            B[m] += h / 6.0 * (k1.kB[m] + 2 * k2.kB[m] + 2 * k3.kB[m] + k4.kB[m]);
        }
        z[0] += h / 6.0 * (k1.kz[0] + 2 * k2.kz[0] + 2 * k3.kz[0] + k4.kz[0]);
        z[1] += h / 6.0 * (k1.kz[1] + 2 * k2.kz[1] + 2 * k3.kz[1] + k4.kz[1]);
    }

    TangentTriple out;
    out.v = vorticity_to_field(g, wv_);
    out.z = z;
    out.B = B;
    Mat2 Ainv = mat2_inverse(A);
    out.sl2_tangency = Ainv[0] * B[0] + Ainv[1] * B[2] + Ainv[2] * B[1] +
                       Ainv[3] * B[3];
    if (vpath_out) *vpath_out = vpath_;
    return out;
}

Eigen::VectorXd velocity_coords(const VelocityField& v, int K_v) {
    const GridSpec& g = v.grid();
    int P = ((2 * K_v + 1) * (2 * K_v + 1) - 1) / 2;
    Eigen::VectorXd out(2 * P);
    int idx = 0;
    double scale = 2.0 * std::numbers::pi * std::sqrt(2.0);
    for_each_canonical(K_v, [&](int k1, int k2) {
        auto c = v.coeff(k1, k2);
        double kn = std::sqrt(double(k1) * k1 + double(k2) * k2);
        // alpha with v_k = alpha * kperp/|k|
        Complex alpha = (c[0] * (-double(k2)) + c[1] * double(k1)) / kn;
        out[idx++] = scale * alpha.real();
        out[idx++] = scale * alpha.imag();
    });
    return out;
}

GramianReport gramian(const TripleTrajectory& traj, int K_v, int L_c,
                      double threshold) {
    if (K_v < 1) throw ConfigError("gramian.K_v must be >= 1");
    int P = ((2 * K_v + 1) * (2 * K_v + 1) - 1) / 2;
    GramianReport rep;
    rep.K_v = K_v;
    rep.L_c = L_c;
    rep.threshold = threshold;
    rep.dim_velocity = 2 * P;
    rep.dim_total = 2 * P + 2 + 3;

    // terminal A of the trajectory fixes the SL2 tangent coordinates
    Mat2 A1 = advance_triple_unit(traj.path, traj.y0, traj.A0, Vec2{1.0, 0.0},
                                  traj.dt)
                  .A;
    Mat2 G = mat2_inverse(A1);
    // Frobenius-orthonormal basis of {B : tr(G B) = 0}; the normal direction
    // is vec(G^T).
    double gn = mat2_norm(G);
    double nrm[4] = {G[0] / gn, G[2] / gn, G[1] / gn, G[3] / gn};
    double W[3][4];
    {
        int got = 0;
        for (int e = 0; e < 4 && got < 3; ++e) {
            double w[4] = {0, 0, 0, 0};
            w[e] = 1.0;
            double dn = w[0] * nrm[0] + w[1] * nrm[1] + w[2] * nrm[2] + w[3] * nrm[3];
            for (int i = 0; i < 4; ++i) w[i] -= dn * nrm[i];
            for (int p = 0; p < got; ++p) {
                double d = w[0] * W[p][0] + w[1] * W[p][1] + w[2] * W[p][2] +
                           w[3] * W[p][3];
                for (int i = 0; i < 4; ++i) w[i] -= d * W[p][i];
            }
            double n2 = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] +
                                  w[3] * w[3]);
            if (n2 > 1e-8) {
                for (int i = 0; i < 4; ++i) W[got][i] = w[i] / n2;
                ++got;
            }
        }
        if (got < 3) throw Error("could not build the SL2 tangent basis");
    }

    NoiseParams cp = traj.eta.params();
    cp.basis.kind = TimeBasisKind::FourierCosine;
    cp.L = std::max(cp.L, L_c);
    cp.preset = "control-basis";

    LinearizedSolver solver(traj);
    int cols = ForcingBasis::size() * L_c;
    Eigen::MatrixXd M(rep.dim_total, cols);
    int col = 0;
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        for (int l = 1; l <= L_c; ++l, ++col) {
            NoiseRealization dir(cp);
            dir.set_xi(j, l, 1.0 / cp.b(l));
            TangentTriple tt = solver.solve(dir);
            Eigen::VectorXd vc = velocity_coords(tt.v, K_v);
            for (int r = 0; r < 2 * P; ++r) M(r, col) = vc[r];
            M(2 * P + 0, col) = tt.z[0];
            M(2 * P + 1, col) = tt.z[1];
            for (int p = 0; p < 3; ++p)
                M(2 * P + 2 + p, col) = tt.B[0] * W[p][0] + tt.B[1] * W[p][1] +
                                        tt.B[2] * W[p][2] + tt.B[3] * W[p][3];
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    Eigen::VectorXd sv = svd.singularValues();
    rep.singular_values.assign(sv.data(), sv.data() + sv.size());
    double smax = sv.size() ? sv[0] : 0.0;
    rep.rank = 0;
    for (double s : rep.singular_values)
        if (s > threshold * smax) ++rep.rank;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd_v(M.topRows(2 * P));
    Eigen::VectorXd svv = svd_v.singularValues();
    double svmax = svv.size() ? svv[0] : 0.0;
    rep.velocity_block_rank = 0;
    for (int i = 0; i < svv.size(); ++i)
        if (svv[i] > threshold * svmax) ++rep.velocity_block_rank;
    return rep;
}

}  // namespace lcl
