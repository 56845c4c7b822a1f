#include "lcl/lagrangian.hpp"

#include <cmath>

namespace lcl {

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

double mat2_det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }

double mat2_norm(const Mat2& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
}

Mat2 mat2_inverse(const Mat2& a) {
    double d = mat2_det(a);
    if (d == 0.0) throw NotSL2("matrix is singular");
    return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
}

void ProjectiveState::canonicalize() {
    double n = std::hypot(v[0], v[1]);
    if (n == 0.0) throw OutOfDomain("projective representative must be nonzero");
    v[0] /= n;
    v[1] /= n;
    bool flip = (v[0] < 0.0) || (v[0] == 0.0 && v[1] < 0.0);
    if (flip) {
        v[0] = -v[0];
        v[1] = -v[1];
    }
}

Vec2 ParticlePath::interp(double t) const {
    int n = int(y.size()) - 1;
    double s = (t - t0) / h;
    double r = std::round(s);
    if (std::abs(s - r) < 1e-12 && r >= 0 && r <= n) return y[int(r)];
    int i = int(std::floor(s));
    if (i < 0 || i > n - 1) throw OutOfDomain("time outside the particle path");
    if (n < 3) {  // linear fallback for very short records
        double f = s - i;
        return {y[i][0] * (1 - f) + y[i + 1][0] * f,
                y[i][1] * (1 - f) + y[i + 1][1] * f};
    }
    int base = i - 1;
    if (base < 0) base = 0;
    if (base > n - 3) base = n - 3;
    double w[4];
    lagrange4_weights(s - base, w);
    Vec2 out{0.0, 0.0};
    for (int m = 0; m < 4; ++m) {
        out[0] += w[m] * y[base + m][0];
        out[1] += w[m] * y[base + m][1];
    }
    return out;
}

namespace {

int span_steps(double t0, double t1, double dt) {
    if (!(dt > 0)) throw ConfigError("integrator step must be positive");
    double m = (t1 - t0) / dt;
    int n = int(std::lround(m));
    if (n < 1 || std::abs(n * dt - (t1 - t0)) > 1e-9)
        throw ConfigError("integrator step must tile the time span");
    return n;
}

struct StageEval {
    const DensePath* path;
    // caches for the aligned fast path
    bool aligned = false;
    int node = 0;              // substep index when aligned
    SpectrumBlock mid;         // blended block at the substep midpoint
    bool mid_ready = false;

    void begin_substep(double t, double dt) {
        double s = (t - path->t0()) / path->h();
        double r = std::round(s);
        aligned = std::abs(path->h() - dt) < 1e-15 && std::abs(s - r) < 1e-12;
        if (aligned) node = int(r);
        mid_ready = false;
    }

    void eval(double t, double rel, const Vec2& x, int order, PointEval& out) {
        if (!aligned) {
            path->eval(t, x[0], x[1], order, out);
            return;
        }
        if (rel == 0.0) {
            eval_block(path->snapshot(node), x[0], x[1], order, out);
        } else if (rel == 1.0) {
            eval_block(path->snapshot(node + 1), x[0], x[1], order, out);
        } else {
            if (!mid_ready) {
                path->spectrum_at(t, mid);
                mid_ready = true;
            }
            eval_block(mid, x[0], x[1], order, out);
        }
    }
};

inline void proj_rhs(const double du[2][2], const Vec2& v, Vec2& k) {
    double m1 = du[0][0] * v[0] + du[0][1] * v[1];
    double m2 = du[1][0] * v[0] + du[1][1] * v[1];
    double vv = v[0] * v[0] + v[1] * v[1];
    double vm = (v[0] * m1 + v[1] * m2) / vv;
    k[0] = m1 - vm * v[0];
    k[1] = m2 - vm * v[1];
}

}  // namespace

Vec2 advance_particle(const DensePath& path, const Vec2& y0, double t0, double t1,
                      double dt, ParticlePath* record) {
    int n = span_steps(t0, t1, dt);
    Vec2 y = y0;
    if (record) {
        record->t0 = t0;
        record->h = dt;
        record->y.assign(1, y);
        record->y.reserve(n + 1);
    }
    StageEval se{&path};
    PointEval pe;
    for (int i = 0; i < n; ++i) {
        double t = t0 + i * dt;
        se.begin_substep(t, dt);
        Vec2 k1, k2, k3, k4, xs;

        se.eval(t, 0.0, y, 0, pe);
        k1 = {pe.u[0], pe.u[1]};
        xs = {y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]};
        se.eval(t + 0.5 * dt, 0.5, xs, 0, pe);
        k2 = {pe.u[0], pe.u[1]};
        xs = {y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]};
        se.eval(t + 0.5 * dt, 0.5, xs, 0, pe);
        k3 = {pe.u[0], pe.u[1]};
        xs = {y[0] + dt * k3[0], y[1] + dt * k3[1]};
        se.eval(t + dt, 1.0, xs, 0, pe);
        k4 = {pe.u[0], pe.u[1]};

        y[0] += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        y[1] += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        if (record) record->y.push_back(y);
    }
    return {wrap_angle(y[0]), wrap_angle(y[1])};
}

Mat2 advance_cocycle(const DensePath& path, const ParticlePath& ypath,
                     const Mat2& A0, double t0, double t1, double dt,
                     bool renorm_det) {
    int n = span_steps(t0, t1, dt);
    Mat2 A = A0;
    StageEval se{&path};
    PointEval pe;
    auto rhs = [&](double t, double rel, Mat2& k, const Mat2& As) {
        Vec2 x = ypath.interp(t);
        se.eval(t, rel, x, 1, pe);
        k = {pe.du[0][0] * As[0] + pe.du[0][1] * As[2],
             pe.du[0][0] * As[1] + pe.du[0][1] * As[3],
             pe.du[1][0] * As[0] + pe.du[1][1] * As[2],
             pe.du[1][0] * As[1] + pe.du[1][1] * As[3]};
    };
    for (int i = 0; i < n; ++i) {
        double t = t0 + i * dt;
        se.begin_substep(t, dt);
        Mat2 k1, k2, k3, k4, As;
        rhs(t, 0.0, k1, A);
        for (int m = 0; m < 4; ++m) As[m] = A[m] + 0.5 * dt * k1[m];
        rhs(t + 0.5 * dt, 0.5, k2, As);
        for (int m = 0; m < 4; ++m) As[m] = A[m] + 0.5 * dt * k2[m];
        rhs(t + 0.5 * dt, 0.5, k3, As);
        for (int m = 0; m < 4; ++m) As[m] = A[m] + dt * k3[m];
        rhs(t + dt, 1.0, k4, As);
        for (int m = 0; m < 4; ++m)
            A[m] += dt / 6.0 * (k1[m] + 2 * k2[m] + 2 * k3[m] + k4[m]);
    }
    if (renorm_det) {
        double d = mat2_det(A);
        if (d <= 0.0) throw NotSL2("cocycle matrix lost positive determinant");
        double s = 1.0 / std::sqrt(d);
        for (auto& a : A) a *= s;
    }
    return A;
}

Vec2 advance_projective(const DensePath& path, const ParticlePath& ypath,
                        const Vec2& v0, double t0, double t1, double dt) {
    double n0 = std::hypot(v0[0], v0[1]);
    if (n0 == 0.0) throw OutOfDomain("projective state must be nonzero");
    Vec2 v{v0[0] / n0, v0[1] / n0};
    int n = span_steps(t0, t1, dt);
    StageEval se{&path};
    PointEval pe;
    auto rhs = [&](double t, double rel, Vec2& k, const Vec2& vs) {
        Vec2 x = ypath.interp(t);
        se.eval(t, rel, x, 1, pe);
        proj_rhs(pe.du, vs, k);
    };
    for (int i = 0; i < n; ++i) {
        double t = t0 + i * dt;
        se.begin_substep(t, dt);
        Vec2 k1, k2, k3, k4, vs;
        rhs(t, 0.0, k1, v);
        vs = {v[0] + 0.5 * dt * k1[0], v[1] + 0.5 * dt * k1[1]};
        rhs(t + 0.5 * dt, 0.5, k2, vs);
        vs = {v[0] + 0.5 * dt * k2[0], v[1] + 0.5 * dt * k2[1]};
        rhs(t + 0.5 * dt, 0.5, k3, vs);
        vs = {v[0] + dt * k3[0], v[1] + dt * k3[1]};
        rhs(t + dt, 1.0, k4, vs);
        v[0] += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        v[1] += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        double nm = std::hypot(v[0], v[1]);
        v[0] /= nm;
        v[1] /= nm;
    }
    return v;
}

UnitAdvanceResult advance_triple_unit(const DensePath& path, const Vec2& y0,
                                      const Mat2& A0, const Vec2& v0,
                                      double dt_ode) {
    double t0 = path.t0(), t1 = path.t1();
    int n = span_steps(t0, t1, dt_ode);
    Vec2 y = y0;
    Mat2 A = A0;
    double vn = std::hypot(v0[0], v0[1]);
    Vec2 v{v0[0] / vn, v0[1] / vn};
    Vec2 v_init = v;

    StageEval se{&path};
    PointEval pe;

    struct Deriv {
        Vec2 ky;
        Mat2 kA;
        Vec2 kv;
    };
    auto rhs = [&](double t, double rel, const Vec2& ys, const Mat2& As,
                   const Vec2& vs, Deriv& d) {
        se.eval(t, rel, ys, 1, pe);
        d.ky = {pe.u[0], pe.u[1]};
        d.kA = {pe.du[0][0] * As[0] + pe.du[0][1] * As[2],
                pe.du[0][0] * As[1] + pe.du[0][1] * As[3],
                pe.du[1][0] * As[0] + pe.du[1][1] * As[2],
                pe.du[1][0] * As[1] + pe.du[1][1] * As[3]};
        proj_rhs(pe.du, vs, d.kv);
    };

    Deriv k1, k2, k3, k4;
    for (int i = 0; i < n; ++i) {
        double t = t0 + i * dt_ode;
        se.begin_substep(t, dt_ode);
        Vec2 ys;
        Mat2 As;
        Vec2 vs;

        rhs(t, 0.0, y, A, v, k1);
        ys = {y[0] + 0.5 * dt_ode * k1.ky[0], y[1] + 0.5 * dt_ode * k1.ky[1]};
        for (int m = 0; m < 4; ++m) As[m] = A[m] + 0.5 * dt_ode * k1.kA[m];
        vs = {v[0] + 0.5 * dt_ode * k1.kv[0], v[1] + 0.5 * dt_ode * k1.kv[1]};
        rhs(t + 0.5 * dt_ode, 0.5, ys, As, vs, k2);

        ys = {y[0] + 0.5 * dt_ode * k2.ky[0], y[1] + 0.5 * dt_ode * k2.ky[1]};
        for (int m = 0; m < 4; ++m) As[m] = A[m] + 0.5 * dt_ode * k2.kA[m];
        vs = {v[0] + 0.5 * dt_ode * k2.kv[0], v[1] + 0.5 * dt_ode * k2.kv[1]};
        rhs(t + 0.5 * dt_ode, 0.5, ys, As, vs, k3);

        ys = {y[0] + dt_ode * k3.ky[0], y[1] + dt_ode * k3.ky[1]};
        for (int m = 0; m < 4; ++m) As[m] = A[m] + dt_ode * k3.kA[m];
        vs = {v[0] + dt_ode * k3.kv[0], v[1] + dt_ode * k3.kv[1]};
        rhs(t + dt_ode, 1.0, ys, As, vs, k4);

        y[0] += dt_ode / 6.0 * (k1.ky[0] + 2 * k2.ky[0] + 2 * k3.ky[0] + k4.ky[0]);
        y[1] += dt_ode / 6.0 * (k1.ky[1] + 2 * k2.ky[1] + 2 * k3.ky[1] + k4.ky[1]);
        for (int m = 0; m < 4; ++m)
            A[m] += dt_ode / 6.0 *
                    (k1.kA[m] + 2 * k2.kA[m] + 2 * k3.kA[m] + k4.kA[m]);
        v[0] += dt_ode / 6.0 * (k1.kv[0] + 2 * k2.kv[0] + 2 * k3.kv[0] + k4.kv[0]);
        v[1] += dt_ode / 6.0 * (k1.kv[1] + 2 * k2.kv[1] + 2 * k3.kv[1] + k4.kv[1]);
        double nm = std::hypot(v[0], v[1]);
        v[0] /= nm;
        v[1] /= nm;
    }

    UnitAdvanceResult out;
    out.y = {wrap_angle(y[0]), wrap_angle(y[1])};
    out.A = A;
    out.v = v;
    double g1 = A[0] * v_init[0] + A[1] * v_init[1];
    double g2 = A[2] * v_init[0] + A[3] * v_init[1];
    out.log_growth = 0.5 * std::log(g1 * g1 + g2 * g2);
    return out;
}

TripleState step_triple(const TripleState& state, const NoiseRealization& zeta,
                        const StepTripleOptions& opts, DensePath* path_out) {
    thread_local DensePath local_path;
    DensePath* path = path_out ? path_out : &local_path;
    TripleState next;
    next.u = evolve_unit(state.u, zeta, opts.dt, path);
    double h_ode = opts.dt_ode > 0 ? opts.dt_ode : opts.dt;
    auto res = advance_triple_unit(*path, state.y, state.A, Vec2{1.0, 0.0}, h_ode);
    next.y = res.y;
    next.A = res.A;
    if (opts.renorm_det) {
        double d = mat2_det(next.A);
        if (d <= 0.0) throw NotSL2("cocycle matrix lost positive determinant");
        double s = 1.0 / std::sqrt(d);
        for (auto& a : next.A) a *= s;
    }
    return next;
}

}  // namespace lcl
