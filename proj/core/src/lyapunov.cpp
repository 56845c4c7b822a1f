#include "lcl/lyapunov.hpp"

#include <algorithm>
#include <cmath>

namespace lcl {

void qr_step(const Mat2& A, Mat2& qout, double& log_r11, double& log_r22) {
    double a = A[0], b = A[1], c = A[2], d = A[3];
    double r = std::hypot(a, c);
    if (r == 0.0) throw NotSL2("cocycle increment is singular");
    double cs = a / r, sn = c / r;
    double r12 = cs * b + sn * d;
    double r22 = -sn * b + cs * d;
    (void)r12;
    if (r22 < 0) {
        // flip the second column so R has a positive diagonal
        r22 = -r22;
        qout = {cs, sn, sn, -cs};
    } else {
        qout = {cs, -sn, sn, cs};
    }
    if (r22 == 0.0) throw NotSL2("cocycle increment is singular");
    log_r11 = std::log(r);
    log_r22 = std::log(r22);
}

NavierStokesSource::NavierStokesSource(const GridSpec& grid,
                                       const NoiseParams& params,
                                       std::uint64_t stream_seed,
                                       const TripleState& initial,
                                       const StepTripleOptions& opts)
    : grid_(grid),
      params_(params),
      opts_(opts),
      rng_(stream_seed),
      stepper_(std::make_unique<PdeStepper>(grid)),
      u_(initial.u.grid() == grid ? initial.u : VelocityField(grid)),
      y_(initial.y) {}

NavierStokesSource::~NavierStokesSource() = default;

void NavierStokesSource::advance_velocity() {
    NoiseRealization zeta = sample_segment(params_, rng_);
    u_ = evolve_unit_with(*stepper_, u_, zeta, opts_.dt, &path_);
}

Mat2 NavierStokesSource::step(const Mat2& Q) {
    advance_velocity();
    double h = opts_.dt_ode > 0 ? opts_.dt_ode : opts_.dt;
    auto res = advance_triple_unit(path_, y_, Q, Vec2{1.0, 0.0}, h);
    y_ = res.y;
    // G = A Q^{-1}; for orthonormal Q, det G = det A
    det_drift_ = std::max(det_drift_, std::abs(mat2_det(res.A) / mat2_det(Q) - 1.0));
    return res.A;
}

double NavierStokesSource::step_projective(Vec2& v) {
    advance_velocity();
    double h = opts_.dt_ode > 0 ? opts_.dt_ode : opts_.dt;
    auto res = advance_triple_unit(path_, y_, mat2_identity(), v, h);
    y_ = res.y;
    double g1 = res.A[0] * v[0] + res.A[1] * v[1];
    double g2 = res.A[2] * v[0] + res.A[3] * v[1];
    double n = std::hypot(g1, g2);
    v = {g1 / n, g2 / n};
    return std::log(n);
}

double NavierStokesSource::velocity_norm(int m) const { return u_.sobolev_norm(m); }

Mat2 SyntheticSource::step(const Mat2& Q) { return mat2_mul(gen_(n_++), Q); }

double SyntheticSource::step_projective(Vec2& v) {
    Mat2 g = gen_(np_++);
    double g1 = g[0] * v[0] + g[1] * v[1];
    double g2 = g[2] * v[0] + g[3] * v[1];
    double n = std::hypot(g1, g2);
    if (n == 0.0) throw NotSL2("projective step annihilated the direction");
    v = {g1 / n, g2 / n};
    return std::log(n);
}

namespace {

// Stationary bootstrap (geometric block lengths, circular wrap) over a
// series of block means.
void bootstrap_ci(const std::vector<double>& means, int resamples,
                  std::uint64_t seed, double& lo, double& hi) {
    int nb = int(means.size());
    if (nb < 2) {
        lo = hi = nb == 1 ? means[0] : 0.0;
        return;
    }
    RngStream rng(seed);
    double expected_len = std::max(1.0, std::round(std::sqrt(double(nb))));
    double p_stop = 1.0 / expected_len;
    std::vector<double> stats(resamples);
    for (int r = 0; r < resamples; ++r) {
        double acc = 0.0;
        int idx = int(rng.u01() * nb);
        for (int i = 0; i < nb; ++i) {
            acc += means[idx];
            if (rng.u01() < p_stop)
                idx = int(rng.u01() * nb);
            else
                idx = (idx + 1) % nb;
        }
        stats[r] = acc / nb;
    }
    std::sort(stats.begin(), stats.end());
    auto pick = [&](double q) {
        double pos = q * (resamples - 1);
        int i = int(pos);
        double f = pos - i;
        return i + 1 < resamples ? stats[i] * (1 - f) + stats[i + 1] * f
                                 : stats[i];
    };
    lo = pick(0.025);
    hi = pick(0.975);
}

}  // namespace

LyapunovEstimate estimate(CocycleSource& source, const LyapunovOptions& opts) {
    if (opts.block < 10) throw ConfigError("lyapunov.block must be >= 10");
    if (opts.n < 10 * opts.block)
        throw ConfigError("lyapunov.n must be at least 10 blocks long");
    int burn = opts.burn_in >= 0 ? opts.burn_in
                                 : std::max(100, opts.n / 100);

    Mat2 Q = mat2_identity();
    double lr1, lr2;
    for (int i = 0; i < burn; ++i) {
        Mat2 A = source.step(Q);
        qr_step(A, Q, lr1, lr2);
    }

    std::vector<double> inc1(opts.n), inc2(opts.n);
    for (int i = 0; i < opts.n; ++i) {
        Mat2 A = source.step(Q);
        qr_step(A, Q, lr1, lr2);
        inc1[i] = lr1;
        inc2[i] = lr2;
        if (opts.observer) opts.observer(i, lr1, lr2);
    }

    LyapunovEstimate est;
    est.n_steps = opts.n;
    est.block = opts.block;
    est.burn_in = burn;
    est.seed = opts.seed;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < opts.n; ++i) {
        s1 += inc1[i];
        s2 += inc2[i];
    }
    est.lambda_plus = s1 / opts.n;
    est.lambda_minus = s2 / opts.n;
    est.lambda_sum = est.lambda_plus + est.lambda_minus;

    int nb = opts.n / opts.block;
    est.block_estimates.resize(nb);
    for (int b = 0; b < nb; ++b) {
        double acc = 0.0;
        for (int i = 0; i < opts.block; ++i) acc += inc1[b * opts.block + i];
        est.block_estimates[b] = acc / opts.block;
    }
    bootstrap_ci(est.block_estimates, opts.bootstrap_resamples,
                 derive_stream_seed(opts.seed, "bootstrap", 0), est.ci_lo,
                 est.ci_hi);
    return est;
}

double estimate_projective(CocycleSource& source, const Vec2& v0, int n,
                           int burn_in) {
    double nv = std::hypot(v0[0], v0[1]);
    if (nv == 0.0) throw OutOfDomain("projective start vector must be nonzero");
    Vec2 v{v0[0] / nv, v0[1] / nv};
    int burn = burn_in >= 0 ? burn_in : std::max(100, n / 100);
    for (int i = 0; i < burn; ++i) source.step_projective(v);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += source.step_projective(v);
    return acc / n;
}

}  // namespace lcl
