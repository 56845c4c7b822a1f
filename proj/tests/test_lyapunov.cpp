#include <doctest.h>

#include <cmath>

#include "lcl/lyapunov.hpp"

using namespace lcl;

namespace {

LyapunovOptions quick_opts(int n = 500, int block = 25) {
    LyapunovOptions o;
    o.n = n;
    o.block = block;
    o.burn_in = 10;
    o.seed = 42;
    return o;
}

}  // namespace

TEST_CASE("constant diagonal cocycle gives the exact exponents") {
    SyntheticSource src([](int) { return Mat2{2.0, 0.0, 0.0, 0.5}; });
    LyapunovEstimate est = estimate(src, quick_opts());
    CHECK(est.lambda_plus == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(est.lambda_minus == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(est.lambda_sum) < 1e-12);
    CHECK(est.ci_lo <= est.lambda_plus + 1e-14);
    CHECK(est.lambda_plus <= est.ci_hi + 1e-14);
}

TEST_CASE("identity cocycle gives zero exponents") {
    SyntheticSource src([](int) { return mat2_identity(); });
    LyapunovEstimate est = estimate(src, quick_opts());
    CHECK(est.lambda_plus == 0.0);
    CHECK(est.lambda_minus == 0.0);
}

TEST_CASE("rotation cocycle preserves the norm") {
    auto rng = std::make_shared<RngStream>(7);
    SyntheticSource src([rng](int) {
        double th = rng->uniform(0.0, 6.283185307179586);
        double c = std::cos(th), s = std::sin(th);
        return Mat2{c, -s, s, c};
    });
    LyapunovEstimate est = estimate(src, quick_opts());
    CHECK(std::abs(est.lambda_plus) < 1e-9);
    CHECK(std::abs(est.lambda_minus) < 1e-9);
}

TEST_CASE("estimate is deterministic in (seed, config)") {
    GridSpec g;
    g.N = 16;
    g.nu = 0.5;
    NoiseParams np = NoiseParams::from_preset("haar-geometric(2)");
    StepTripleOptions sopts;
    sopts.dt = 2e-3;

    auto run = [&] {
        TripleState init;
        init.u = VelocityField(g);
        NavierStokesSource src(g, np, derive_stream_seed(9, "noise", 0), init,
                               sopts);
        LyapunovOptions o = quick_opts(120, 12);
        o.burn_in = 5;
        return estimate(src, o);
    };
    LyapunovEstimate a = run();
    LyapunovEstimate b = run();
    CHECK(a.lambda_plus == b.lambda_plus);  // bitwise
    CHECK(a.lambda_minus == b.lambda_minus);
    CHECK(a.ci_lo == b.ci_lo);
    CHECK(a.ci_hi == b.ci_hi);
}

TEST_CASE("SL2 pairing on a short Navier-Stokes run") {
    GridSpec g;
    g.N = 16;
    g.nu = 0.5;
    NoiseParams np = NoiseParams::from_preset("haar-geometric(2)");
    StepTripleOptions sopts;
    sopts.dt = 1e-3;
    TripleState init;
    init.u = VelocityField(g);
    NavierStokesSource src(g, np, derive_stream_seed(4, "noise", 0), init, sopts);
    LyapunovOptions o = quick_opts(200, 20);
    o.burn_in = 20;
    LyapunovEstimate est = estimate(src, o);
    CHECK(std::abs(est.lambda_sum) < 1e-3 * std::max(1.0, std::abs(est.lambda_plus)));
    CHECK(est.lambda_plus >= -(est.ci_hi - est.ci_lo));
    CHECK(src.det_drift() < 1e-7);
}

TEST_CASE("projective estimator") {
    SUBCASE("diagonal source, top direction") {
        SyntheticSource src([](int) { return Mat2{2.0, 0.0, 0.0, 0.5}; });
        double lam = estimate_projective(src, {1.0, 0.0}, 200, 0);
        CHECK(lam == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("generic start aligns with the top direction") {
        SyntheticSource src([](int) { return Mat2{2.0, 0.0, 0.0, 0.5}; });
        double lam = estimate_projective(src, {1.0, 1e-6}, 400, 50);
        CHECK(lam == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    }
    SUBCASE("identity source") {
        SyntheticSource src([](int) { return mat2_identity(); });
        CHECK(estimate_projective(src, {0.3, 0.9}, 100, 0) == 0.0);
    }
    SUBCASE("agrees with the QR estimator on the same noise stream") {
        GridSpec g;
        g.N = 16;
        g.nu = 0.4;
        NoiseParams np = NoiseParams::from_preset("haar-geometric(2)");
        StepTripleOptions sopts;
        sopts.dt = 2e-3;
        TripleState init;
        init.u = VelocityField(g);
        LyapunovOptions o = quick_opts(300, 30);
        o.burn_in = 30;

        NavierStokesSource s1(g, np, derive_stream_seed(11, "noise", 0), init,
                              sopts);
        LyapunovEstimate qr = estimate(s1, o);
        NavierStokesSource s2(g, np, derive_stream_seed(11, "noise", 0), init,
                              sopts);
        double proj = estimate_projective(s2, {1.0, 0.0}, o.n, o.burn_in);
        double half_width = 0.5 * (qr.ci_hi - qr.ci_lo);
        CHECK(std::abs(proj - qr.lambda_plus) <= 2.0 * std::max(half_width, 1e-3));
    }
}

TEST_CASE("qr_step produces a positive upper-triangular factor") {
    Mat2 A{0.3, -1.7, 2.2, 0.9};
    Mat2 Q;
    double l1, l2;
    qr_step(A, Q, l1, l2);
    // Q orthogonal
    CHECK(std::abs(Q[0] * Q[0] + Q[2] * Q[2] - 1.0) < 1e-14);
    CHECK(std::abs(Q[0] * Q[1] + Q[2] * Q[3]) < 1e-14);
    // A = Q R reconstruction with the returned log-diagonals
    double r11 = std::exp(l1);
    CHECK(std::hypot(A[0], A[2]) == doctest::Approx(r11).epsilon(1e-13));
    CHECK(std::abs(mat2_det(A)) ==
          doctest::Approx(std::exp(l1 + l2)).epsilon(1e-12));
}

TEST_CASE("estimator rejects undersized configurations") {
    SyntheticSource src([](int) { return mat2_identity(); });
    LyapunovOptions o;
    o.n = 50;
    o.block = 9;
    CHECK_THROWS_AS(estimate(src, o), ConfigError);
    o.block = 10;
    o.n = 50;  // fewer than 10 blocks
    CHECK_THROWS_AS(estimate(src, o), ConfigError);
}
