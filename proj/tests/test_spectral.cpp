#include <doctest.h>

#include <cmath>

#include "lcl/checkpoint.hpp"
#include "lcl/forcing_basis.hpp"
#include "lcl/ops.hpp"
#include "lcl/solver.hpp"
#include "oracle.hpp"

using namespace lcl;

namespace {

GridSpec small_grid(int N = 16, double nu = 1.0) {
    GridSpec g;
    g.N = N;
    g.nu = nu;
    return g;
}

// random divergence-free field with decaying spectrum
VelocityField random_field(const GridSpec& g, std::uint64_t seed, double decay = 0.4) {
    RngStream rng(seed);
    std::vector<Complex> r1(g.spectral_size()), r2(g.spectral_size());
    int K = g.cutoff();
    for_each_canonical(K, [&](int k1, int k2) {
        double w = std::exp(-decay * (k1 * k1 + k2 * k2));
        Complex a(rng.uniform(-1, 1), rng.uniform(-1, 1));
        Complex b(rng.uniform(-1, 1), rng.uniform(-1, 1));
        r1[g.index(k1, k2)] = w * a;
        r2[g.index(k1, k2)] = w * b;
        if (k2 == 0) {
            r1[g.index(-k1, 0)] = std::conj(w * a);
            r2[g.index(-k1, 0)] = std::conj(w * b);
        }
    });
    return leray_project(g, r1, r2);
}

}  // namespace

TEST_CASE("leray projection annihilates gradient fields") {
    GridSpec g = small_grid();
    // grad p with p = cos<k,x>: coefficients parallel to k
    std::vector<Complex> r1(g.spectral_size()), r2(g.spectral_size());
    int k1 = 2, k2 = 1;
    r1[g.index(k1, k2)] = Complex(0, 0.5) * double(k1);
    r2[g.index(k1, k2)] = Complex(0, 0.5) * double(k2);
    VelocityField u = leray_project(g, r1, r2);
    CHECK(u.is_zero());
}

TEST_CASE("leray projection fixes the forced directions") {
    GridSpec g = small_grid();
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        VelocityField e(g);
        ForcingBasis::add_raw(e, j, 1.0);
        VelocityField p = leray_project(g, e.comp(0), e.comp(1));
        p.axpy(-1.0, e);
        CHECK(p.max_abs_coeff() < 1e-15);
    }
}

TEST_CASE("leray projection of a mixed mode matches the hand value") {
    // u_{(1,0)} = (1,1) -> (0,1)
    GridSpec g = small_grid();
    std::vector<Complex> r1(g.spectral_size()), r2(g.spectral_size());
    r1[g.index(1, 0)] = 1.0;
    r2[g.index(1, 0)] = 1.0;
    r1[g.index(-1, 0)] = 1.0;
    r2[g.index(-1, 0)] = 1.0;
    VelocityField u = leray_project(g, r1, r2);
    auto c = u.coeff(1, 0);
    CHECK(std::abs(c[0] - Complex(0, 0)) < 1e-15);
    CHECK(std::abs(c[1] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("leray projection rejects non-Hermitian input") {
    GridSpec g = small_grid();
    std::vector<Complex> r1(g.spectral_size()), r2(g.spectral_size());
    r1[g.index(1, 0)] = Complex(1, 0);
    r1[g.index(-1, 0)] = Complex(0.5, 0);  // not the conjugate
    CHECK_THROWS_AS(leray_project(g, r1, r2), SymmetryViolation);
}

TEST_CASE("nonlinear term vanishes on zero and on single shells") {
    GridSpec g = small_grid();
    FftWorkspace ws(g.N);
    VelocityField zero(g);
    CHECK(nonlinear_term(zero, ws).is_zero());
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        VelocityField e(g);
        ForcingBasis::add_normalized(e, j, 1.3);
        CHECK(nonlinear_term(e, ws).max_abs_coeff() < 1e-15);
    }
}

TEST_CASE("nonlinear term matches the symbolic convolution oracle") {
    GridSpec g = small_grid();
    FftWorkspace ws(g.N);

    SUBCASE("two modes on the same shell cancel after projection") {
        // raw convolution of E_(1,0) + E_(0,1) lives on (1,+-1) but the
        // projection kills it
        oracle::ModeMap u = oracle::raw_E(1, 0);
        for (const auto& [k, v] : oracle::raw_E(0, 1))
            oracle::add_mode(u, k.k1, k.k2, v[0], v[1]);
        oracle::ModeMap conv = oracle::convolve_advection(u, u);
        for (const auto& [k, v] : conv) {
            bool on_support = (std::abs(k.k1) == 1 && std::abs(k.k2) == 1);
            if (!on_support) CHECK(std::max(std::abs(v[0]), std::abs(v[1])) < 1e-15);
        }
        CHECK(oracle::max_diff(oracle::B(u), {}) < 1e-15);

        VelocityField uf(g);
        ForcingBasis::add_raw(uf, ForcingBasis::index_of(1, 0), 1.0);
        ForcingBasis::add_raw(uf, ForcingBasis::index_of(0, 1), 1.0);
        CHECK(nonlinear_term(uf, ws).max_abs_coeff() < 1e-14);
    }

    SUBCASE("cross-shell pair agrees with the oracle") {
        oracle::ModeMap u = oracle::raw_E(1, 0);
        for (const auto& [k, v] : oracle::raw_E(1, 1))
            oracle::add_mode(u, k.k1, k.k2, v[0], v[1]);
        oracle::ModeMap want = oracle::B(u);
        CHECK(oracle::max_diff(want, {}) > 1e-3);  // genuinely nonzero

        VelocityField uf(g);
        ForcingBasis::add_raw(uf, ForcingBasis::index_of(1, 0), 1.0);
        ForcingBasis::add_raw(uf, ForcingBasis::index_of(1, 1), 1.0);
        VelocityField got = nonlinear_term(uf, ws);
        CHECK(oracle::max_diff(oracle::from_field(got), want) < 1e-13);
    }

    SUBCASE("random field agrees with the oracle") {
        VelocityField u = random_field(small_grid(), 7);
        oracle::ModeMap want = oracle::B(oracle::from_field(u));
        // drop oracle modes outside the dealias cutoff (the Galerkin product
        // truncates them)
        oracle::ModeMap trunc;
        for (const auto& [k, v] : want)
            if (u.grid().retained(k.k1, k.k2))
                oracle::add_mode(trunc, k.k1, k.k2, v[0], v[1]);
        VelocityField got = nonlinear_term(u, ws);
        CHECK(oracle::max_diff(oracle::from_field(got), trunc) < 1e-12);
    }
}

TEST_CASE("linearized term is the polarization of B") {
    GridSpec g = small_grid();
    FftWorkspace ws(g.N);
    VelocityField u = random_field(g, 11);
    VelocityField v = random_field(g, 13);
    VelocityField zero(g);

    CHECK(linearized_term(zero, v, ws).is_zero());
    CHECK(linearized_term(u, zero, ws).is_zero());

    // Q(u)u = 2 B(u)
    VelocityField quu = linearized_term(u, u, ws);
    VelocityField b = nonlinear_term(u, ws);
    quu.axpy(-2.0, b);
    CHECK(quu.max_abs_coeff() < 1e-12);

    // Q(u)v = B(u+v) - B(u) - B(v)
    VelocityField sum = u;
    sum.axpy(1.0, v);
    VelocityField lhs = linearized_term(u, v, ws);
    VelocityField rhs = nonlinear_term(sum, ws);
    rhs.axpy(-1.0, nonlinear_term(u, ws));
    rhs.axpy(-1.0, nonlinear_term(v, ws));
    lhs.axpy(-1.0, rhs);
    CHECK(lhs.max_abs_coeff() < 1e-12);

    GridSpec g2 = small_grid(32);
    VelocityField other(g2);
    CHECK_THROWS_AS(linearized_term(u, other, ws), GridMismatch);
}

TEST_CASE("nonlinearity is L2-orthogonal to the field") {
    GridSpec g = small_grid(32, 0.5);
    FftWorkspace ws(g.N);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        VelocityField u = random_field(g, seed);
        VelocityField b = nonlinear_term(u, ws);
        double ip = std::abs(l2_inner(b, u));
        double bound = 1e-10 * std::pow(u.l2_norm(), 3);
        CHECK(ip < bound);
    }
}

TEST_CASE("field invariants hold to machine precision on op outputs") {
    GridSpec g = small_grid(32, 0.5);
    FftWorkspace ws(g.N);
    for (std::uint64_t seed : {5u, 6u}) {
        VelocityField u = random_field(g, seed);
        CHECK(u.divergence_defect() < 1e-14);
        CHECK(u.hermitian_defect() == 0.0);
        VelocityField b = nonlinear_term(u, ws);
        CHECK(b.divergence_defect() < 1e-13);
        CHECK(b.hermitian_defect() == 0.0);
    }
}

TEST_CASE("single-mode decay is exact") {
    GridSpec g = small_grid(16, 0.7);
    NoiseParams np = NoiseParams::from_preset("haar-geometric(2)");
    NoiseRealization zero(np);
    for (auto [j1, j2] : {std::pair{1, 0}, std::pair{1, 1}}) {
        VelocityField u0(g);
        ForcingBasis::add_normalized(u0, ForcingBasis::index_of(j1, j2), 0.8);
        VelocityField u1 = evolve_unit(u0, zero, 1e-3);
        double jj = double(j1 * j1 + j2 * j2);
        double want = 0.8 * std::exp(-g.nu * jj);
        double got = u1.sobolev_norm(5);
        CHECK(std::abs(got - want) / want < 1e-10);
    }
}

TEST_CASE("unforced energy is nonincreasing") {
    GridSpec g = small_grid(32, 0.2);
    PdeStepper s(g);
    s.set_state(random_field(g, 21, 0.25));
    double prev = s.state().l2_norm();
    for (int i = 0; i < 1000; ++i) {
        s.substep(nullptr, 1e-3);
        if (i % 50 == 49) {
            double now = s.state().l2_norm();
            CHECK(now <= prev * (1 + 1e-13));
            prev = now;
        }
    }
}

TEST_CASE("stepper is second order on the nonlinear part") {
    GridSpec g = small_grid(16, 0.3);
    VelocityField u0(g);
    ForcingBasis::add_raw(u0, ForcingBasis::index_of(1, 0), 1.0);
    ForcingBasis::add_raw(u0, ForcingBasis::index_of(1, 1), 0.7);

    auto advance = [&](double dt, int steps) {
        PdeStepper s(g);
        s.set_state(u0);
        for (int i = 0; i < steps; ++i) s.substep(nullptr, dt);
        return s.state();
    };
    double T = 0.128;
    VelocityField ref = advance(T / 256, 256);
    auto err = [&](const VelocityField& u) {
        VelocityField d = u;
        d.axpy(-1.0, ref);
        return d.l2_norm();
    };
    double e1 = err(advance(T / 16, 16));
    double e2 = err(advance(T / 32, 32));
    double ratio = e1 / e2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("instability guard trips instead of overflowing") {
    GridSpec g = small_grid(16, 0.01);
    PdeStepper s(g);
    s.overflow_guard = 1e-3;
    s.set_state(random_field(g, 3));
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 10; ++i) s.substep(nullptr, 1e-3);
        }(),
        Instability);
}

TEST_CASE("point evaluation matches the defining formulas") {
    GridSpec g = small_grid();

    SUBCASE("forced direction at the origin") {
        VelocityField u(g);
        int j = ForcingBasis::index_of(0, 1);
        ForcingBasis::add_raw(u, j, 1.0);
        PointEval pe;
        eval_field(u, 0.0, 0.0, 0, pe);
        double want[2];
        ForcingBasis::mode(j).eval(0.0, 0.0, want);
        CHECK(pe.u[0] == doctest::Approx(want[0]).epsilon(1e-14));
        CHECK(pe.u[1] == doctest::Approx(want[1]).epsilon(1e-14));
    }

    SUBCASE("shear Jacobian at the steering point") {
        // u = f (cos x2, 0): D_x u(pi/2, pi/2) = f [[0, -1], [0, 0]]
        double f = 0.37;
        VelocityField u(g);
        ForcingBasis::add_raw(u, ForcingBasis::index_of(0, 1), -f);
        PointEval pe;
        eval_field(u, 1.5707963267948966, 1.5707963267948966, 2, pe);
        CHECK(std::abs(pe.du[0][0]) < 1e-14);
        CHECK(pe.du[0][1] == doctest::Approx(-f).epsilon(1e-13));
        CHECK(std::abs(pe.du[1][0]) < 1e-14);
        CHECK(std::abs(pe.du[1][1]) < 1e-14);
    }

    SUBCASE("zero field evaluates to zero") {
        VelocityField u(g);
        PointEval pe;
        eval_field(u, 1.0, 2.0, 2, pe);
        CHECK(pe.u[0] == 0.0);
        CHECK(pe.du[1][0] == 0.0);
        CHECK(pe.d2u[0][1][1] == 0.0);
    }

    SUBCASE("derivatives agree with the direct sum on a random field") {
        VelocityField u = random_field(g, 17);
        double x1 = 0.83, x2 = 2.64;
        PointEval pe;
        eval_field(u, x1, x2, 2, pe);
        Complex val[2]{}, d1[2]{}, d11[2]{};
        int K = g.cutoff();
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k1 = -K; k1 <= K; ++k1) {
                if (k1 == 0 && k2 == 0) continue;
                auto c = u.coeff(k1, k2);
                Complex ph = std::exp(Complex(0, k1 * x1 + k2 * x2));
                for (int m = 0; m < 2; ++m) {
                    val[m] += c[m] * ph;
                    d1[m] += Complex(0, k1) * c[m] * ph;
                    d11[m] += -double(k1) * k1 * c[m] * ph;
                }
            }
        for (int m = 0; m < 2; ++m) {
            CHECK(std::abs(pe.u[m] - val[m].real()) < 1e-12);
            CHECK(std::abs(pe.du[m][0] - d1[m].real()) < 1e-12);
            CHECK(std::abs(pe.d2u[m][0][0] - d11[m].real()) < 1e-11);
        }
    }

    SUBCASE("path evaluation rejects times outside the record") {
        DensePath p(g, 0.0, 0.1, 10);
        PointEval pe;
        CHECK_THROWS_AS(p.eval(1.5, 0.0, 0.0, 1, pe), OutOfDomain);
    }
}

TEST_CASE("sobolev norms") {
    GridSpec g = small_grid();
    VelocityField zero(g);
    CHECK(zero.sobolev_norm(0) == 0.0);
    CHECK(zero.sobolev_norm(5) == 0.0);

    for (int j = 0; j < ForcingBasis::size(); ++j) {
        VelocityField e(g);
        ForcingBasis::add_normalized(e, j, 1.0);
        CHECK(e.sobolev_norm(5) == doctest::Approx(1.0).epsilon(1e-13));
    }

    // ||a E_(1,1)||_{L^2} = |a| sqrt(|jperp|^2 (2pi)^2 / 2) = |a| 2 pi
    VelocityField u(g);
    double a = -0.73;
    ForcingBasis::add_raw(u, ForcingBasis::index_of(1, 1), a);
    CHECK(u.sobolev_norm(0) ==
          doctest::Approx(std::abs(a) * 2.0 * 3.14159265358979324).epsilon(1e-13));

    CHECK_THROWS_AS(u.sobolev_norm(-1), OutOfDomain);
}

TEST_CASE("checkpoint round trip preserves every coefficient") {
    GridSpec g = small_grid(32, 0.37);
    VelocityField u = random_field(g, 41);
    write_checkpoint("ckpt_test.lcl", u);
    VelocityField r = read_checkpoint("ckpt_test.lcl");
    CHECK(r.grid().N == g.N);
    CHECK(r.grid().nu == g.nu);
    r.axpy(-1.0, u);
    CHECK(r.max_abs_coeff() == 0.0);
    std::remove("ckpt_test.lcl");
}
