#include <doctest.h>

#include <cmath>

#include "lcl/linearized.hpp"
#include "lcl/saturation.hpp"
#include "oracle.hpp"

using namespace lcl;

namespace {

GridSpec lin_grid(double nu = 0.8) {
    GridSpec g;
    g.N = 16;
    g.nu = nu;
    return g;
}

NoiseParams haar_params() { return NoiseParams::from_preset("haar-geometric(2)"); }

TripleTrajectory make_traj(const GridSpec& g, std::uint64_t seed, int warm,
                           double dt = 2e-3) {
    NoiseParams np = haar_params();
    RngStream rng(seed);
    TripleState z0;
    z0.u = VelocityField(g);
    {
        PdeStepper stepper(g);
        for (int i = 0; i < warm; ++i)
            z0.u = evolve_unit_with(stepper, z0.u, sample_segment(np, rng), dt);
    }
    z0.y = {1.0, 2.0};
    NoiseRealization eta = sample_segment(np, rng);
    return TripleTrajectory::make(z0, eta, dt);
}

double field_max_diff(const VelocityField& a, const VelocityField& b) {
    VelocityField d = a;
    d.axpy(-1.0, b);
    return d.max_abs_coeff();
}

}  // namespace

TEST_CASE("zero control gives the zero tangent") {
    GridSpec g = lin_grid();
    TripleTrajectory traj = make_traj(g, 3, 2);
    LinearizedSolver solver(traj);
    NoiseRealization zero(haar_params());
    TangentTriple t = solver.solve(zero);
    CHECK(t.v.max_abs_coeff() == 0.0);
    CHECK(t.z[0] == 0.0);
    CHECK(t.z[1] == 0.0);
    CHECK(mat2_norm(t.B) == 0.0);
}

TEST_CASE("constant forcing of the heat flow has the closed form") {
    // trajectory u == 0: v(1) = (1 - e^{-nu |j|^2})/(nu |j|^2) e_j and
    // z(1) = int_0^1 v(s, y0) ds
    GridSpec g = lin_grid(0.9);
    NoiseParams np = haar_params();
    TripleState z0;
    z0.u = VelocityField(g);
    z0.y = {0.7, 2.9};
    NoiseRealization eta(np);  // zero trajectory
    TripleTrajectory traj = TripleTrajectory::make(z0, eta, 1e-3);
    LinearizedSolver solver(traj);

    int j = ForcingBasis::index_of(1, 1);
    NoiseRealization dir(np);
    dir.set_xi(j, 1, 1.0 / np.b(1));  // coefficient profile == 1

    TangentTriple t = solver.solve(dir);
    double jj = ForcingBasis::mode(j).j_sq;
    double a = g.nu * jj;
    double amp = -std::expm1(-a) / a;
    VelocityField want(g);
    ForcingBasis::add_normalized(want, j, amp);
    CHECK(field_max_diff(t.v, want) < 1e-12);

    // z(1) = [ (1/a)(1 - (1 - e^{-a})/a) ] e_j(y0)
    double zint = (1.0 - amp) / a;
    double ej[2];
    double coeffs[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    coeffs[j] = 1.0;
    ForcingBasis::eval_normalized(coeffs, z0.y[0], z0.y[1], ej);
    CHECK(t.z[0] == doctest::Approx(zint * ej[0]).epsilon(1e-8));
    CHECK(t.z[1] == doctest::Approx(zint * ej[1]).epsilon(1e-8));
}

TEST_CASE("tangent map is linear in the control") {
    GridSpec g = lin_grid();
    TripleTrajectory traj = make_traj(g, 5, 2);
    LinearizedSolver solver(traj);
    NoiseParams np = haar_params();
    RngStream rng(8);
    NoiseRealization z1 = sample_segment(np, rng);
    NoiseRealization z2 = sample_segment(np, rng);
    double a = 0.6, b = -1.1;
    NoiseRealization mix(np);
    for (int j = 0; j < 8; ++j)
        for (int l = 1; l <= np.L; ++l)
            mix.set_xi(j, l, a * z1.xi(j, l) + b * z2.xi(j, l));

    TangentTriple t1 = solver.solve(z1);
    TangentTriple t2 = solver.solve(z2);
    TangentTriple tm = solver.solve(mix);

    VelocityField vv = t1.v;
    vv.scale(a);
    vv.axpy(b, t2.v);
    CHECK(field_max_diff(tm.v, vv) < 1e-9);
    CHECK(tm.z[0] == doctest::Approx(a * t1.z[0] + b * t2.z[0]).epsilon(1e-9));
    for (int i = 0; i < 4; ++i)
        CHECK(tm.B[i] ==
              doctest::Approx(a * t1.B[i] + b * t2.B[i]).epsilon(1e-8));
}

TEST_CASE("tangent matches central differences of the nonlinear map") {
    GridSpec g = lin_grid(0.6);
    NoiseParams np = haar_params();
    TripleTrajectory traj = make_traj(g, 7, 2, 2e-3);
    LinearizedSolver solver(traj);

    StepTripleOptions sopts;
    sopts.dt = traj.dt;

    RngStream rng(15);
    const double eps = 1e-5;
    for (int rep = 0; rep < 2; ++rep) {
        NoiseRealization dir = sample_segment(np, rng);
        TangentTriple t = solver.solve(dir);

        auto perturbed = [&](double s) {
            NoiseRealization eta = traj.eta;
            for (int j = 0; j < 8; ++j)
                for (int l = 1; l <= np.L; ++l)
                    eta.set_xi(j, l, eta.xi(j, l) + s * dir.xi(j, l));
            TripleState z0;
            z0.u = traj.path.field_at(0.0);
            z0.y = traj.y0;
            z0.A = traj.A0;
            return step_triple(z0, eta, sopts);
        };
        TripleState plus = perturbed(eps);
        TripleState minus = perturbed(-eps);

        VelocityField fd = plus.u;
        fd.axpy(-1.0, minus.u);
        fd.scale(1.0 / (2 * eps));
        fd.axpy(-1.0, t.v);
        double tol = std::max(1e-4, 10 * eps);
        CHECK(fd.sobolev_norm(5) < tol);
        CHECK(std::abs((plus.y[0] - minus.y[0]) / (2 * eps) - t.z[0]) < tol);
        CHECK(std::abs((plus.y[1] - minus.y[1]) / (2 * eps) - t.z[1]) < tol);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs((plus.A[i] - minus.A[i]) / (2 * eps) - t.B[i]) < tol);
    }
}

TEST_CASE("tangent stays on the SL2 tangent space") {
    GridSpec g = lin_grid();
    TripleTrajectory traj = make_traj(g, 9, 3);
    LinearizedSolver solver(traj);
    NoiseParams np = haar_params();
    RngStream rng(4);
    for (int rep = 0; rep < 3; ++rep) {
        TangentTriple t = solver.solve(sample_segment(np, rng));
        CHECK(std::abs(t.sl2_tangency) < 1e-6);
    }
}

TEST_CASE("gramian at the resting state has velocity rank exactly 8") {
    GridSpec g = lin_grid(0.8);
    NoiseParams np = haar_params();
    TripleState z0;
    z0.u = VelocityField(g);
    z0.y = {2.0, 4.0};
    NoiseRealization eta(np);  // eta == 0
    TripleTrajectory traj = TripleTrajectory::make(z0, eta, 1e-3);
    GramianReport rep = gramian(traj, 2, 12);
    CHECK(rep.dim_velocity == 24);
    CHECK(rep.dim_total == 29);
    CHECK(rep.velocity_block_rank == 8);
    CHECK(rep.rank <= 13);  // 8 velocity + 2 position + 3 matrix at most
    for (std::size_t i = 1; i < rep.singular_values.size(); ++i)
        CHECK(rep.singular_values[i] <= rep.singular_values[i - 1] * (1 + 1e-12));
}

TEST_CASE("generic trajectory reaches full truncated rank") {
    GridSpec g = lin_grid(0.8);
    TripleTrajectory traj = make_traj(g, 11, 2, 2e-3);
    GramianReport rep = gramian(traj, 2, 12);
    CHECK(rep.rank == rep.dim_total);
    CHECK(rep.singular_values.back() / rep.singular_values.front() > 1e-10);
}

TEST_CASE("enlarging the control space never shrinks singular values") {
    GridSpec g = lin_grid(0.8);
    TripleTrajectory traj = make_traj(g, 13, 1, 2e-3);
    GramianReport r6 = gramian(traj, 2, 6);
    GramianReport r12 = gramian(traj, 2, 12);
    for (std::size_t i = 0; i < r6.singular_values.size(); ++i)
        CHECK(r12.singular_values[i] >= r6.singular_values[i] * (1 - 1e-10));
}

TEST_CASE("saturation ladder") {
    SUBCASE("level zero is the eight forced directions") {
        SaturationLadder lad = saturation_ladder(3, 1);
        REQUIRE(!lad.dims.empty());
        CHECK(lad.dims[0] == 8);
    }
    SUBCASE("the first level strictly grows") {
        SaturationLadder lad = saturation_ladder(3, 1);
        REQUIRE(lad.dims.size() >= 2);
        CHECK(lad.dims[1] > 8);
    }
    SUBCASE("dimensions are nondecreasing and eventually cover R = 2") {
        SaturationLadder lad = saturation_ladder(2, 8);
        for (std::size_t i = 1; i < lad.dims.size(); ++i)
            CHECK(lad.dims[i] >= lad.dims[i - 1]);
        CHECK(lad.full_dim == 24);
        CHECK(lad.covered_at_level >= 0);
        CHECK(lad.dims.back() == 24);
    }
    SUBCASE("the ladder is reproducible") {
        SaturationLadder a = saturation_ladder(3, 6);
        SaturationLadder b = saturation_ladder(3, 6);
        CHECK(a.dims == b.dims);
        CHECK(a.covered_at_level == b.covered_at_level);
    }
}

TEST_CASE("symbolic convolution agrees with the spectral operator") {
    GridSpec g = lin_grid();
    FftWorkspace ws(g.N);
    // Q(e_(1,0)) e_(0,1) from the oracle versus the FFT route
    oracle::ModeMap a = oracle::raw_E(1, 0);
    oracle::ModeMap b = oracle::raw_E(0, 1);
    oracle::ModeMap want = oracle::Q(a, b);

    VelocityField fa(g), fb(g);
    ForcingBasis::add_raw(fa, ForcingBasis::index_of(1, 0), 1.0);
    ForcingBasis::add_raw(fb, ForcingBasis::index_of(0, 1), 1.0);
    VelocityField got = linearized_term(fa, fb, ws);
    CHECK(oracle::max_diff(oracle::from_field(got), want) < 1e-13);
}
