#include <doctest.h>

#include <cmath>

#include "lcl/planner.hpp"

using namespace lcl;

namespace {

GridSpec steering_grid(double nu = 1.0) {
    GridSpec g;
    g.N = 16;
    g.nu = nu;
    return g;
}

// wide control envelope used by the steering configs
NoiseParams steering_params() {
    return NoiseParams::from_preset("haar-polynomial(80,1.5)");
}

Mat2 random_sl2(RngStream& rng, double spread = 2.0) {
    auto t = [&](Transvection::Kind k) {
        return Transvection{k, rng.uniform(-spread, spread)}.matrix();
    };
    Mat2 m = mat2_mul(t(Transvection::T12),
                      mat2_mul(t(Transvection::T21), t(Transvection::T12)));
    return m;
}

StepTripleOptions steer_opts() {
    StepTripleOptions o;
    o.dt = 1e-3;
    o.renorm_det = true;
    return o;
}

}  // namespace

TEST_CASE("transvection factorization") {
    SUBCASE("identity factors into nothing") {
        CHECK(transvection_factorize(mat2_identity()).empty());
    }
    SUBCASE("pure shears reproduce themselves") {
        auto f = transvection_factorize(Mat2{1, 0, -0.7, 1});
        REQUIRE(f.size() == 1);
        CHECK(f[0].kind == Transvection::T21);
        CHECK(f[0].param == doctest::Approx(-0.7));
        auto g = transvection_factorize(Mat2{1, 1.3, 0, 1});
        REQUIRE(g.size() == 1);
        CHECK(g[0].kind == Transvection::T12);
    }
    SUBCASE("the quarter rotation has the classical three-factor form") {
        auto f = transvection_factorize(Mat2{0, -1, 1, 0});
        REQUIRE(f.size() == 3);
        CHECK(f[0].kind == Transvection::T12);
        CHECK(f[0].param == doctest::Approx(-1.0));
        CHECK(f[1].kind == Transvection::T21);
        CHECK(f[1].param == doctest::Approx(1.0));
        CHECK(f[2].kind == Transvection::T12);
        CHECK(f[2].param == doctest::Approx(-1.0));
    }
    SUBCASE("non-unimodular input is rejected") {
        CHECK_THROWS_AS(transvection_factorize(Mat2{2, 0, 0, 1}), NotSL2);
    }
    SUBCASE("round trip over random SL2 samples") {
        RngStream rng(2);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Mat2 A = random_sl2(rng);
            auto f = transvection_factorize(A);
            CHECK(f.size() <= 4);
            Mat2 P = transvection_product(f);
            for (int m = 0; m < 4; ++m)
                worst = std::max(worst, std::abs(P[m] - A[m]));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("shear feasibility splits large moves") {
    NoiseParams np = steering_params();
    ShearFeasibility f = shear_feasibility(np, 1.0);
    CHECK(f.a1_max > 0.5);   // wide envelope: pi moves need few segments
    CHECK(f.j_index == 2);
    CHECK(f.ratio == doctest::Approx(4.0830).epsilon(1e-3));
}

TEST_CASE("position steering") {
    GridSpec g = steering_grid();
    NoiseParams np = steering_params();

    SUBCASE("no-op shift is empty") {
        ControlPlan plan = shift_position({1.0, 2.0}, {1.0, 2.0}, g.nu, np);
        CHECK(plan.segments.empty());
    }

    SUBCASE("small shift lands exactly") {
        Vec2 y0{0.0, 0.0}, ys{0.1, 0.0};
        ControlPlan plan = shift_position(y0, ys, g.nu, np);
        CHECK(plan.feasible());
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = y0;
        TripleState end = execute_plan(z0, plan, steer_opts());
        CHECK(torus_distance(end.y.data(), ys.data()) < 1e-6);
        CHECK(end.u.sobolev_norm(5) < 1e-6);
        Mat2 id = mat2_identity();
        double dA = 0;
        for (int i = 0; i < 4; ++i) dA = std::max(dA, std::abs(end.A[i] - id[i]));
        CHECK(dA < 1e-6);
    }

    SUBCASE("antipodal shift splits per axis and still lands") {
        Vec2 y0{0.0, 0.0}, ys{3.141592653589793, 3.141592653589793};
        ControlPlan plan = shift_position(y0, ys, g.nu, np);
        CHECK(plan.feasible());
        int nx = 0, ny = 0;
        for (auto& s : plan.segments) {
            nx += s.tag == SegmentTag::ShiftX;
            ny += s.tag == SegmentTag::ShiftY;
        }
        CHECK(nx >= 2);
        CHECK(ny >= 2);
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = y0;
        TripleState end = execute_plan(z0, plan, steer_opts());
        CHECK(torus_distance(end.y.data(), ys.data()) < 1e-6);
    }

    SUBCASE("cocycle is untouched by shifts for random data") {
        RngStream rng(5);
        for (int rep = 0; rep < 5; ++rep) {
            Vec2 y0{rng.uniform(0, 6.28), rng.uniform(0, 6.28)};
            Vec2 ys{rng.uniform(0, 6.28), rng.uniform(0, 6.28)};
            Mat2 A0 = random_sl2(rng, 1.0);
            ControlPlan plan = shift_position(y0, ys, g.nu, np);
            TripleState z0;
            z0.u = VelocityField(g);
            z0.y = y0;
            z0.A = A0;
            StepTripleOptions opts = steer_opts();
            opts.renorm_det = false;  // measure the raw drift
            TripleState end = execute_plan(z0, plan, opts);
            CHECK(torus_distance(end.y.data(), ys.data()) < 1e-6);
            double dA = 0;
            for (int i = 0; i < 4; ++i)
                dA = std::max(dA, std::abs(end.A[i] - A0[i]));
            CHECK(dA < 1e-6);
        }
    }
}

TEST_CASE("matrix steering") {
    GridSpec g = steering_grid();
    NoiseParams np = steering_params();

    SUBCASE("zero transvection is a no-op") {
        ControlPlan plan = shear_matrix_control({Transvection::T12, 0.0},
                                                mat2_identity(), g.nu, np);
        CHECK(plan.segments.empty());
    }

    SUBCASE("small transvection in one segment") {
        NoiseParams tight = NoiseParams::from_preset("haar-polynomial(4,2)");
        double alpha = 0.05;
        ControlPlan plan = shear_matrix_control({Transvection::T12, alpha},
                                                mat2_identity(), g.nu, tight);
        REQUIRE(plan.segments.size() == 1);  // m_alpha = 1 at this envelope
        CHECK(plan.feasible());
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = kMatrixSteeringPoint;
        TripleState end = execute_plan(z0, plan, steer_opts());
        Mat2 want = Transvection{Transvection::T12, alpha}.matrix();
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(end.A[i] - want[i]) < 1e-6);
        CHECK(torus_distance(end.y.data(), kMatrixSteeringPoint.data()) < 1e-6);
    }

    SUBCASE("large transvection splits into many segments") {
        NoiseParams tight = NoiseParams::from_preset("haar-polynomial(4,2)");
        double alpha = 10.0;
        ControlPlan plan = shear_matrix_control({Transvection::T12, alpha},
                                                mat2_identity(), g.nu, tight);
        CHECK(plan.segments.size() >= 200);
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = kMatrixSteeringPoint;
        TripleState end = execute_plan(z0, plan, steer_opts());
        Mat2 want = Transvection{Transvection::T12, alpha}.matrix();
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(end.A[i] - want[i]) < 1e-5);
    }

    SUBCASE("steer_matrix reaches random targets") {
        RngStream rng(9);
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = kMatrixSteeringPoint;
        for (int rep = 0; rep < 5; ++rep) {
            Mat2 target = random_sl2(rng);
            ControlPlan plan = steer_matrix(mat2_identity(), target, g.nu, np);
            TripleState end = execute_plan(z0, plan, steer_opts());
            double dA = 0;
            for (int i = 0; i < 4; ++i)
                dA = std::max(dA, std::abs(end.A[i] - target[i]));
            CHECK(dA < 1e-5);
        }
    }

    SUBCASE("same endpoints give an empty plan") {
        Mat2 A{1.2, 0.3, 0.4, (1 + 0.3 * 0.4) / 1.2};
        ControlPlan plan = steer_matrix(A, A, g.nu, np);
        CHECK(plan.segments.empty());
    }

    SUBCASE("non-SL2 endpoints are rejected") {
        CHECK_THROWS_AS(steer_matrix(Mat2{2, 0, 0, 1}, mat2_identity(), g.nu, np),
                        NotSL2);
    }
}

TEST_CASE("attainable archive replays reproduce the recorded state") {
    GridSpec g = steering_grid();
    NoiseParams np = steering_params();
    ArchiveRecord rec = AttainableArchive::build("r0", np, g, 1e-3, 3, 77, 0.1);
    CHECK(rec.norm_v5 > 0.0);
    CHECK(AttainableArchive::verify(rec, 1e-3) < 1e-8);

    AttainableArchive arc;
    arc.add(rec);
    CHECK(arc.has("r0"));
    CHECK_THROWS_AS(arc.get("missing"), TargetNotAttainable);
}

TEST_CASE("plan_full") {
    GridSpec g = steering_grid();
    NoiseParams np = steering_params();
    PlanFullOptions popts;
    popts.eps = 1e-2;
    popts.step = steer_opts();

    SUBCASE("already at the target: empty plan") {
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = {1.0, 2.0};
        PlanTarget tgt;
        tgt.y = z0.y;
        tgt.A = z0.A;
        ControlPlan plan = plan_full(z0, tgt, np, g, popts);
        CHECK(plan.segments.empty());
        CHECK(plan.measured_distance < popts.eps);
    }

    SUBCASE("zero-velocity target: coast, shift, steer") {
        RngStream rng(21);
        TripleState z0;
        z0.u = VelocityField(g);
        {
            // start from an attainable state a couple of segments away
            PdeStepper stepper(g);
            RngStream warm(33);
            for (int i = 0; i < 2; ++i) {
                NoiseRealization zseg = sample_segment(np, warm);
                zseg.scale(0.1);
                z0.u = evolve_unit_with(stepper, z0.u, zseg, 1e-3);
            }
        }
        z0.y = {0.4, 3.0};
        PlanTarget tgt;
        tgt.y = {2.2, 5.0};
        tgt.A = random_sl2(rng, 1.0);
        ControlPlan plan = plan_full(z0, tgt, np, g, popts);
        CHECK(plan.measured_distance < 1e-2);
        bool has_coast = false, has_shift = false, has_matrix = false;
        for (auto& s : plan.segments) {
            has_coast |= s.tag == SegmentTag::Coast;
            has_shift |= s.tag == SegmentTag::ShiftX || s.tag == SegmentTag::ShiftY;
            has_matrix |= s.tag == SegmentTag::ShearMatrix;
        }
        CHECK(has_coast);
        CHECK(has_shift);
        CHECK(has_matrix);
    }

    SUBCASE("archive target with replay") {
        ArchiveRecord rec = AttainableArchive::build("t", np, g, 1e-3, 3, 55, 0.08);
        TripleState z0;
        z0.u = VelocityField(g);
        z0.y = {0.0, 0.0};
        PlanTarget tgt;
        tgt.velocity = &rec;
        tgt.y = {1.5, 0.7};
        tgt.A = mat2_identity();
        ControlPlan plan = plan_full(z0, tgt, np, g, popts);
        CHECK(plan.measured_distance < 1e-2);
        bool has_replay = false;
        for (auto& s : plan.segments) has_replay |= s.tag == SegmentTag::Replay;
        CHECK(has_replay);
    }
}
