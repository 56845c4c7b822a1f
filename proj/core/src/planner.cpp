#include "lcl/planner.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace lcl {

const char* segment_tag_name(SegmentTag tag) {
    switch (tag) {
        case SegmentTag::Coast: return "coast";
        case SegmentTag::ShiftX: return "shift_x";
        case SegmentTag::ShiftY: return "shift_y";
        case SegmentTag::ShearMatrix: return "shear_matrix";
        case SegmentTag::Replay: return "replay";
    }
    return "?";
}

bool ControlPlan::feasible() const {
    for (const auto& s : segments)
        if (!s.zeta.feasible()) return false;
    return true;
}

void ControlPlan::append(const ControlPlan& other) {
    segments.insert(segments.end(), other.segments.begin(), other.segments.end());
    predicted_y = other.predicted_y;
    predicted_A = other.predicted_A;
    predicted_u_norm = other.predicted_u_norm;
}

ControlPlan shift_position(const Vec2& y0, const Vec2& ysharp, double nu,
                           const NoiseParams& params) {
    ControlPlan plan;
    plan.predicted_y = {wrap_angle(ysharp[0]), wrap_angle(ysharp[1])};
    double dx = wrap_diff(ysharp[0], y0[0]);
    double dy = wrap_diff(ysharp[1], y0[1]);
    if (dx == 0.0 && dy == 0.0) return plan;

    ShearFeasibility feas = shear_feasibility(params, nu);
    if (std::abs(dx) > 0.0) {
        int m = int(std::ceil(std::abs(dx) / feas.a1_max));
        double a1 = dx / m;
        NoiseRealization seg =
            make_position_shear(ShearAxis::Horizontal, y0[1], a1, nu, params);
        for (int i = 0; i < m; ++i)
            plan.segments.push_back({seg, SegmentTag::ShiftX});
    }
    if (std::abs(dy) > 0.0) {
        int m = int(std::ceil(std::abs(dy) / feas.a1_max));
        double a1 = dy / m;
        NoiseRealization seg = make_position_shear(
            ShearAxis::Vertical, wrap_angle(y0[0] + dx), a1, nu, params);
        for (int i = 0; i < m; ++i)
            plan.segments.push_back({seg, SegmentTag::ShiftY});
    }
    return plan;
}

ControlPlan shear_matrix_control(const Transvection& T, const Mat2& A0, double nu,
                                 const NoiseParams& params) {
    ControlPlan plan;
    plan.predicted_y = kMatrixSteeringPoint;
    plan.predicted_A = mat2_mul(T.matrix(), A0);
    if (T.param == 0.0) {
        plan.predicted_A = A0;
        return plan;
    }
    ShearFeasibility feas = shear_feasibility(params, nu);
    int m = int(std::ceil(std::abs(T.param) / feas.a1_max));
    double a1 = -T.param / m;
    NoiseRealization seg = make_matrix_shear(T.kind, a1, nu, params);
    for (int i = 0; i < m; ++i)
        plan.segments.push_back({seg, SegmentTag::ShearMatrix});
    return plan;
}

ControlPlan steer_matrix(const Mat2& A0, const Mat2& Asharp, double nu,
                         const NoiseParams& params, double sl2_tol) {
    if (std::abs(mat2_det(A0) - 1.0) >= sl2_tol ||
        std::abs(mat2_det(Asharp) - 1.0) >= sl2_tol)
        throw NotSL2("steer_matrix endpoints must have unit determinant");

    ControlPlan plan;
    plan.predicted_y = kMatrixSteeringPoint;
    plan.predicted_A = Asharp;
    Mat2 M = mat2_mul(Asharp, mat2_inverse(A0));
    {
        double det = mat2_det(M);
        if (det <= 0.0) throw NotSL2("steer_matrix requires an orientation-preserving move");
        double sc = 1.0 / std::sqrt(det);
        for (auto& v : M) v *= sc;
    }
    auto factors = transvection_factorize(M, 1e-6);
    // A# = F0 F1 ... Fr A0; the first executed segment realizes the
    // rightmost factor.
    Mat2 cur = A0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        ControlPlan leg = shear_matrix_control(*it, cur, nu, params);
        cur = leg.predicted_A;
        plan.segments.insert(plan.segments.end(), leg.segments.begin(),
                             leg.segments.end());
    }
    plan.predicted_A = cur;
    return plan;
}

TripleState execute_plan(const TripleState& z0, const ControlPlan& plan,
                         const StepTripleOptions& opts) {
    TripleState s = z0;
    for (const auto& seg : plan.segments) s = step_triple(s, seg.zeta, opts);
    return s;
}

void AttainableArchive::add(ArchiveRecord rec) {
    records_[rec.id] = std::move(rec);
}

bool AttainableArchive::has(const std::string& id) const {
    return records_.count(id) != 0;
}

const ArchiveRecord& AttainableArchive::get(const std::string& id) const {
    auto it = records_.find(id);
    if (it == records_.end())
        throw TargetNotAttainable("no recorded control history for id " + id);
    return it->second;
}

ArchiveRecord AttainableArchive::build(const std::string& id,
                                       const NoiseParams& params,
                                       const GridSpec& grid, double dt,
                                       int n_segments, std::uint64_t seed,
                                       double amplitude_scale) {
    ArchiveRecord rec;
    rec.id = id;
    RngStream rng(seed);
    VelocityField u(grid);
    PdeStepper stepper(grid);
    for (int i = 0; i < n_segments; ++i) {
        NoiseRealization z = sample_segment(params, rng);
        z.scale(amplitude_scale);
        rec.history.push_back(z);
        u = evolve_unit_with(stepper, u, z, dt);
    }
    rec.u_final = u;
    rec.norm_v5 = u.sobolev_norm(5);
    rec.norm_v8 = u.sobolev_norm(8);
    return rec;
}

double AttainableArchive::verify(const ArchiveRecord& rec, double dt) {
    VelocityField u(rec.u_final.grid());
    PdeStepper stepper(u.grid());
    for (const auto& z : rec.history) u = evolve_unit_with(stepper, u, z, dt);
    u.axpy(-1.0, rec.u_final);
    return u.sobolev_norm(5);
}

double triple_distance(const TripleState& a, const VelocityField* u_target,
                       const Vec2& y_target, const Mat2& A_target) {
    double du;
    if (u_target) {
        VelocityField diff = a.u;
        diff.axpy(-1.0, *u_target);
        du = diff.sobolev_norm(5);
    } else {
        du = a.u.sobolev_norm(5);
    }
    double dy = torus_distance(a.y.data(), y_target.data());
    double dA = 0.0;
    for (int i = 0; i < 4; ++i) {
        double d = a.A[i] - A_target[i];
        dA += d * d;
    }
    return du + dy + std::sqrt(dA);
}

namespace {

struct ReplayEffect {
    Vec2 y_end;
    Mat2 delta;
    VelocityField u_end;
};

ReplayEffect replay_from(const ArchiveRecord& rec, const Vec2& y_start,
                         const GridSpec& grid, const StepTripleOptions& opts) {
    TripleState s;
    s.u = VelocityField(grid);
    s.y = y_start;
    s.A = mat2_identity();
    for (const auto& z : rec.history) s = step_triple(s, z, opts);
    return {s.y, s.A, s.u};
}

}  // namespace

ControlPlan plan_full(const TripleState& z0, const PlanTarget& target,
                      const NoiseParams& params, const GridSpec& grid,
                      const PlanFullOptions& opts) {
    double eps1 = opts.eps1 > 0 ? opts.eps1 : std::min(1e-6, opts.eps / 100.0);
    double nu = grid.nu;
    StepTripleOptions sim = opts.step;
    sim.renorm_det = true;  // steering runs use determinant bookkeeping

    {
        const VelocityField* u_tgt =
            target.velocity ? &target.velocity->u_final : nullptr;
        double d0 = triple_distance(z0, u_tgt, target.y, target.A);
        if (d0 < opts.eps) {
            ControlPlan empty;
            empty.predicted_y = z0.y;
            empty.predicted_A = z0.A;
            empty.predicted_u_norm = z0.u.sobolev_norm(5);
            empty.measured_distance = d0;
            return empty;
        }
    }

    auto build = [&](int extra_newton_digits) -> ControlPlan {
        ControlPlan plan;

        // Step 1: coast until the velocity has decayed below eps1; the count
        // uses the slowest mode's decay rate nu.
        TripleState s = z0;
        double n0 = z0.u.sobolev_norm(5);
        int m1 = n0 <= eps1 ? 0 : int(std::ceil(std::log(n0 / eps1) / nu));
        NoiseRealization zero_seg(params);
        for (int tries = 0; tries < 3; ++tries) {
            for (int i = 0; i < m1; ++i) {
                s = step_triple(s, zero_seg, sim);
                plan.segments.push_back({zero_seg, SegmentTag::Coast});
            }
            double n_now = s.u.sobolev_norm(5);
            if (n_now <= eps1) break;
            m1 = int(std::ceil(std::log(n_now / eps1) / nu));
        }

        // Step 2 prep: where must the pre-replay state sit?
        Vec2 y2 = target.y;
        Mat2 A2 = target.A;
        if (target.velocity) {
            // Newton iteration on the replay's position map; its Jacobian is
            // the measured cocycle matrix.
            double tol = std::min(1e-6, opts.eps / 10.0) *
                         std::pow(10.0, -extra_newton_digits);
            ReplayEffect eff{};
            for (int it = 0; it < opts.max_newton; ++it) {
                eff = replay_from(*target.velocity, y2, grid, sim);
                double r1 = wrap_diff(target.y[0], eff.y_end[0]);
                double r2 = wrap_diff(target.y[1], eff.y_end[1]);
                if (std::hypot(r1, r2) < tol) break;
                Mat2 inv = mat2_inverse(eff.delta);
                double d1 = inv[0] * r1 + inv[1] * r2;
                double d2 = inv[2] * r1 + inv[3] * r2;
                double cap = 0.5;
                d1 = std::clamp(d1, -cap, cap);
                d2 = std::clamp(d2, -cap, cap);
                y2 = {wrap_angle(y2[0] + d1), wrap_angle(y2[1] + d2)};
            }
            eff = replay_from(*target.velocity, y2, grid, sim);
            A2 = mat2_mul(mat2_inverse(eff.delta), target.A);
            // keep A2 exactly unimodular so the factorization accepts it
            double det = mat2_det(A2);
            if (det <= 0.0) throw NotSL2("replay compensation lost orientation");
            double sc = 1.0 / std::sqrt(det);
            for (auto& v : A2) v *= sc;
        }

        // Step 2: exact shifts and matrix steering through y~.
        ControlPlan leg1 = shift_position(s.y, kMatrixSteeringPoint, nu, params);
        for (auto& seg : leg1.segments) plan.segments.push_back(seg);
        ControlPlan leg2 = steer_matrix(s.A, A2, nu, params);
        for (auto& seg : leg2.segments) plan.segments.push_back(seg);
        ControlPlan leg3 = shift_position(kMatrixSteeringPoint, y2, nu, params);
        for (auto& seg : leg3.segments) plan.segments.push_back(seg);

        // Step 3: replay the recorded history.
        if (target.velocity)
            for (const auto& z : target.velocity->history)
                plan.segments.push_back({z, SegmentTag::Replay});

        plan.predicted_y = {wrap_angle(target.y[0]), wrap_angle(target.y[1])};
        plan.predicted_A = target.A;
        plan.predicted_u_norm =
            target.velocity ? target.velocity->norm_v5 : 0.0;
        return plan;
    };

    const VelocityField* u_target =
        target.velocity ? &target.velocity->u_final : nullptr;

    ControlPlan plan = build(0);
    TripleState end = execute_plan(z0, plan, sim);
    plan.measured_distance = triple_distance(end, u_target, target.y, target.A);
    if (plan.measured_distance >= opts.eps) {
        // one re-solve with a tighter position solve
        plan = build(2);
        end = execute_plan(z0, plan, sim);
        plan.measured_distance = triple_distance(end, u_target, target.y, target.A);
        if (plan.measured_distance >= opts.eps)
            throw ToleranceNotMet("plan_full missed the requested tolerance");
    }
    return plan;
}

nlohmann::json plan_to_json(const ControlPlan& plan) {
    nlohmann::json j;
    j["segments"] = nlohmann::json::array();
    for (const auto& seg : plan.segments) {
        nlohmann::json js;
        js["tag"] = segment_tag_name(seg.tag);
        js["preset"] = seg.zeta.params().preset;
        nlohmann::json table = nlohmann::json::array();
        for (int m = 0; m < ForcingBasis::size(); ++m) {
            nlohmann::json row = nlohmann::json::array();
            for (int l = 1; l <= seg.zeta.levels(); ++l) row.push_back(seg.zeta.xi(m, l));
            table.push_back(row);
        }
        js["xi"] = table;
        j["segments"].push_back(js);
    }
    j["feasible"] = plan.feasible();
    j["predicted"] = {{"y", {plan.predicted_y[0], plan.predicted_y[1]}},
                      {"A", {plan.predicted_A[0], plan.predicted_A[1],
                             plan.predicted_A[2], plan.predicted_A[3]}},
                      {"u_norm_v5", plan.predicted_u_norm}};
    if (plan.measured_distance >= 0)
        j["measured_distance"] = plan.measured_distance;
    return j;
}

}  // namespace lcl
