#pragma once

#include <map>
#include <string>

#include "lcl/shear.hpp"

#include <nlohmann/json_fwd.hpp>

namespace lcl {

inline constexpr Vec2 kMatrixSteeringPoint{1.5707963267948966,
                                           1.5707963267948966};  // (pi/2, pi/2)

enum class SegmentTag { Coast, ShiftX, ShiftY, ShearMatrix, Replay };
const char* segment_tag_name(SegmentTag tag);

struct PlanSegment {
    NoiseRealization zeta;
    SegmentTag tag;
};

// A finite sequence of unit-time control segments with its continuum-model
// prediction.  Feasibility (every coefficient table inside the support box)
// is asserted at construction.
struct ControlPlan {
    std::vector<PlanSegment> segments;
    Vec2 predicted_y{0.0, 0.0};
    Mat2 predicted_A = mat2_identity();
    double predicted_u_norm = 0.0;      // V^5 norm of the predicted terminal u
    double measured_distance = -1.0;    // filled by plan_full's dry run

    bool feasible() const;
    void append(const ControlPlan& other);
};

// Prop-5.2 style exact position steering: horizontal then vertical shear
// segments, each displacement split so the coefficients fit the box.
// Terminal state in the continuum model: u = 0, y = ysharp, A unchanged.
ControlPlan shift_position(const Vec2& y0, const Vec2& ysharp, double nu,
                           const NoiseParams& params);

// Lemma-5.5 style exact matrix steering at y~ = (pi/2, pi/2): multiplies the
// cocycle by the transvection T using m equal feasible shear segments.
ControlPlan shear_matrix_control(const Transvection& T, const Mat2& A0, double nu,
                                 const NoiseParams& params);

// Prop-5.3: factorizes Asharp A0^{-1} into transvections and concatenates
// shear_matrix_control plans.  Requires the particle at y~.
ControlPlan steer_matrix(const Mat2& A0, const Mat2& Asharp, double nu,
                         const NoiseParams& params, double sl2_tol = 1e-9);

// Runs a plan through the simulator.
TripleState execute_plan(const TripleState& z0, const ControlPlan& plan,
                         const StepTripleOptions& opts);

// Attainable velocity states: reachable from u = 0 by recorded control
// histories; targets for the velocity component are representable only
// through their generating histories.
struct ArchiveRecord {
    std::string id;
    std::vector<NoiseRealization> history;
    VelocityField u_final;
    double norm_v5 = 0.0;
    double norm_v8 = 0.0;
};

class AttainableArchive {
  public:
    void add(ArchiveRecord rec);
    bool has(const std::string& id) const;
    const ArchiveRecord& get(const std::string& id) const;
    std::size_t size() const { return records_.size(); }

    // Samples `n_segments` noise draws (scaled into the interior of the box)
    // and records the resulting velocity state.
    static ArchiveRecord build(const std::string& id, const NoiseParams& params,
                               const GridSpec& grid, double dt, int n_segments,
                               std::uint64_t seed, double amplitude_scale);

    // Replays a record from u = 0 and returns the V^5 defect against the
    // stored field.
    static double verify(const ArchiveRecord& rec, double dt);

  private:
    std::map<std::string, ArchiveRecord> records_;
};

struct PlanTarget {
    const ArchiveRecord* velocity = nullptr;  // null: target u = 0
    Vec2 y{0.0, 0.0};
    Mat2 A = mat2_identity();
};

struct PlanFullOptions {
    double eps = 1e-2;
    double eps1 = 0.0;  // coast residual; 0 picks min(1e-6, eps/100)
    int max_newton = 8;
    StepTripleOptions step;
};

// Theorem-5.1 pipeline: coast to near-zero velocity, steer (y, A) so that
// replaying the target's recorded history lands on (usharp, ysharp, Asharp),
// then replay.  The matrix effect of the replay is measured by dry-run
// simulation and compensated.  Throws ToleranceNotMet if the verified
// distance exceeds eps after one re-solve.
ControlPlan plan_full(const TripleState& z0, const PlanTarget& target,
                      const NoiseParams& params, const GridSpec& grid,
                      const PlanFullOptions& opts);

// Product-space distance ||u - u#||_{V^5} + d_{T^2}(y, y#) + ||A - A#||_F.
double triple_distance(const TripleState& a, const VelocityField* u_target,
                       const Vec2& y_target, const Mat2& A_target);

nlohmann::json plan_to_json(const ControlPlan& plan);

}  // namespace lcl
