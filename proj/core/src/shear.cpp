#include "lcl/shear.hpp"

#include <cmath>

namespace lcl {

double ShearProfile::g(double t) const { return nu * a1 + aj * basis.eval(j_index, t); }

double ShearProfile::f(double t) const {
    return a1 * (-std::expm1(-nu * t)) + aj * basis.duhamel(j_index, nu, 0.0, t);
}

namespace {

int pick_oscillatory_index(const NoiseParams& params, double nu) {
    // first l >= 2 whose exp-weighted integral is usable as a denominator
    double scale = std::expm1(nu);
    for (int l = 2; l <= params.L; ++l) {
        double I = params.basis.exp_weight_integral(l, nu);
        if (std::abs(I) > 1e-8 * std::max(1.0, scale)) return l;
    }
    throw InfeasibleAmplitude(
        "no oscillatory basis function with nonzero exp-weighted integral");
}

double gamma_v5_unit() {
    // ||E_j||_{V^5} for |j| = 1
    return ForcingBasis::mode(ForcingBasis::index_of(1, 0)).norm_v5;
}

}  // namespace

ShearProfile make_shear_profile(double a1, double nu, const NoiseParams& params) {
    ShearProfile p;
    p.nu = nu;
    p.a1 = a1;
    p.basis = params.basis;
    p.j_index = pick_oscillatory_index(params, nu);
    double I = params.basis.exp_weight_integral(p.j_index, nu);
    p.aj = a1 * (1.0 - std::exp(nu)) / I;
    return p;
}

ShearFeasibility shear_feasibility(const NoiseParams& params, double nu) {
    ShearFeasibility f;
    f.j_index = pick_oscillatory_index(params, nu);
    double I = params.basis.exp_weight_integral(f.j_index, nu);
    f.ratio = std::abs(std::expm1(nu) / I);
    double gamma = gamma_v5_unit();
    const double margin = 1.0 / 1.1;  // stay 10% inside the box
    double cap_const = margin * std::abs(params.b(1)) / (gamma * nu);
    double cap_osc = margin * std::abs(params.b(f.j_index)) / (gamma * f.ratio);
    f.a1_max = std::min(cap_const, cap_osc);
    if (!(f.a1_max > 0.0) || !std::isfinite(f.a1_max))
        throw InfeasibleAmplitude("shear coefficients cannot fit the support box");
    return f;
}

namespace {

// Writes the xi-table entries that give e_j the coefficient amp * g(t).
void set_profile_coeff(NoiseRealization& r, int j, double amp,
                       const ShearProfile& p, const NoiseParams& params) {
    if (amp == 0.0) return;
    r.set_xi(j, 1, r.xi(j, 1) + amp * p.nu * p.a1 / params.b(1));
    r.set_xi(j, p.j_index,
             r.xi(j, p.j_index) + amp * p.aj / params.b(p.j_index));
}

}  // namespace

NoiseRealization make_position_shear(ShearAxis axis, double phase, double a1,
                                     double nu, const NoiseParams& params) {
    NoiseRealization r(params);
    if (a1 == 0.0) return r;
    ShearProfile p = make_shear_profile(a1, nu, params);
    double gamma = gamma_v5_unit();
    if (axis == ShearAxis::Horizontal) {
        // g(t) [cos(phase) (cos x2, 0) + sin(phase) (sin x2, 0)]
        //   = -g(t) gamma [cos(phase) e_{(0,1)} + sin(phase) e_{(0,-1)}]
        set_profile_coeff(r, ForcingBasis::index_of(0, 1), -gamma * std::cos(phase),
                          p, params);
        set_profile_coeff(r, ForcingBasis::index_of(0, -1), -gamma * std::sin(phase),
                          p, params);
    } else {
        // g(t) [cos(phase) (0, cos x1) + sin(phase) (0, sin x1)]
        //   = +g(t) gamma [cos(phase) e_{(1,0)} + sin(phase) e_{(-1,0)}]
        set_profile_coeff(r, ForcingBasis::index_of(1, 0), gamma * std::cos(phase),
                          p, params);
        set_profile_coeff(r, ForcingBasis::index_of(-1, 0), gamma * std::sin(phase),
                          p, params);
    }
    if (!r.feasible())
        throw InfeasibleAmplitude("position shear does not fit the support box");
    return r;
}

NoiseRealization make_matrix_shear(Transvection::Kind kind, double a1, double nu,
                                   const NoiseParams& params) {
    NoiseRealization r(params);
    if (a1 == 0.0) return r;
    ShearProfile p = make_shear_profile(a1, nu, params);
    double gamma = gamma_v5_unit();
    if (kind == Transvection::T12) {
        // g(t) (cos x2, 0) = -g(t) gamma e_{(0,1)}
        set_profile_coeff(r, ForcingBasis::index_of(0, 1), -gamma, p, params);
    } else {
        // g(t) (0, cos x1) = +g(t) gamma e_{(1,0)}
        set_profile_coeff(r, ForcingBasis::index_of(1, 0), gamma, p, params);
    }
    if (!r.feasible())
        throw InfeasibleAmplitude("matrix shear does not fit the support box");
    return r;
}

}  // namespace lcl
