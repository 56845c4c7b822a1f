#include "lcl/forcing_basis.hpp"

#include <cmath>
#include <numbers>

namespace lcl {

void ForcedMode::eval(double x1, double x2, double out[2]) const {
    double th = j1 * x1 + j2 * x2;
    double t = cos_type ? std::cos(th) : std::sin(th);
    out[0] = jperp1 * t;
    out[1] = jperp2 * t;
}

namespace {

ForcedMode make_mode(int j1, int j2) {
    ForcedMode m{};
    m.j1 = j1;
    m.j2 = j2;
    m.cos_type = (j1 > 0) || (j1 == 0 && j2 > 0);
    m.jperp1 = -j2;
    m.jperp2 = j1;
    m.j_sq = double(j1) * j1 + double(j2) * j2;
    m.norm_v5 = std::numbers::pi * std::sqrt(2.0) *
                std::pow(std::sqrt(m.j_sq), kPhaseSpaceOrder + 1);

    bool canonical = (j2 > 0) || (j2 == 0 && j1 > 0);
    m.c1 = canonical ? j1 : -j1;
    m.c2 = canonical ? j2 : -j2;

    // cos<j,x> has amplitude 1/2 at both +-j; sin<j,x> has -i/2 at +j and
    // +i/2 at -j.  The stored amplitude is the one at the canonical mode.
    Complex scalar;
    if (m.cos_type)
        scalar = Complex(0.5, 0.0);
    else
        scalar = canonical ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
    m.vamp1 = scalar * m.jperp1;
    m.vamp2 = scalar * m.jperp2;

    // curl E_j = -|j|^2 sin<j,x> (cos type), +|j|^2 cos<j,x> (sin type)
    if (m.cos_type)
        m.wamp = canonical ? Complex(0.0, 0.5 * m.j_sq) : Complex(0.0, -0.5 * m.j_sq);
    else
        m.wamp = Complex(0.5 * m.j_sq, 0.0);
    return m;
}

}  // namespace

const std::array<ForcedMode, 8>& ForcingBasis::modes() {
    static const std::array<ForcedMode, 8> table = {
        make_mode(1, 0),  make_mode(-1, 0), make_mode(0, 1),  make_mode(0, -1),
        make_mode(1, 1),  make_mode(-1, -1), make_mode(-1, 1), make_mode(1, -1)};
    return table;
}

int ForcingBasis::index_of(int j1, int j2) {
    const auto& t = modes();
    for (int i = 0; i < size(); ++i)
        if (t[i].j1 == j1 && t[i].j2 == j2) return i;
    throw OutOfDomain("index not in the forced set");
}

void ForcingBasis::add_normalized(VelocityField& f, int i, double coeff) {
    const ForcedMode& m = mode(i);
    double s = coeff / m.norm_v5;
    f.add_mode_pair(m.c1, m.c2, s * m.vamp1, s * m.vamp2);
}

void ForcingBasis::add_raw(VelocityField& f, int i, double coeff) {
    const ForcedMode& m = mode(i);
    f.add_mode_pair(m.c1, m.c2, coeff * m.vamp1, coeff * m.vamp2);
}

void ForcingBasis::eval_normalized(const double coeffs[8], double x1, double x2,
                                   double out[2]) {
    out[0] = out[1] = 0.0;
    for (int i = 0; i < size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        const ForcedMode& m = mode(i);
        double v[2];
        m.eval(x1, x2, v);
        out[0] += coeffs[i] / m.norm_v5 * v[0];
        out[1] += coeffs[i] / m.norm_v5 * v[1];
    }
}

}  // namespace lcl
