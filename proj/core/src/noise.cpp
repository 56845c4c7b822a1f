#include "lcl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lcl/errors.hpp"

namespace lcl {

double DensitySpec::pdf(double x) const {
    double ax = std::abs(x);
    return ax >= 1.0 ? 0.0 : 1.0 - ax;
}

double DensitySpec::sample(RngStream& rng) const {
    double u = rng.u01();
    if (u < 0.5) return std::sqrt(2.0 * u) - 1.0;
    return 1.0 - std::sqrt(2.0 * (1.0 - u));
}

double DecayRule::coeff(int l) const {
    if (l < 1) throw OutOfDomain("decay rule index must be >= 1");
    if (kind == Kind::Geometric) return std::pow(A, -double(l));
    return C * std::pow(double(l), -q);
}

DecayRule DecayRule::geometric(double A) {
    if (!(A > 1.0)) throw ConfigError("geometric decay requires A > 1");
    DecayRule r;
    r.kind = Kind::Geometric;
    r.A = A;
    return r;
}

DecayRule DecayRule::polynomial(double C, double q) {
    if (!(C != 0.0) || !(q > 1.0))
        throw ConfigError("polynomial decay requires C != 0 and q > 1");
    DecayRule r;
    r.kind = Kind::Polynomial;
    r.C = C;
    r.q = q;
    return r;
}

std::string DecayRule::describe() const {
    char buf[64];
    if (kind == Kind::Geometric)
        std::snprintf(buf, sizeof(buf), "geometric(%g)", A);
    else
        std::snprintf(buf, sizeof(buf), "polynomial(%g,%g)", C, q);
    return buf;
}

void NoiseParams::validate() const {
    if (L < 1) throw ConfigError("noise.L must be >= 1");
    for (int l = 1; l <= L; ++l)
        if (b(l) == 0.0) throw ConfigError("noise coefficients b_l must be nonzero");
}

NoiseParams NoiseParams::from_preset(const std::string& spec) {
    NoiseParams p;
    p.preset = spec;
    auto open = spec.find('(');
    auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ConfigError("malformed noise preset: " + spec);
    std::string name = spec.substr(0, open);
    std::string args = spec.substr(open + 1, close - open - 1);

    std::string basis_name, rule;
    auto dash = name.find('-');
    if (dash == std::string::npos) throw ConfigError("malformed noise preset: " + spec);
    basis_name = name.substr(0, dash);
    rule = name.substr(dash + 1);

    if (basis_name == "haar")
        p.basis.kind = TimeBasisKind::Haar;
    else if (basis_name == "cosine")
        p.basis.kind = TimeBasisKind::FourierCosine;
    else
        throw ConfigError("unknown time basis in preset: " + spec);

    auto parse_args = [&](int expected) {
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos < args.size()) {
            std::size_t comma = args.find(',', pos);
            std::string tok = args.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
            try {
                out.push_back(std::stod(tok));
            } catch (...) {
                throw ConfigError("bad numeric argument in preset: " + spec);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (int(out.size()) != expected)
            throw ConfigError("wrong number of arguments in preset: " + spec);
        return out;
    };

    if (rule == "geometric") {
        auto a = parse_args(1);
        p.decay = DecayRule::geometric(a[0]);
    } else if (rule == "polynomial") {
        auto a = parse_args(2);
        p.decay = DecayRule::polynomial(a[0], a[1]);
    } else {
        throw ConfigError("unknown decay rule in preset: " + spec);
    }
    p.validate();
    return p;
}

NoiseRealization::NoiseRealization(const NoiseParams& params) : params_(params) {
    params_.validate();
    xi_.assign(std::size_t(ForcingBasis::size()) * params_.L, 0.0);
}

bool NoiseRealization::is_zero() const {
    for (double v : xi_)
        if (v != 0.0) return false;
    return true;
}

void NoiseRealization::eval(double t, double out[8]) const {
    if (t < 0.0 || t > 1.0) throw OutOfDomain("noise segment time outside [0,1]");
    double psi[64];
    int L = params_.L;
    for (int l = 1; l <= L; ++l) psi[l - 1] = params_.basis.eval(l, t);
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        double s = 0.0;
        for (int l = 1; l <= L; ++l) s += params_.b(l) * xi(j, l) * psi[l - 1];
        out[j] = s;
    }
}

double NoiseRealization::duhamel_coeff(int j, double mu, double a, double b) const {
    double s = 0.0;
    for (int l = 1; l <= params_.L; ++l) {
        double x = xi(j, l);
        if (x == 0.0) continue;
        s += params_.b(l) * x * params_.basis.duhamel(l, mu, a, b);
    }
    return s;
}

std::vector<double> NoiseRealization::breakpoints() const {
    std::vector<double> out;
    if (params_.basis.kind != TimeBasisKind::Haar) return out;
    for (int l = 2; l <= params_.L; ++l) {
        bool active = false;
        for (int j = 0; j < ForcingBasis::size() && !active; ++j)
            active = xi(j, l) != 0.0;
        if (!active) continue;
        int m = l - 1, p = 0;
        while ((2 << p) <= m) ++p;
        int q = m - (1 << p);
        double w = std::ldexp(1.0, -p);
        for (double frac : {0.0, 0.5, 1.0}) {
            double t = (q + frac) * w;
            if (t > 0.0 && t < 1.0) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool NoiseRealization::feasible() const { return max_abs_xi() <= 1.0; }

double NoiseRealization::max_abs_xi() const {
    double m = 0.0;
    for (double v : xi_) m = std::max(m, std::abs(v));
    return m;
}

void NoiseRealization::scale(double s) {
    for (double& v : xi_) v *= s;
}

NoiseRealization sample_segment(const NoiseParams& params, RngStream& rng) {
    NoiseRealization r(params);
    for (int j = 0; j < ForcingBasis::size(); ++j)
        for (int l = 1; l <= params.L; ++l) r.set_xi(j, l, params.density.sample(rng));
    return r;
}

FeasibilityBox feasibility_box(const NoiseParams& params) {
    FeasibilityBox box;
    box.n_modes = ForcingBasis::size();
    box.L = params.L;
    box.bound = 1.0;
    return box;
}

HaarSignalCoeffs make_haar_coeffs(int max_level) {
    HaarSignalCoeffs c;
    c.xi_levels.resize(max_level);
    for (int i = 1; i <= max_level; ++i)
        c.xi_levels[i - 1].assign(std::size_t(1) << (i - 1), 0.0);
    return c;
}

std::vector<double> haar_signal_eval(const NoiseParams& params,
                                     const HaarSignalCoeffs& coeffs,
                                     std::span<const double> t_grid) {
    auto c_i = [&](int i) {
        if (params.decay.kind == DecayRule::Kind::Geometric)
            return std::pow(params.decay.A, -double(i));
        return params.decay.C * std::pow(double(i), -params.decay.q);
    };
    int max_level = int(coeffs.xi_levels.size());
    std::vector<double> out(t_grid.size());
    for (std::size_t n = 0; n < t_grid.size(); ++n) {
        double t = t_grid[n];
        if (t < 0.0 || t >= 1.0) throw OutOfDomain("haar_signal expects t in [0,1)");
        double s = coeffs.xi0;  // father function is the constant block
        for (int i = 1; i <= max_level; ++i) {
            double y = std::ldexp(t, i - 1);
            int shift = int(y);
            double frac = y - shift;
            double sign = frac < 0.5 ? 1.0 : -1.0;
            s += c_i(i) * coeffs.xi_levels[i - 1][shift] * sign;
        }
        out[n] = s;
    }
    return out;
}

std::vector<double> haar_signal(const NoiseParams& params, RngStream& rng,
                                std::span<const double> t_grid) {
    int max_level = 1;
    while ((1 << max_level) < params.L) ++max_level;
    HaarSignalCoeffs c = make_haar_coeffs(max_level);
    c.xi0 = params.density.sample(rng);
    for (auto& lv : c.xi_levels)
        for (auto& v : lv) v = params.density.sample(rng);
    return haar_signal_eval(params, c, t_grid);
}

void dump_realization_csv(std::ostream& os, int segment_index,
                          const NoiseRealization& r) {
    char buf[128];
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        const ForcedMode& m = ForcingBasis::mode(j);
        for (int l = 1; l <= r.levels(); ++l) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g\n", segment_index,
                          m.j1, m.j2, l, r.xi(j, l));
            os << buf;
        }
    }
}

}  // namespace lcl
