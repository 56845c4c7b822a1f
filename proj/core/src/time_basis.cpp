#include "lcl/time_basis.hpp"

#include <cmath>
#include <numbers>

#include "lcl/errors.hpp"

namespace lcl {

namespace {

// l-1 = 2^p + q decomposition for the Haar enumeration (l >= 2).
void haar_index(int l, int& p, int& q) {
    int m = l - 1;
    p = 0;
    while ((2 << p) <= m) ++p;
    q = m - (1 << p);
}

// integral_a^b e^{mu (s - b)} ds, stable for small mu.
double exp_box(double mu, double a, double b) {
    if (b <= a) return 0.0;
    if (mu == 0.0) return b - a;
    return -std::expm1(-mu * (b - a)) / mu;
}

// integral_a^b e^{mu (s - c)} ds with arbitrary reference point c.
double exp_box_ref(double mu, double a, double b, double c) {
    if (b <= a) return 0.0;
    if (mu == 0.0) return b - a;
    // e^{mu(b-c)} * (1 - e^{-mu(b-a)}) / mu
    return std::exp(mu * (b - c)) * (-std::expm1(-mu * (b - a))) / mu;
}

}  // namespace

double TimeBasis::eval(int l, double t) const {
    if (l < 1) throw OutOfDomain("time basis index must be >= 1");
    if (l == 1) return 1.0;
    if (kind == TimeBasisKind::FourierCosine) {
        double w = 2.0 * std::numbers::pi * (l - 1);
        return std::sqrt(2.0) * std::cos(w * t);
    }
    int p, q;
    haar_index(l, p, q);
    double y = std::ldexp(t, p) - q;  // 2^p t - q
    if (y < 0.0 || y >= 1.0) return 0.0;
    double amp = std::pow(2.0, 0.5 * p);
    return y < 0.5 ? amp : -amp;
}

double TimeBasis::duhamel(int l, double mu, double a, double b) const {
    if (l < 1) throw OutOfDomain("time basis index must be >= 1");
    if (b <= a) return 0.0;
    if (l == 1) return exp_box(mu, a, b);

    if (kind == TimeBasisKind::FourierCosine) {
        double w = 2.0 * std::numbers::pi * (l - 1);
        // integral e^{mu(s-b)} cos(w s) ds
        //   = [e^{mu(s-b)} (mu cos(w s) + w sin(w s))]_a^b / (mu^2 + w^2)
        double den = mu * mu + w * w;
        double at_b = mu * std::cos(w * b) + w * std::sin(w * b);
        double at_a = std::exp(-mu * (b - a)) * (mu * std::cos(w * a) + w * std::sin(w * a));
        return std::sqrt(2.0) * (at_b - at_a) / den;
    }

    int p, q;
    haar_index(l, p, q);
    double lo = std::ldexp(double(q), -p);
    double hi = std::ldexp(double(q + 1), -p);
    double mid = 0.5 * (lo + hi);
    double amp = std::pow(2.0, 0.5 * p);
    double plus = exp_box_ref(mu, std::max(a, lo), std::min(b, mid), b);
    double minus = exp_box_ref(mu, std::max(a, mid), std::min(b, hi), b);
    return amp * (plus - minus);
}

double TimeBasis::exp_weight_integral(int l, double nu) const {
    return std::exp(nu) * duhamel(l, nu, 0.0, 1.0);
}

}  // namespace lcl
