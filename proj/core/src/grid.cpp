#include "lcl/grid.hpp"

#include <numbers>

namespace lcl {

double wrap_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double y = std::fmod(x, two_pi);
    if (y < 0) y += two_pi;
    return y;
}

double wrap_diff(double a, double b) {
    constexpr double pi = std::numbers::pi;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(a - b, two_pi);
    if (d > pi) d -= two_pi;
    if (d <= -pi) d += two_pi;
    return d;
}

double torus_distance(const double a[2], const double b[2]) {
    double d1 = wrap_diff(a[0], b[0]);
    double d2 = wrap_diff(a[1], b[1]);
    return std::sqrt(d1 * d1 + d2 * d2);
}

}  // namespace lcl
