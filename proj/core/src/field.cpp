#include "lcl/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lcl {

VelocityField::VelocityField(const GridSpec& grid) : grid_(grid) {
    grid_.validate();
    u1_.assign(grid_.spectral_size(), Complex(0.0, 0.0));
    u2_.assign(grid_.spectral_size(), Complex(0.0, 0.0));
}

std::array<Complex, 2> VelocityField::coeff(int k1, int k2) const {
    if (!grid_.retained(k1, k2)) return {Complex(0, 0), Complex(0, 0)};
    if (k1 == 0 && k2 == 0) return {Complex(0, 0), Complex(0, 0)};
    if (k2 >= 0) {
        std::size_t i = grid_.index(k1, k2);
        return {u1_[i], u2_[i]};
    }
    std::size_t i = grid_.index(-k1, -k2);
    return {std::conj(u1_[i]), std::conj(u2_[i])};
}

void VelocityField::add_mode_pair(int k1, int k2, Complex a1, Complex a2) {
    if (k1 == 0 && k2 == 0) throw OutOfDomain("mean mode is not stored");
    if (!grid_.retained(k1, k2))
        throw OutOfDomain("mode outside the retained square");
    if (k2 < 0 || (k2 == 0 && k1 < 0)) {
        k1 = -k1;
        k2 = -k2;
        a1 = std::conj(a1);
        a2 = std::conj(a2);
    }
    std::size_t i = grid_.index(k1, k2);
    u1_[i] += a1;
    u2_[i] += a2;
    if (k2 == 0) {
        std::size_t j = grid_.index(-k1, 0);
        u1_[j] += std::conj(a1);
        u2_[j] += std::conj(a2);
    }
}

void VelocityField::set_zero() {
    std::fill(u1_.begin(), u1_.end(), Complex(0, 0));
    std::fill(u2_.begin(), u2_.end(), Complex(0, 0));
}

bool VelocityField::is_zero() const {
    auto nz = [](const Complex& c) { return c != Complex(0, 0); };
    return std::none_of(u1_.begin(), u1_.end(), nz) &&
           std::none_of(u2_.begin(), u2_.end(), nz);
}

void VelocityField::axpy(double alpha, const VelocityField& other) {
    require_same_grid(other);
    for (std::size_t i = 0; i < u1_.size(); ++i) {
        u1_[i] += alpha * other.u1_[i];
        u2_[i] += alpha * other.u2_[i];
    }
}

void VelocityField::scale(double alpha) {
    for (auto& c : u1_) c *= alpha;
    for (auto& c : u2_) c *= alpha;
}

double VelocityField::sobolev_norm(int m) const {
    if (m < 0) throw OutOfDomain("sobolev_norm: m must be >= 0");
    double sum = 0.0;
    int K = grid_.cutoff();
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t i = grid_.index(k1, k2);
        double s = std::norm(u1_[i]) + std::norm(u2_[i]);
        if (s == 0.0) return;
        double kk = double(k1) * k1 + double(k2) * k2;
        sum += 2.0 * std::pow(kk, m) * s;
    });
    return 2.0 * std::numbers::pi * std::sqrt(sum);
}

double VelocityField::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : u1_) m = std::max(m, std::abs(c));
    for (const auto& c : u2_) m = std::max(m, std::abs(c));
    return m;
}

double VelocityField::divergence_defect() const {
    double worst = 0.0;
    int K = grid_.cutoff();
    for_each_canonical(K, [&](int k1, int k2) {
        std::size_t i = grid_.index(k1, k2);
        worst = std::max(worst, std::abs(double(k1) * u1_[i] + double(k2) * u2_[i]));
    });
    return worst;
}

double VelocityField::hermitian_defect() const {
    double worst = 0.0;
    int K = grid_.cutoff();
    for (int k1 = 1; k1 <= K; ++k1) {
        std::size_t ip = grid_.index(k1, 0);
        std::size_t im = grid_.index(-k1, 0);
        worst = std::max(worst, std::abs(u1_[im] - std::conj(u1_[ip])));
        worst = std::max(worst, std::abs(u2_[im] - std::conj(u2_[ip])));
    }
    return worst;
}

void VelocityField::require_same_grid(const VelocityField& other) const {
    if (grid_ != other.grid_) throw GridMismatch("velocity fields live on different grids");
}

}  // namespace lcl
