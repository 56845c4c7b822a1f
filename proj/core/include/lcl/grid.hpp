#pragma once

#include <cmath>
#include <cstddef>

#include "lcl/errors.hpp"

namespace lcl {

// Parameters of the spectral truncation on the 2pi-periodic torus.
//
// Fields are represented by Fourier amplitudes u_k with u(x) = sum_k u_k
// e^{i<k,x>}.  The stored layout is the real-to-complex half spectrum
// (k1 = -N/2..N/2-1 full, k2 = 0..N/2); the 2/3-rule mask keeps |k_i| <= K
// with K = floor(dealias_fraction * N/2), so every retained product of two
// retained modes is alias-free on the N x N collocation grid.
struct GridSpec {
    int N = 64;                     // collocation points / modes per axis, even
    double nu = 0.05;               // kinematic viscosity
    double dealias_fraction = 2.0 / 3.0;
    int sobolev_index = 5;          // m of the V^m norm used for reporting

    void validate() const {
        if (N < 8 || N % 2 != 0) throw ConfigError("grid.N must be an even integer >= 8");
        if (!(nu > 0)) throw ConfigError("grid.nu must be positive");
        if (!(dealias_fraction > 0) || dealias_fraction > 1.0)
            throw ConfigError("grid.dealias_fraction must lie in (0,1]");
        if (sobolev_index < 0) throw ConfigError("grid.sobolev_index must be >= 0");
    }

    int half() const { return N / 2; }
    // Nyquist modes |k_i| = N/2 carry no Hermitian partner and are always
    // dropped, whatever the dealias fraction.
    int cutoff() const {
        int K = static_cast<int>(std::floor(dealias_fraction * N / 2.0));
        return K < N / 2 ? K : N / 2 - 1;
    }

    // r2c storage: index of mode (k1, k2) with k2 in [0, N/2].
    std::size_t index(int k1, int k2) const {
        int i1 = k1 >= 0 ? k1 : k1 + N;
        return static_cast<std::size_t>(i1) * (half() + 1) + k2;
    }
    std::size_t spectral_size() const {
        return static_cast<std::size_t>(N) * (half() + 1);
    }
    std::size_t physical_size() const {
        return static_cast<std::size_t>(N) * N;
    }

    bool retained(int k1, int k2) const {
        int K = cutoff();
        return std::abs(k1) <= K && std::abs(k2) <= K;
    }

    bool operator==(const GridSpec& o) const {
        return N == o.N && nu == o.nu && dealias_fraction == o.dealias_fraction &&
               sobolev_index == o.sobolev_index;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Wrap a coordinate to [0, 2pi).
double wrap_angle(double x);

// Signed geodesic difference a - b on the circle, in (-pi, pi].
double wrap_diff(double a, double b);

// Distance on T^2 with the wrapped metric.
double torus_distance(const double a[2], const double b[2]);

}  // namespace lcl
