#pragma once

#include <string>

namespace lcl {

// Orthonormal bases of L^2([0,1]) with psi_1 == 1.
//
//  fourier-cosine:  psi_l(t) = sqrt(2) cos(2 pi (l-1) t), l >= 2
//  haar:            psi_l = 2^{p/2} h(2^p t - q), l-1 = 2^p + q, 0 <= q < 2^p,
//                   h = +1 on [0,1/2), -1 on [1/2,1)
//
// Besides pointwise evaluation, the basis exposes closed-form
// exponentially-weighted integrals; the time stepper uses them to apply the
// forcing segment exactly through its Duhamel term.
enum class TimeBasisKind { FourierCosine, Haar };

struct TimeBasis {
    TimeBasisKind kind = TimeBasisKind::FourierCosine;

    double eval(int l, double t) const;

    // integral_a^b e^{mu (s - b)} psi_l(s) ds  for 0 <= a <= b <= 1, mu >= 0.
    double duhamel(int l, double mu, double a, double b) const;

    // integral_0^1 e^{nu s} psi_l(s) ds
    double exp_weight_integral(int l, double nu) const;

    std::string name() const {
        return kind == TimeBasisKind::FourierCosine ? "fourier-cosine" : "haar";
    }
};

}  // namespace lcl
