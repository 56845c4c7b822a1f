#include "lcl/dense_path.hpp"

#include <algorithm>
#include <cmath>

namespace lcl {

DensePath::DensePath(const GridSpec& grid, double t0, double h, int n_steps)
    : grid_(grid), t0_(t0), h_(h), n_(n_steps) {
    snaps_.resize(n_ + 1);
    for (auto& s : snaps_) s.resize(grid_.cutoff());
}

void DensePath::set_kinks(std::vector<double> kinks) {
    std::sort(kinks.begin(), kinks.end());
    kinks_ = std::move(kinks);
}

void DensePath::check_time(double t) const {
    if (t < t0_ - 1e-12 || t > t1() + 1e-12)
        throw OutOfDomain("time outside the stored velocity path");
}

void lagrange4_weights(double tau, double w[4]) {
    for (int m = 0; m < 4; ++m) {
        double p = 1.0;
        for (int r = 0; r < 4; ++r) {
            if (r == m) continue;
            p *= (tau - r) / double(m - r);
        }
        w[m] = p;
    }
}

void DensePath::spectrum_at(double t, SpectrumBlock& out) const {
    check_time(t);
    double s = (t - t0_) / h_;
    int i = int(std::floor(s));
    if (i < 0) i = 0;
    if (i > n_ - 1) i = n_ - 1;
    double frac = s - i;
    if (std::abs(frac) < 1e-12) {
        out = snaps_[i];
        return;
    }
    if (std::abs(frac - 1.0) < 1e-12) {
        out = snaps_[i + 1];
        return;
    }
    int base = i - 1;
    if (base < 0) base = 0;
    if (base > n_ - 3) base = n_ - 3;
    if (n_ < 3) base = 0;  // degenerate short paths fall back to low order

    // keep the stencil inside the smooth piece containing t
    if (!kinks_.empty() && n_ >= 3) {
        double lo_node = 0.0, hi_node = double(n_);
        for (double k : kinks_) {
            double node = (k - t0_) / h_;
            if (node <= s + 1e-12 && node > lo_node) lo_node = node;
            if (node >= s - 1e-12 && node < hi_node) hi_node = node;
        }
        int lo = int(std::ceil(lo_node - 1e-9));
        int hi = int(std::floor(hi_node + 1e-9));
        if (hi - lo >= 3) {
            if (base < lo) base = lo;
            if (base + 3 > hi) base = hi - 3;
        }
    }
    double tau = s - base;
    double w[4];
    lagrange4_weights(tau, w);
    if (n_ >= 3) {
        const SpectrumBlock* src[4] = {&snaps_[base], &snaps_[base + 1],
                                       &snaps_[base + 2], &snaps_[base + 3]};
        blend_blocks(out, src, w);
        return;
    }
    // fewer than 4 snapshots: linear blend
    double wl[4] = {1.0 - frac, frac, 0.0, 0.0};
    const SpectrumBlock* src[4] = {&snaps_[i], &snaps_[i + 1], &snaps_[i],
                                   &snaps_[i]};
    blend_blocks(out, src, wl);
}

void DensePath::eval(double t, double x1, double x2, int order,
                     PointEval& out) const {
    thread_local SpectrumBlock scratch;
    check_time(t);
    double s = (t - t0_) / h_;
    double r = std::round(s);
    if (std::abs(s - r) < 1e-12 && r >= 0 && r <= n_) {
        eval_block(snaps_[int(r)], x1, x2, order, out);
        return;
    }
    spectrum_at(t, scratch);
    eval_block(scratch, x1, x2, order, out);
}

VelocityField DensePath::field_at(double t) const {
    thread_local SpectrumBlock scratch;
    spectrum_at(t, scratch);
    return block_to_field(grid_, scratch);
}

}  // namespace lcl
