#include "lcl/mixing.hpp"

#include <cmath>

#include "lcl/thread_pool.hpp"

namespace lcl {

SnapshotRow snapshot_row(const VelocityField& u, const Vec2& y) {
    SnapshotRow row{};
    int idx = 0;
    for_each_canonical(2, [&](int k1, int k2) {
        auto c = u.coeff(k1, k2);
        double kn = std::sqrt(double(k1) * k1 + double(k2) * k2);
        Complex alpha = (c[0] * (-double(k2)) + c[1] * double(k1)) / kn;
        row[idx++] = alpha.real();
        row[idx++] = alpha.imag();
    });
    row[idx++] = wrap_angle(y[0]);
    row[idx++] = wrap_angle(y[1]);
    return row;
}

ObservableFamily ObservableFamily::default_family() {
    ObservableFamily fam;
    int idx = 0;
    for_each_canonical(2, [&](int k1, int k2) {
        fam.names_.push_back("tanh_re_u_" + std::to_string(k1) + "_" +
                             std::to_string(k2));
        fam.names_.push_back("tanh_im_u_" + std::to_string(k1) + "_" +
                             std::to_string(k2));
        idx += 2;
    });
    fam.names_.push_back("cos_y1");
    fam.names_.push_back("sin_y1");
    fam.names_.push_back("cos_y2");
    fam.names_.push_back("sin_y2");
    return fam;
}

double ObservableFamily::eval(std::size_t i, const SnapshotRow& row) const {
    constexpr std::size_t n_coords = 2 * kSnapshotLowModes;
    if (i < n_coords) return std::tanh(row[i]);
    std::size_t t = i - n_coords;
    switch (t) {
        case 0: return std::cos(row[n_coords]);
        case 1: return std::sin(row[n_coords]);
        case 2: return std::cos(row[n_coords + 1]);
        default: return std::sin(row[n_coords + 1]);
    }
}

std::vector<EnsembleSnapshot> evolve_ensemble(const std::vector<EnsembleInit>& inits,
                                              const NoiseParams& params,
                                              std::uint64_t master_seed, int n_max,
                                              int stride, double dt) {
    if (inits.empty()) throw SizeMismatch("ensemble needs at least one sample");
    if (stride < 1) throw ConfigError("snapshot stride must be >= 1");
    const GridSpec& grid = inits[0].u.grid();
    int n_snaps = n_max / stride + 1;
    std::vector<EnsembleSnapshot> snaps(n_snaps);
    for (int s = 0; s < n_snaps; ++s) {
        snaps[s].n = s * stride;
        snaps[s].rows.resize(inits.size());
    }

    for (const auto& init : inits)
        if (init.u.grid() != grid)
            throw GridMismatch("ensemble samples must share one grid");

    // Each sample owns its stepper and noise stream and writes only its own
    // snapshot slots, so the pool schedule cannot change the result.
    global_pool().parallel_for(inits.size(), [&](std::size_t i) {
        PdeStepper stepper(grid);
        DensePath path;
        RngStream rng(derive_stream_seed(master_seed, "ensemble", i));
        VelocityField u = inits[i].u;
        Vec2 y = inits[i].y;
        snaps[0].rows[i] = snapshot_row(u, y);
        for (int n = 1; n <= n_max; ++n) {
            NoiseRealization zeta = sample_segment(params, rng);
            u = evolve_unit_with(stepper, u, zeta, dt, &path);
            y = advance_particle(path, y, 0.0, 1.0, dt, nullptr);
            if (n % stride == 0) snaps[n / stride].rows[i] = snapshot_row(u, y);
        }
    });
    return snaps;
}

double dl_distance(const EnsembleSnapshot& a, const EnsembleSnapshot& b,
                   const ObservableFamily& fam) {
    if (a.rows.size() != b.rows.size())
        throw SizeMismatch("dl_distance requires equal sample counts");
    double worst = 0.0;
    for (std::size_t f = 0; f < fam.size(); ++f) {
        double ma = 0.0, mb = 0.0;
        for (const auto& r : a.rows) ma += fam.eval(f, r);
        for (const auto& r : b.rows) mb += fam.eval(f, r);
        worst = std::max(worst, std::abs(ma - mb) / double(a.rows.size()));
    }
    return worst;
}

AutocorrResult autocorrelation(const std::vector<double>& series, int max_lag) {
    AutocorrResult out;
    int n = int(series.size());
    if (n < 2 || max_lag < 0) throw SizeMismatch("autocorrelation needs data");
    if (max_lag >= n) max_lag = n - 1;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    out.degenerate = var < 1e-24;
    for (int lag = 0; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (int t = 0; t + lag < n; ++t)
            acc += (series[t] - mean) * (series[t + lag] - mean);
        out.lags.push_back(lag);
        out.rho.push_back(out.degenerate ? 1.0 : acc / var);
    }
    return out;
}

}  // namespace lcl
