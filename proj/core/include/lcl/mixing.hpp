#pragma once

#include <array>
#include <string>
#include <vector>

#include "lcl/lagrangian.hpp"

namespace lcl {

// Per-sample state summary: the divergence-free amplitudes of the modes
// |k_i| <= 2 (12 canonical pairs, Re/Im) followed by the particle position.
inline constexpr int kSnapshotLowModes = 12;
inline constexpr int kSnapshotWidth = 2 * kSnapshotLowModes + 2;

using SnapshotRow = std::array<double, kSnapshotWidth>;

struct EnsembleSnapshot {
    int n = 0;
    std::vector<SnapshotRow> rows;
};

SnapshotRow snapshot_row(const VelocityField& u, const Vec2& y);

// Finite family of bounded 1-Lipschitz observables: tanh of each low-mode
// coordinate plus cos/sin of each particle coordinate.  A lower bound for
// the dual-Lipschitz metric is the max mean difference over the family.
class ObservableFamily {
  public:
    static ObservableFamily default_family();

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    double eval(std::size_t i, const SnapshotRow& row) const;

  private:
    std::vector<std::string> names_;
};

struct EnsembleInit {
    VelocityField u;
    Vec2 y{0.0, 0.0};
};

// Evolves each sample under an independent noise stream (seed derived from
// master_seed and the sample index), recording a snapshot every `stride`
// unit steps (n = 0 included).
std::vector<EnsembleSnapshot> evolve_ensemble(const std::vector<EnsembleInit>& inits,
                                              const NoiseParams& params,
                                              std::uint64_t master_seed, int n_max,
                                              int stride, double dt);

// Finite-family lower bound on the dual-Lipschitz distance between the
// empirical laws of two snapshots.
double dl_distance(const EnsembleSnapshot& a, const EnsembleSnapshot& b,
                   const ObservableFamily& fam);

struct AutocorrResult {
    std::vector<int> lags;
    std::vector<double> rho;
    bool degenerate = false;  // constant series; rho = 1 by convention
};

AutocorrResult autocorrelation(const std::vector<double>& series, int max_lag);

}  // namespace lcl
