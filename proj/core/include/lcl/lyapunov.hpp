#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "lcl/lagrangian.hpp"

namespace lcl {

// One unit step of a matrix cocycle: given the carried orthonormal frame Q,
// returns A_1 = G Q where G is this step's cocycle increment.  Abstracting
// the source lets closed-form synthetic cocycles drive the estimator in
// tests, independent of the PDE path.
class CocycleSource {
  public:
    virtual ~CocycleSource() = default;
    virtual Mat2 step(const Mat2& Q) = 0;

    // log |G v| for the projective estimator; v is updated to G v / |G v|.
    virtual double step_projective(Vec2& v) = 0;
};

// Cocycle increments from the Navier-Stokes Lagrangian triple under i.i.d.
// noise segments drawn from `params`.
class NavierStokesSource : public CocycleSource {
  public:
    NavierStokesSource(const GridSpec& grid, const NoiseParams& params,
                       std::uint64_t stream_seed, const TripleState& initial,
                       const StepTripleOptions& opts);
    ~NavierStokesSource() override;

    Mat2 step(const Mat2& Q) override;
    double step_projective(Vec2& v) override;

    const Vec2& particle() const { return y_; }
    double velocity_norm(int m) const;
    double det_drift() const { return det_drift_; }  // worst |det G - 1| seen

  private:
    void advance_velocity();

    GridSpec grid_;
    NoiseParams params_;
    StepTripleOptions opts_;
    RngStream rng_;
    std::unique_ptr<PdeStepper> stepper_;
    DensePath path_;
    VelocityField u_;
    Vec2 y_;
    double det_drift_ = 0.0;
};

// Synthetic cocycle defined by a callback returning the increment G_n.
class SyntheticSource : public CocycleSource {
  public:
    explicit SyntheticSource(std::function<Mat2(int)> gen) : gen_(std::move(gen)) {}
    Mat2 step(const Mat2& Q) override;
    double step_projective(Vec2& v) override;

  private:
    std::function<Mat2(int)> gen_;
    int n_ = 0, np_ = 0;
};

struct LyapunovOptions {
    int n = 20000;
    int block = 200;
    int burn_in = -1;  // negative: max(100, n/100)
    int bootstrap_resamples = 1000;
    std::uint64_t seed = 1;  // recorded; streams must be derived from it
    // called after every accumulated step (step index, log r11, log r22)
    std::function<void(int, double, double)> observer;
};

struct LyapunovEstimate {
    int n_steps = 0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double lambda_sum = 0.0;
    std::vector<double> block_estimates;
    double ci_lo = 0.0, ci_hi = 0.0;
    int block = 0;
    int burn_in = 0;
    std::uint64_t seed = 0;
    std::string config_fingerprint;
};

// QR (Benettin) accumulation of the top/bottom exponents with a stationary
// bootstrap over block means for the 95% interval.
LyapunovEstimate estimate(CocycleSource& source, const LyapunovOptions& opts);

// Projective-process estimate of lambda_+ alone.
double estimate_projective(CocycleSource& source, const Vec2& v0, int n,
                           int burn_in = -1);

// 2x2 QR with positive R11; returns Q in qout and {log R11, log |R22|}.
void qr_step(const Mat2& A, Mat2& qout, double& log_r11, double& log_r22);

}  // namespace lcl
