#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "lcl/forcing_basis.hpp"
#include "lcl/rng.hpp"
#include "lcl/time_basis.hpp"

namespace lcl {

// Coefficient density rho: compactly supported in [-1,1], Lipschitz,
// rho(0) > 0.  The default (and currently only) family is the symmetric
// triangle 1 - |x|.
struct DensitySpec {
    enum class Family { Triangle };
    Family family = Family::Triangle;

    double pdf(double x) const;
    double sample(RngStream& rng) const;  // inverse-transform
    double mean() const { return 0.0; }
    double variance() const { return 1.0 / 6.0; }
    double value_at_zero() const { return 1.0; }
    double lipschitz_constant() const { return 1.0; }
    std::string name() const { return "smoothed-triangle"; }
};

// Named decay rule for the level coefficients b_l.
struct DecayRule {
    enum class Kind { Geometric, Polynomial };
    Kind kind = Kind::Geometric;
    double A = 2.0;  // geometric: b_l = A^{-l}, A > 1
    double C = 1.0;  // polynomial: b_l = C l^{-q}, q > 1
    double q = 2.0;

    double coeff(int l) const;
    static DecayRule geometric(double A);
    static DecayRule polynomial(double C, double q);
    std::string describe() const;
};

// Parameters of one unit-time noise segment
//   eta_k(t,x) = sum_{j in I} sum_{l=1}^{L} b_l xi[j][l] psi_l(t) e_j(x),
// |xi| <= 1 i.i.d. with density rho.
struct NoiseParams {
    TimeBasis basis;
    int L = 16;
    DecayRule decay;
    DensitySpec density;
    std::string preset = "cosine-geometric(2)";

    double b(int l) const { return decay.coeff(l); }
    void validate() const;

    // "haar-geometric(A)", "haar-polynomial(C,q)", "cosine-geometric(A)",
    // "cosine-polynomial(C,q)"
    static NoiseParams from_preset(const std::string& spec);
};

// One sampled (or planned) control segment: the coefficient table xi[j][l].
class NoiseRealization {
  public:
    NoiseRealization() = default;
    explicit NoiseRealization(const NoiseParams& params);

    const NoiseParams& params() const { return params_; }
    int levels() const { return params_.L; }

    double xi(int j, int l) const { return xi_[idx(j, l)]; }        // l >= 1
    void set_xi(int j, int l, double v) { xi_[idx(j, l)] = v; }

    bool is_zero() const;

    // coefficients of e_j at time t, for all 8 forced directions
    void eval(double t, double out[8]) const;

    // integral_a^b e^{mu (s-b)} c_j(s) ds with c_j(t) = sum_l b_l xi psi_l(t)
    double duhamel_coeff(int j, double mu, double a, double b) const;

    // interior times where the segment's time profile is not smooth
    // (Haar breakpoints of the active levels); empty for the cosine basis
    std::vector<double> breakpoints() const;

    // membership in the support box K (|xi| <= 1, closed)
    bool feasible() const;
    double max_abs_xi() const;

    void scale(double s);

  private:
    std::size_t idx(int j, int l) const {
        return std::size_t(j) * params_.L + (l - 1);
    }
    NoiseParams params_;
    std::vector<double> xi_;
};

NoiseRealization sample_segment(const NoiseParams& params, RngStream& rng);

// Feasibility geometry of the support at truncation: the product box
// {|xi[j][l]| <= 1}.
struct FeasibilityBox {
    int n_modes = 8;
    int L = 16;
    double bound = 1.0;
    bool contains(const NoiseRealization& r) const {
        return r.levels() == L && r.max_abs_xi() <= bound;
    }
};

FeasibilityBox feasibility_box(const NoiseParams& params);

// The introductory Haar coloured-noise process on one unit interval:
//   eta~(t) = xi_0 h_0(t) + sum_{i=1}^{I} c_i sum_l xi_{il} h_{il}(t)
// with the L^inf-normalized Haar system and c_i from the decay rule.
struct HaarSignalCoeffs {
    double xi0 = 0.0;
    std::vector<std::vector<double>> xi_levels;  // level i -> 2^{i-1} shifts
};

// Zero-initialized coefficient structure down to max_level (test hook).
HaarSignalCoeffs make_haar_coeffs(int max_level);

std::vector<double> haar_signal_eval(const NoiseParams& params,
                                     const HaarSignalCoeffs& coeffs,
                                     std::span<const double> t_grid);

// Samples the coefficients i.i.d. from the density and evaluates; the level
// count is the smallest dyadic resolution holding params.L functions.
std::vector<double> haar_signal(const NoiseParams& params, RngStream& rng,
                                std::span<const double> t_grid);

// CSV rows (segment_index, j1, j2, l, xi) appended for one segment.
void dump_realization_csv(std::ostream& os, int segment_index,
                          const NoiseRealization& r);

}  // namespace lcl
