#include "lcl/saturation.hpp"

#include <cmath>
#include <complex>

#include "lcl/errors.hpp"

namespace lcl {

namespace {

// Coordinates: for each canonical lattice mode k (|k_i| <= R), the complex
// amplitude alpha with u_k = alpha * kperp/|k| contributes (Re, Im).
struct ModeTable {
    int R;
    std::vector<std::pair<int, int>> modes;  // canonical list
    std::vector<int> lookup;                 // (k1+R)*(R+1)+k2 -> index or -1

    explicit ModeTable(int R_) : R(R_) {
        lookup.assign(std::size_t(2 * R + 1) * (2 * R + 1), -1);
        for (int k1 = 1; k1 <= R; ++k1) add(k1, 0);
        for (int k2 = 1; k2 <= R; ++k2)
            for (int k1 = -R; k1 <= R; ++k1) add(k1, k2);
    }
    void add(int k1, int k2) {
        lookup[key(k1, k2)] = int(modes.size());
        modes.push_back({k1, k2});
    }
    int key(int k1, int k2) const { return (k1 + R) * (2 * R + 1) + (k2 + R); }
    int find(int k1, int k2) const {
        if (std::abs(k1) > R || std::abs(k2) > R) return -1;
        return lookup[key(k1, k2)];
    }
    int dim() const { return 2 * int(modes.size()); }
};

using Coords = std::vector<double>;

std::complex<double> amp_at(const ModeTable& mt, const Coords& c, int k1, int k2,
                            bool conj) {
    int i = mt.find(k1, k2);
    if (i < 0) return {0.0, 0.0};
    std::complex<double> a(c[2 * i], c[2 * i + 1]);
    return conj ? std::conj(a) : a;
}

// Q(zeta) xi = Pi(<zeta,grad>xi + <xi,grad>zeta) via the exact convolution.
Coords symbolic_Q(const ModeTable& mt, const Coords& za, const Coords& xb) {
    Coords out(mt.dim(), 0.0);
    auto polarization = [](int k1, int k2, double p[2]) {
        double n = std::sqrt(double(k1) * k1 + double(k2) * k2);
        p[0] = -k2 / n;
        p[1] = k1 / n;
    };

    // iterate p over +-canonical modes of zeta, q over +-canonical of xi
    for (std::size_t ip = 0; ip < mt.modes.size(); ++ip) {
        auto [p1c, p2c] = mt.modes[ip];
        std::complex<double> ap_c(za[2 * ip], za[2 * ip + 1]);
        if (ap_c == 0.0) continue;
        double pp[2];
        polarization(p1c, p2c, pp);
        for (int sp = 0; sp < 2; ++sp) {
            int p1 = sp ? -p1c : p1c, p2 = sp ? -p2c : p2c;
            std::complex<double> ap = sp ? std::conj(ap_c) : ap_c;
            for (std::size_t iq = 0; iq < mt.modes.size(); ++iq) {
                auto [q1c, q2c] = mt.modes[iq];
                std::complex<double> bq_c(xb[2 * iq], xb[2 * iq + 1]);
                if (bq_c == 0.0) continue;
                double pq[2];
                polarization(q1c, q2c, pq);
                for (int sq = 0; sq < 2; ++sq) {
                    int q1 = sq ? -q1c : q1c, q2 = sq ? -q2c : q2c;
                    std::complex<double> bq = sq ? std::conj(bq_c) : bq_c;
                    int k1 = p1 + q1, k2 = p2 + q2;
                    if (k1 == 0 && k2 == 0) continue;
                    // only canonical targets are accumulated; the mirrored
                    // (p,q) pair supplies the conjugate at -k
                    if ((k2 < 0) || (k2 == 0 && k1 < 0)) continue;
                    int tgt = mt.find(k1, k2);
                    if (tgt < 0) continue;
                    // <zeta_p, q> xi_q + <xi_q-part...>: both orderings of the
                    // symmetric sum appear because (p,q) runs over both fields
                    std::complex<double> zeta_dot_q =
                        ap * (pp[0] * q1 + pp[1] * q2);
                    std::complex<double> xi_dot_p =
                        bq * (pq[0] * p1 + pq[1] * p2);
                    // term = i (zeta_p . q) xi_q + i (xi_q . p) zeta_p
                    std::complex<double> v1 =
                        std::complex<double>(0, 1) *
                        (zeta_dot_q * bq * pq[0] + xi_dot_p * ap * pp[0]);
                    std::complex<double> v2 =
                        std::complex<double>(0, 1) *
                        (zeta_dot_q * bq * pq[1] + xi_dot_p * ap * pp[1]);
                    // Leray projection at k, then the alpha coordinate
                    double kk = double(k1) * k1 + double(k2) * k2;
                    std::complex<double> kdot =
                        (double(k1) * v1 + double(k2) * v2) / kk;
                    std::complex<double> w1 = v1 - double(k1) * kdot;
                    std::complex<double> w2 = v2 - double(k2) * kdot;
                    double kn = std::sqrt(kk);
                    std::complex<double> alpha =
                        (w1 * (-double(k2)) + w2 * double(k1)) / kn;
                    out[2 * tgt] += alpha.real();
                    out[2 * tgt + 1] += alpha.imag();
                }
            }
        }
    }
    return out;
}

double norm2(const Coords& c) {
    double s = 0;
    for (double v : c) s += v * v;
    return std::sqrt(s);
}

// Gram-Schmidt acceptance against the current basis; returns true (and
// appends) when the candidate carries new direction above tolerance.
bool gs_insert(std::vector<Coords>& basis, Coords cand, double tol) {
    double n0 = norm2(cand);
    if (n0 < 1e-14) return false;
    for (const Coords& b : basis) {
        double d = 0;
        for (std::size_t i = 0; i < cand.size(); ++i) d += cand[i] * b[i];
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] -= d * b[i];
    }
    double n1 = norm2(cand);
    if (n1 <= tol * std::max(1.0, n0)) return false;
    // second orthogonalization pass for numerical hygiene
    for (const Coords& b : basis) {
        double d = 0;
        for (std::size_t i = 0; i < cand.size(); ++i) d += cand[i] * b[i];
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] -= d * b[i];
    }
    n1 = norm2(cand);
    for (double& v : cand) v /= n1;
    basis.push_back(std::move(cand));
    return true;
}

}  // namespace

SaturationLadder saturation_ladder(int R, int depth, double tol) {
    if (R < 1) throw ConfigError("saturation cutoff R must be >= 1");
    SaturationLadder lad;
    lad.R = R;
    lad.depth = depth;
    ModeTable mt(R);
    lad.full_dim = mt.dim();

    // the eight forced directions in coordinates
    std::vector<Coords> forced;
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        const ForcedMode& m = ForcingBasis::mode(j);
        Coords c(mt.dim(), 0.0);
        int idx = mt.find(m.c1, m.c2);
        double kn = std::sqrt(m.j_sq);
        std::complex<double> alpha =
            (m.vamp1 * (-double(m.c2)) + m.vamp2 * double(m.c1)) / kn;
        alpha /= m.norm_v5;
        c[2 * idx] = alpha.real();
        c[2 * idx + 1] = alpha.imag();
        forced.push_back(c);
    }

    std::vector<Coords> basis;
    std::size_t fresh_begin = 0;
    for (const Coords& f : forced) gs_insert(basis, f, tol);
    lad.dims.push_back(int(basis.size()));
    if (int(basis.size()) == lad.full_dim) lad.covered_at_level = 0;

    for (int level = 1; level <= depth && lad.covered_at_level < 0; ++level) {
        std::size_t fresh_end = basis.size();
        for (std::size_t bi = fresh_begin; bi < fresh_end; ++bi)
            for (const Coords& e : forced)
                gs_insert(basis, symbolic_Q(mt, basis[bi], e), tol);
        fresh_begin = fresh_end;
        lad.dims.push_back(int(basis.size()));
        if (int(basis.size()) == lad.full_dim) {
            lad.covered_at_level = level;
            break;
        }
        if (basis.size() == fresh_end) break;  // stalled
    }
    return lad;
}

}  // namespace lcl
