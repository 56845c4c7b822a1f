#include "lcl/transvection.hpp"

#include <cmath>

namespace lcl {

namespace {

void push_nonzero(std::vector<Transvection>& out, Transvection::Kind kind,
                  double param) {
    if (param != 0.0) out.push_back({kind, param});
}

// A with c as pivot: A = T12(-t1) T21(c) T12(b'), t1 = (1-a)/c.
void factorize_pivot_c(const Mat2& A, std::vector<Transvection>& out) {
    double a = A[0], b = A[1], c = A[2], d = A[3];
    double t1 = (1.0 - a) / c;
    double bp = b + t1 * d;
    push_nonzero(out, Transvection::T12, -t1);
    push_nonzero(out, Transvection::T21, c);
    push_nonzero(out, Transvection::T12, bp);
}

// Transposed elimination with b as pivot: A = T21(-s1) T12(b) T21(c'),
// s1 = (1-d)/b.
void factorize_pivot_b(const Mat2& A, std::vector<Transvection>& out) {
    double a = A[0], b = A[1], c = A[2], d = A[3];
    double s1 = (1.0 - d) / b;
    double cp = c + s1 * a;
    push_nonzero(out, Transvection::T21, -s1);
    push_nonzero(out, Transvection::T12, b);
    push_nonzero(out, Transvection::T21, cp);
}

}  // namespace

std::vector<Transvection> transvection_factorize(const Mat2& A, double tol) {
    if (std::abs(mat2_det(A) - 1.0) >= tol)
        throw NotSL2("transvection_factorize requires det A = 1");

    std::vector<Transvection> out;
    double a = A[0], b = A[1], c = A[2], d = A[3];

    // roundoff-level perturbations of the identity factor into nothing
    const double id_tol = 1e-12;
    if (std::abs(a - 1.0) <= id_tol && std::abs(d - 1.0) <= id_tol &&
        std::abs(b) <= id_tol && std::abs(c) <= id_tol)
        return out;

    // pure shears reproduce themselves
    if (a == 1.0 && d == 1.0 && c == 0.0) {
        push_nonzero(out, Transvection::T12, b);
        return out;
    }
    if (a == 1.0 && d == 1.0 && b == 0.0) {
        push_nonzero(out, Transvection::T21, c);
        return out;
    }

    // Take the larger off-diagonal entry as the elimination pivot when it is
    // well separated from zero; the resulting parameters stay O(|A| / pivot).
    const double pivot_floor = 0.5;
    if (std::abs(c) >= pivot_floor && std::abs(c) >= std::abs(b)) {
        factorize_pivot_c(A, out);
        return out;
    }
    if (std::abs(b) >= pivot_floor) {
        factorize_pivot_b(A, out);
        return out;
    }

    // Near-diagonal case: det A = 1 with |b|,|c| < 1/2 forces
    // max(|a|,|d|) >= sqrt(3)/2, so one preparatory unit shear creates an
    // off-diagonal pivot bounded away from zero (4 factors total).
    if (std::abs(a) >= std::abs(d)) {
        double s = ((c >= 0.0) == (a >= 0.0)) ? 1.0 : -1.0;
        Mat2 B = mat2_mul(Transvection{Transvection::T21, s}.matrix(), A);
        push_nonzero(out, Transvection::T21, -s);
        factorize_pivot_c(B, out);
    } else {
        double s = ((b >= 0.0) == (d >= 0.0)) ? 1.0 : -1.0;
        Mat2 B = mat2_mul(Transvection{Transvection::T12, s}.matrix(), A);
        push_nonzero(out, Transvection::T12, -s);
        factorize_pivot_b(B, out);
    }
    return out;
}

Mat2 transvection_product(const std::vector<Transvection>& factors) {
    Mat2 p = mat2_identity();
    for (const auto& f : factors) p = mat2_mul(p, f.matrix());
    return p;
}

}  // namespace lcl
