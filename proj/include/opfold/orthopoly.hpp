#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "opfold/banded.hpp"
#include "opfold/errors.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/measures.hpp"
#include "opfold/poly.hpp"
#include "opfold/rational.hpp"

namespace opfold {

/// Monic orthogonal sequence: polys[n] has degree n, norms_sq[n] = B(s_n, s_n).
struct MonicSequence {
    std::vector<Poly> polys;
    std::vector<Rational> norms_sq;

    std::size_t size() const noexcept { return polys.size(); }
    const Poly& operator[](std::size_t n) const { return polys.at(n); }
};

/// An orthonormal quantity stored as its exact square and a sign. A negative
/// square means the value is imaginary (indefinite forms).
struct SignedSquare {
    Rational square;
    int sign = 0;

    double value() const {
        const double s = to_double(square);
        return s < 0 ? std::numeric_limits<double>::quiet_NaN() : sign * std::sqrt(s);
    }
    std::complex<double> complex_value() const {
        return static_cast<double>(sign) * std::sqrt(std::complex<double>(to_double(square), 0.0));
    }
    friend bool operator==(const SignedSquare&, const SignedSquare&) = default;
};

/// Orthonormal s_n / sqrt(norms_sq[n]) with positive leading coefficient.
struct OrthonormalView {
    MonicSequence base;
    std::vector<Rational> scale_sq;

    explicit OrthonormalView(MonicSequence seq) : base(std::move(seq)) {
        scale_sq.reserve(base.size());
        for (const auto& nu : base.norms_sq) scale_sq.push_back(1 / nu);
    }

    /// Squared coefficient of x^k in the n-th orthonormal polynomial, with sign.
    SignedSquare coefficient(std::size_t n, std::size_t k) const {
        const Rational c = base[n].coeff(k);
        return {c * c * scale_sq[n], sign(c)};
    }
};

/// Monic sequence for a form, from the LDL^T factorization of its Gram matrix:
/// the rows of L^{-1} are the coefficient vectors of s_0..s_{n_max}.
inline MonicSequence monic_sequence(const BilinearForm& form, std::size_t n_max,
                                    Definiteness mode = Definiteness::positive) {
    const RationalMatrix G = gram_matrix(form, n_max);
    const LDLT f = ldlt(G, mode);
    const std::size_t n = n_max + 1;
    // Forward substitution for the unit lower triangular inverse.
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            Rational s = 0;
            for (std::size_t k = j; k < i; ++k)
                if (f.L(i, k) != 0 && inv(k, j) != 0) s -= f.L(i, k) * inv(k, j);
            inv(i, j) = s;
        }
    MonicSequence seq;
    seq.polys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> c = inv.row(i);
        c.resize(i + 1);
        seq.polys.emplace_back(std::move(c));
    }
    seq.norms_sq = f.D;
    return seq;
}

/// Coefficients k_m with p = sum_m k_m s_m (back-substitution from the top degree).
inline std::vector<Rational> expand_in_basis(Poly p, const MonicSequence& seq) {
    if (p.degree() >= static_cast<int>(seq.size()))
        throw InsufficientSequence("expansion of degree " + std::to_string(p.degree()) + " needs more polynomials");
    std::vector<Rational> k(static_cast<std::size_t>(std::max(p.degree(), 0)) + 1);
    while (!p.is_zero()) {
        const auto d = static_cast<std::size_t>(p.degree());
        k[d] = p.leading();
        p.add_scaled(seq[d], -k[d]);
    }
    return k;
}

/// Recurrence operator X with row_poly[i] * E = sum_j X(i,j) col_seq[j], kept
/// monic and exposed orthonormally by squares.
struct NormalizedBanded {
    BandedOperator monic;
    std::vector<Rational> row_norms;
    std::vector<Rational> col_norms;

    /// Entry of D_row^{-1/2} X D_col^{1/2}.
    SignedSquare orthonormal(std::size_t i, std::size_t j) const {
        const Rational v = monic.at(i, j);
        return {v * v * col_norms.at(j) / row_norms.at(i), sign(v)};
    }
};

/// Monic three-term recurrence x s_n = s_{n+1} + b_n s_n + lambda_n s_{n-1}.
struct JacobiMatrix {
    NormalizedBanded op;  // (n, n+1) = 1, (n, n) = b_n, (n, n-1) = lambda_n
    std::vector<Rational> b;
    std::vector<Rational> lambda;  // lambda[0] = 0

    std::size_t size() const noexcept { return b.size(); }
};

inline JacobiMatrix jacobi_matrix(const MonicSequence& seq) {
    if (seq.size() < 3) throw InsufficientSequence("jacobi_matrix needs at least 3 polynomials");
    const std::size_t m = seq.size() - 1;
    JacobiMatrix J;
    J.op.monic = BandedOperator(m, 1, 1);
    J.op.row_norms.assign(seq.norms_sq.begin(), seq.norms_sq.begin() + static_cast<std::ptrdiff_t>(m));
    J.op.col_norms = J.op.row_norms;
    for (std::size_t n = 0; n < m; ++n) {
        auto k = expand_in_basis(Poly::x() * seq[n], seq);
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (k[j] != 0) throw BandViolation("x s_" + std::to_string(n) + " is not a three-term combination");
        J.b.push_back(k[n]);
        J.lambda.push_back(n ? k[n - 1] : Rational(0));
        J.op.monic.set(n, n, k[n]);
        if (n) J.op.monic.set(n, n - 1, k[n - 1]);
        if (n + 1 < m) J.op.monic.set(n, n + 1, 1);
    }
    return J;
}

/// H with (x - c)^{N+1} s_n = sum_k H(n,k) s_k, band N+1. Rows whose product
/// exceeds the available sequence are dropped.
inline NormalizedBanded banded_recurrence(const MonicSequence& seq, const Rational& c, unsigned N) {
    if (seq.size() < N + 2) throw InsufficientSequence("banded_recurrence needs more than N+1 polynomials");
    const std::size_t m = seq.size() - N - 1;
    const std::size_t bw = N + 1;
    NormalizedBanded H{BandedOperator(m, bw, bw), {}, {}};
    H.row_norms.assign(seq.norms_sq.begin(), seq.norms_sq.begin() + static_cast<std::ptrdiff_t>(m));
    H.col_norms = H.row_norms;
    const Poly E = shifted_power(c, N + 1);
    for (std::size_t n = 0; n < m; ++n) {
        auto k = expand_in_basis(E * seq[n], seq);
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (j + bw < n && k[j] != 0)
                throw SymmetryViolated("(x-c)^(N+1) s_" + std::to_string(n) + " has a component on s_" +
                                       std::to_string(j) + " below the band");
            if (j < m) H.monic.set(n, j, k[j]);
        }
    }
    return H;
}

/// Same, after confirming that multiplication by (x - c)^{N+1} is symmetric for the form.
inline NormalizedBanded banded_recurrence(const MonicSequence& seq, const BilinearForm& form, const Rational& c,
                                          unsigned N) {
    const std::size_t degree =
        std::min<std::size_t>(seq.size() - 1, static_cast<std::size_t>(std::max(0, (form.max_total_degree() - 2 - static_cast<int>(N)) / 2)));
    auto sym = symmetry_check(form, N, degree, c);
    if (!sym.holds)
        throw SymmetryViolated("multiplication by (x-c)^(N+1) is not symmetric at monomial pair (" +
                               std::to_string(sym.counterexample->first) + "," +
                               std::to_string(sym.counterexample->second) + ")");
    return banded_recurrence(seq, c, N);
}

/// Closed-form squared recurrence coefficients of the Laguerre-Sobolev case
/// (alpha = 0, c = 0, N = 1, mass on f'(0) g'(0)).
struct ReferenceABC {
    Rational a_sq, b_sq, c;
};

inline ReferenceABC reference_abc(long n) {
    auto I = [](long v) { return Integer(v); };
    const Integer n2 = I(n) * n;
    ReferenceABC r;
    r.a_sq = frac((2 * n2 + 7 * n + 9) * (2 * n2 - 5 * n + 6) * (n + 4) * (n + 2) * (n + 1) * (n + 1) * (n + 1),
                  (2 * n2 + 3 * n + 4) * (2 * n2 - n + 3) * (n + 3));
    const Integer nn = n;
    Integer P = 0, Q = 0;
    for (long c : {4, 16, 13, 10, 43, 64, 84, 36}) P = P * nn + c;
    for (long c : {12, 12, -23, 57, 82, -81, 37, 120, 36}) Q = Q * nn + c;
    const Integer d2 = 2 * n2 - n + 3;
    r.b_sq = 16 * frac(P * P * (n + 1), (2 * n2 + 3 * n + 4) * d2 * d2 * (2 * n2 - 5 * n + 6) * (n + 3) * (n + 2) * (n + 2));
    r.c = 2 * frac(abs(Q), d2 * (2 * n2 - 5 * n + 6) * (n + 2) * (n + 1));
    return r;
}

/// Connection matrix: from[n] = sum_j T(n, j) to[j], lower band N+1.
inline NormalizedBanded connection_matrix(const MonicSequence& from, const MonicSequence& to, unsigned N) {
    const std::size_t m = std::min(from.size(), to.size());
    NormalizedBanded T{BandedOperator(m, N + 1, 0), {}, {}};
    T.row_norms.assign(from.norms_sq.begin(), from.norms_sq.begin() + static_cast<std::ptrdiff_t>(m));
    T.col_norms.assign(to.norms_sq.begin(), to.norms_sq.begin() + static_cast<std::ptrdiff_t>(m));
    for (std::size_t n = 0; n < m; ++n) {
        auto k = expand_in_basis(from[n], to);
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (j + N + 1 < n && k[j] != 0)
                throw BandViolation("connection entry (" + std::to_string(n) + "," + std::to_string(j) +
                                    ") below subdiagonal N+1 is nonzero");
            T.monic.set(n, j, k[j]);
        }
    }
    return T;
}

}  // namespace opfold
