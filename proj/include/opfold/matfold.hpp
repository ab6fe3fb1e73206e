#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opfold/banded.hpp"
#include "opfold/darboux.hpp"
#include "opfold/errors.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/matrix.hpp"
#include "opfold/measures.hpp"
#include "opfold/orthopoly.hpp"
#include "opfold/poly.hpp"

namespace opfold {

/// parts[r] collects the coefficients of x^{(N+1)j + r} as y^j.
inline std::vector<Poly> fold_decompose(const Poly& s, unsigned N) {
    std::vector<std::vector<Rational>> c(N + 1);
    const auto& a = s.coefficients();
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto& part = c[i % (N + 1)];
        const std::size_t j = i / (N + 1);
        if (part.size() <= j) part.resize(j + 1);
        part[j] = a[i];
    }
    std::vector<Poly> parts;
    parts.reserve(N + 1);
    for (auto& v : c) parts.emplace_back(std::move(v));
    return parts;
}

/// s(x) = sum_r x^r parts[r](x^{N+1})
inline Poly reassemble(const std::vector<Poly>& parts, unsigned N) {
    Poly s;
    for (std::size_t r = 0; r < parts.size(); ++r) {
        const auto& a = parts[r].coefficients();
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] != 0) s.set_coeff((N + 1) * j + r, s.coeff((N + 1) * j + r) + a[j]);
    }
    return s;
}

inline Poly unfold_row(const PolyMatrix& F, std::size_t row, unsigned N) {
    std::vector<Poly> parts(F.cols());
    for (std::size_t r = 0; r < F.cols(); ++r) parts[r] = F(row, r);
    return reassemble(parts, N);
}

enum class Normalization {
    scalar_rows,  // row j of R_n is the fold of the monic s_{(N+1)n+j}
    monic         // leading coefficient is the identity
};

struct MatrixPolySequence {
    unsigned N = 0;
    Normalization normalization = Normalization::scalar_rows;
    std::vector<PolyMatrix> mats;

    std::size_t size() const noexcept { return mats.size(); }
    const PolyMatrix& operator[](std::size_t n) const { return mats.at(n); }
};

/// R_n with row j the fold of s_{(N+1)n+j}; count defaults to every complete block.
inline MatrixPolySequence build_matrix_sequence(const MonicSequence& seq, unsigned N,
                                                std::optional<std::size_t> count = std::nullopt) {
    const std::size_t b = N + 1;
    const std::size_t m = count.value_or(seq.size() / b);
    if (m * b > seq.size())
        throw InsufficientSequence("need " + std::to_string(m * b) + " scalar polynomials, have " +
                                   std::to_string(seq.size()));
    MatrixPolySequence R;
    R.N = N;
    R.mats.reserve(m);
    for (std::size_t n = 0; n < m; ++n) {
        PolyMatrix Rn(b, b);
        for (std::size_t j = 0; j < b; ++j) {
            auto parts = fold_decompose(seq[b * n + j], N);
            for (std::size_t r = 0; r < b; ++r) Rn(j, r) = parts[r];
        }
        R.mats.push_back(std::move(Rn));
    }
    return R;
}

/// <F, G> through the scalar form: entry (i,j) is B(unfold row i of F, unfold row j of G).
inline RationalMatrix matrix_gram(const PolyMatrix& F, const PolyMatrix& G, unsigned N, const BilinearForm& form) {
    std::vector<Poly> f(F.rows()), g(G.rows());
    for (std::size_t i = 0; i < F.rows(); ++i) f[i] = unfold_row(F, i, N);
    for (std::size_t j = 0; j < G.rows(); ++j) g[j] = unfold_row(G, j, N);
    RationalMatrix out(F.rows(), G.rows());
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) out(i, j) = form(f[i], g[j]);
    return out;
}

/// y R_n = C_{n,n-1} R_{n-1} + C_{n,n} R_n + C_{n,n+1} R_{n+1}.
struct BlockRecurrence {
    BlockTridiagonal coeffs;                 // block (n,k) = C_{n,k}
    std::vector<std::vector<Rational>> norms;  // diagonal of <R_n, R_n> (scalar_rows only)

    /// Entry (r,c) of D_n^{-1/2} C_{n,k} D_k^{1/2}.
    SignedSquare orthonormal(std::size_t n, std::size_t k, std::size_t r, std::size_t c) const {
        const Rational v = coeffs.block(n, k)(r, c);
        return {v * v * norms.at(k).at(c) / norms.at(n).at(r), sign(v)};
    }
    /// A_n = block (n, n+1), B_n = block (n, n) in the orthonormal normalization.
    SignedSquare A(std::size_t n, std::size_t r, std::size_t c) const { return orthonormal(n, n + 1, r, c); }
    SignedSquare B(std::size_t n, std::size_t r, std::size_t c) const { return orthonormal(n, n, r, c); }
};

/// Block recurrence from matrix Gram blocks: C_{n,k} = <yR_n, R_k> <R_k, R_k>^{-1}.
/// The residual of every recurrence row is checked to vanish exactly.
inline BlockRecurrence matrix_ttrr(const MatrixPolySequence& R, const BilinearForm& form) {
    if (R.size() < 3) throw InsufficientSequence("matrix_ttrr needs at least three matrix polynomials");
    const unsigned N = R.N;
    const std::size_t b = N + 1, m = R.size() - 1;
    BlockRecurrence out{BlockTridiagonal(m, b), {}};
    std::vector<RationalMatrix> inv_gram(R.size());
    for (std::size_t n = 0; n < R.size(); ++n) {
        RationalMatrix G = matrix_gram(R[n], R[n], N, form);
        if (R.normalization == Normalization::scalar_rows) {
            std::vector<Rational> d(b);
            for (std::size_t i = 0; i < b; ++i) d[i] = G(i, i);
            out.norms.push_back(std::move(d));
        }
        inv_gram[n] = inverse(G);
    }
    for (std::size_t n = 0; n < m; ++n) {
        const PolyMatrix yR = multiply_by_monomial(R[n], 1);
        PolyMatrix residual = yR;
        for (std::size_t k = n ? n - 1 : 0; k <= n + 1; ++k) {
            RationalMatrix C = matrix_gram(yR, R[k], N, form) * inv_gram[k];
            residual = residual - C * R[k];
            if (k == n) out.coeffs.diag(n) = C;
            else if (k + 1 == n) out.coeffs.sub(n) = C;
            else if (n + 1 < m) out.coeffs.super(n) = C;
        }
        if (!residual.is_zero())
            throw IdentityViolated("block recurrence residual nonzero at n=" + std::to_string(n));
    }
    return out;
}

/// Leading coefficient (of y^n) of R_n.
inline RationalMatrix leading_coefficient(const PolyMatrix& Rn, std::size_t n) { return coefficient(Rn, n); }

/// P_n = lead(R_n)^{-1} R_n.
inline MatrixPolySequence monic_normalize(const MatrixPolySequence& R) {
    MatrixPolySequence P;
    P.N = R.N;
    P.normalization = Normalization::monic;
    for (std::size_t n = 0; n < R.size(); ++n) {
        if (degree(R[n]) != static_cast<int>(n)) throw SingularLeading(n);
        RationalMatrix inv;
        try {
            inv = inverse(leading_coefficient(R[n], n));
        } catch (const SingularMatrix&) {
            throw SingularLeading(n);
        }
        P.mats.push_back(inv * R[n]);
    }
    return P;
}

/// Monic block Jacobi matrix of a monic sequence by expanding y P_n in {P_k}.
inline BlockTridiagonal block_jacobi(const MatrixPolySequence& P) {
    if (P.normalization != Normalization::monic) throw InvalidArgument("block_jacobi expects a monic sequence");
    if (P.size() < 2) throw InsufficientSequence("block_jacobi needs at least two matrix polynomials");
    const std::size_t b = P.N + 1, m = P.size() - 1;
    BlockTridiagonal J(m, b);
    const RationalMatrix I = RationalMatrix::identity(b);
    for (std::size_t n = 0; n < m; ++n) {
        PolyMatrix F = multiply_by_monomial(P[n], 1);
        for (std::size_t d = n + 2; d-- > 0;) {
            RationalMatrix C = coefficient(F, d);
            if (C.is_zero()) continue;
            if (d + 1 < n || (d == n + 1 && C != I))
                throw IdentityViolated("y P_" + std::to_string(n) + " is not a block three-term combination");
            F = F - C * P[d];
            if (d == n) J.diag(n) = C;
            else if (d + 1 == n) J.sub(n) = C;
        }
        if (!F.is_zero()) throw IdentityViolated("nonzero remainder expanding y P_" + std::to_string(n));
        if (n + 1 < m) J.super(n) = I;
    }
    return J;
}

/// W-interlacing: x W_k = W_{k+1} + zeta_k W_{k-1} with W_{2n}(x) = P_n(x^2),
/// W_{2n+1}(x) = x Q_n(x^2). Returns the first k with a nonzero residual.
struct InterlaceReport {
    std::size_t checked = 0;
    std::optional<std::size_t> first_failure;
    PolyMatrix residual;

    bool passed() const noexcept { return !first_failure; }
};

inline InterlaceReport w_interlace_check(const MatrixPolySequence& P, const MatrixPolySequence& Q,
                                         const std::vector<RationalMatrix>& zetas, std::size_t k_max) {
    auto lift_x2 = [](const PolyMatrix& F, bool times_x) {
        PolyMatrix out(F.rows(), F.cols());
        for (std::size_t i = 0; i < F.rows(); ++i)
            for (std::size_t j = 0; j < F.cols(); ++j) {
                out(i, j) = substitute_power(F(i, j), 2);
                if (times_x) out(i, j) = Poly::x() * out(i, j);
            }
        return out;
    };
    auto W = [&](std::size_t k) { return k % 2 ? lift_x2(Q[k / 2], true) : lift_x2(P[k / 2], false); };
    if (P.size() <= (k_max + 1) / 2 || Q.size() <= k_max / 2 || zetas.size() <= k_max)
        throw InsufficientSequence("w_interlace_check: sequences too short for k=" + std::to_string(k_max));
    InterlaceReport r;
    for (std::size_t k = 0; k <= k_max; ++k) {
        PolyMatrix res = multiply_by_monomial(W(k), 1) - W(k + 1);
        if (k) res = res - zetas[k] * W(k - 1);
        ++r.checked;
        if (!res.is_zero()) {
            r.first_failure = k;
            r.residual = res;
            return r;
        }
    }
    return r;
}

/// Closed-form A_n, B_n (orthonormal, displayed sign convention) for the
/// Laguerre-Sobolev case alpha = 0, N = 1.
struct ReferenceAB {
    Matrix<SignedSquare> A = Matrix<SignedSquare>(2, 2);
    Matrix<SignedSquare> B = Matrix<SignedSquare>(2, 2);
};

inline ReferenceAB reference_ab(long n) {
    const Integer N = n;
    auto poly = [&](std::initializer_list<long> c) {
        Integer v = 0;
        for (long x : c) v = v * N + x;
        return v;
    };
    const Integer q1 = 8 * N * N + 14 * N + 9, q2 = 4 * N * N - 5 * N + 3, q3 = 8 * N * N - 2 * N + 3,
                  q4 = 4 * N * N + 3 * N + 2, q5 = 4 * N * N + 11 * N + 9;
    const Integer t1 = 2 * N + 1, t3 = 2 * N + 3, t5 = 2 * N + 5;
    ReferenceAB r;
    r.A(0, 0) = {4 * frac(q1 * q2 * t1 * t1 * t1 * (N + 2) * (N + 1), q3 * q4 * t3), 1};
    r.A(0, 1) = {0, 0};
    const Integer P = poly({256, 1408, 3088, 3640, 2692, 1414, 570, 135});
    r.A(1, 0) = {16 * frac(P * P * (N + 1), q1 * q3 * q4 * q4 * t3 * t3 * (N + 2)), -1};
    r.A(1, 1) = {4 * frac(q3 * q5 * t5 * t3 * (N + 1) * (N + 1) * (N + 1), q1 * q4 * (N + 2)), 1};
    const Rational b00 = 2 * frac(poly({768, 384, -368, 456, 328, -162, 37, 60, 9}), q3 * q2 * t1 * (N + 1));
    const Integer R = poly({128, 256, 104, 40, 86, 64, 42, 9});
    const Rational b01 = 16 * frac(R * R * t1, q3 * q3 * q4 * q2 * t3 * (N + 1) * (N + 1));
    const Rational b11 = 2 * frac(poly({768, 3456, 6352, 6744, 5128, 2898, 1099, 303, 63}), q3 * q4 * t3 * (N + 1));
    r.B(0, 0) = {b00 * b00, sign(b00)};
    r.B(0, 1) = {b01, -1};
    r.B(1, 0) = {b01, -1};
    r.B(1, 1) = {b11 * b11, sign(b11)};
    return r;
}

/// Closed-form squared leading coefficient of the orthonormal R_n (n >= 2) as displayed.
inline Matrix<SignedSquare> reference_leading(long n) {
    if (n < 2) throw InvalidArgument("reference_leading is stated for n >= 2");
    const Integer N = n;
    const Integer q2 = 4 * N * N - 5 * N + 3, q3 = 8 * N * N - 2 * N + 3, q4 = 4 * N * N + 3 * N + 2;
    const Integer f3 = factorial(static_cast<unsigned long>(2 * n - 3));
    const Integer f4 = factorial(static_cast<unsigned long>(2 * n - 4));
    const Integer f2 = factorial(static_cast<unsigned long>(2 * n));
    const Integer c10 = 8 * N * N * N + 6 * N * N - 5 * N + 3;
    Matrix<SignedSquare> L(2, 2);
    L(0, 0) = {frac(q2 * (2 * N + 1), 16 * q3 * (2 * N - 1) * (2 * N - 1) * (N + 1) * (N - 1) * (N - 1) * N * N * f3 * f3), 1};
    L(0, 1) = {0, 0};
    L(1, 0) = {frac(c10 * c10 * (2 * N + 1) * (2 * N + 1),
                    16 * q3 * q4 * (2 * N + 3) * (2 * N - 1) * (2 * N - 1) * (2 * N - 3) * (2 * N - 3) * (N + 1) *
                        (N - 1) * (N - 1) * N * N * f4 * f4),
               1};
    L(1, 1) = {frac(q3 * (N + 1), q4 * (2 * N + 3) * f2 * f2), -1};
    return L;
}

/// Diagonal +-1 similarity S with displayed = S ours S, fixed from the n = 0 diagonal
/// recurrence block: S_0 = 1, S_j = sign(displayed B_0(0,j)) sign(ours B_0(0,j)).
inline std::vector<int> sign_similarity(const BlockRecurrence& rec, const ReferenceAB& shown0) {
    const std::size_t b = rec.coeffs.block_size();
    std::vector<int> s(b, 1);
    for (std::size_t j = 1; j < b; ++j) {
        const int ours = rec.B(0, 0, j).sign, theirs = shown0.B(0, j).sign;
        s[j] = (ours == 0 || theirs == 0) ? 1 : ours * theirs;
    }
    return s;
}

}  // namespace opfold
