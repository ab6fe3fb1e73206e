#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opfold/banded.hpp"
#include "opfold/errors.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/matrix.hpp"
#include "opfold/orthopoly.hpp"
#include "opfold/rational.hpp"

namespace opfold {

/// Monic form of H = T T^*: H^m D_nu = T^m D_pi (T^m)^T with T^m unit lower
/// triangular of band N+1 and pivots pi.
struct BandFactorization {
    BandedOperator T;               // unit diagonal
    std::vector<Rational> pivots;   // pi_j
    std::vector<Rational> row_norms;  // nu_n
    std::size_t trusted_rows = 0;

    /// T_{nj} = T^m_{nj} sqrt(pi_j / nu_n)
    SignedSquare orthonormal(std::size_t n, std::size_t j) const {
        const Rational v = T.at(n, j);
        return {v * v * pivots.at(j) / row_norms.at(n), sign(v)};
    }
};

/// Banded LDL^T of S = H^m D_nu, which is symmetric when H is. The leading
/// block of a truncation factors exactly, so every row is trusted.
inline BandFactorization band_symmetric_factorize(const NormalizedBanded& H, std::size_t bandwidth,
                                                  Definiteness mode = Definiteness::positive) {
    const std::size_t m = H.monic.size();
    BandedOperator S(m, bandwidth, bandwidth);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = H.monic.first_col(i); j <= H.monic.last_col(i); ++j)
            S.set(i, j, H.monic.at(i, j) * H.col_norms.at(j));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = S.first_col(i); j < i; ++j)
            if (S.at(i, j) != S.at(j, i)) throw SymmetryViolated("H D is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");

    BandFactorization f{BandedOperator(m, bandwidth, 0), std::vector<Rational>(m), H.row_norms, m};
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t lo = j > bandwidth ? j - bandwidth : 0;
        Rational d = S.at(j, j);
        for (std::size_t k = lo; k < j; ++k) d -= f.T.at(j, k) * f.T.at(j, k) * f.pivots[k];
        if (d == 0 || (mode == Definiteness::positive && d < 0))
            throw NotPositiveDefinite(j, "band factorization pivot");
        f.pivots[j] = d;
        f.T.set(j, j, 1);
        for (std::size_t i = j + 1; i <= std::min(m - 1, j + bandwidth); ++i) {
            Rational s = S.at(i, j);
            const std::size_t lo2 = i > bandwidth ? i - bandwidth : 0;
            for (std::size_t k = std::max(lo, lo2); k < j; ++k) s -= f.T.at(i, k) * f.T.at(j, k) * f.pivots[k];
            f.T.set(i, j, s / d);
        }
    }
    return f;
}

/// Outcome of an identity check on a block of rows.
struct IdentityCheck {
    bool exact = true;
    std::size_t rows_checked = 0;
    std::optional<std::pair<std::size_t, std::size_t>> worst;  // first exact mismatch
    double float_rel_error = 0;  // orthonormal (complex) realization
    bool float_ok = true;

    bool passed() const noexcept { return exact && float_ok; }
};

namespace detail {

using cd = std::complex<double>;
using CMatrix = Matrix<cd>;

inline std::vector<Rational> head(const std::vector<Rational>& v, std::size_t m) {
    if (v.size() < m) throw InsufficientSequence("norm list shorter than truncation");
    return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)};
}

inline std::vector<cd> complex_sqrt(const std::vector<Rational>& v) {
    std::vector<cd> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(std::sqrt(cd(to_double(x), 0.0)));
    return r;
}

/// D_l^{-1/2} X D_r^{1/2} realized in complex doubles.
inline CMatrix conjugate(const RationalMatrix& X, const std::vector<cd>& left, const std::vector<cd>& right) {
    CMatrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j)
            if (X(i, j) != 0) out(i, j) = to_double(X(i, j)) * right[j] / left[i];
    return out;
}

inline double relative_error(const CMatrix& a, const CMatrix& b, std::size_t rows, std::size_t cols) {
    double diff = 0, scale = 1;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            diff = std::max(diff, std::abs(a(i, j) - b(i, j)));
            scale = std::max(scale, std::abs(b(i, j)));
        }
    return diff / scale;
}

}  // namespace detail

/// H = T T^*, exactly as H^m D_nu = T^m D_pi T^mT on every row, and in complex
/// floating point for the orthonormal statement.
inline IdentityCheck verify_htt(const NormalizedBanded& H, const BandFactorization& f, double tol) {
    const std::size_t m = std::min(H.monic.size(), f.T.size());
    const RationalMatrix Hd = H.monic.to_dense().leading_block(m);
    const RationalMatrix Td = f.T.to_dense().leading_block(m);
    IdentityCheck r;
    r.rows_checked = m;
    RationalMatrix lhs = Hd * diagonal(detail::head(H.col_norms, m));
    RationalMatrix rhs = Td * diagonal(detail::head(f.pivots, m)) * Td.transpose();
    for (std::size_t i = 0; i < m && r.exact; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (lhs(i, j) != rhs(i, j)) {
                r.exact = false;
                r.worst = {i, j};
                break;
            }
    auto nu = detail::complex_sqrt(detail::head(H.row_norms, m));
    auto pi = detail::complex_sqrt(detail::head(f.pivots, m));
    auto Hh = detail::conjugate(Hd, nu, nu);
    auto Th = detail::conjugate(Td, nu, pi);
    auto TTt = Th * Th.transpose();
    r.float_rel_error = detail::relative_error(TTt, Hh, m, m);
    r.float_ok = r.float_rel_error <= tol;
    return r;
}

/// Monic form of (J - c)^{N+1} = T^* T: K = D_pi T^mT D_nu^{-1} T^m, where
/// K = (J^m - c)^{N+1} for the monic Jacobi matrix of the Christoffel sequence.
/// Rows are trusted while neither side touches the truncation edge.
inline IdentityCheck verify_ul_identity(const JacobiMatrix& J, const Rational& c, unsigned N,
                                        const BandFactorization& f, double tol) {
    const std::size_t k = N + 1;
    const std::size_t m = std::min(J.size(), f.T.size());
    if (m <= 2 * k) throw InsufficientSequence("verify_ul_identity: truncation too small");
    const std::size_t trusted = m - 2 * k;
    const RationalMatrix Jd = J.op.monic.leading(m).to_dense();
    RationalMatrix shifted = Jd;
    for (std::size_t i = 0; i < m; ++i) shifted(i, i) -= c;
    RationalMatrix K = RationalMatrix::identity(m);
    for (std::size_t p = 0; p < k; ++p) K = K * shifted;

    const RationalMatrix Td = f.T.to_dense().leading_block(m);
    std::vector<Rational> inv_nu(m), pi(m);
    for (std::size_t i = 0; i < m; ++i) {
        inv_nu[i] = 1 / f.row_norms.at(i);
        pi[i] = f.pivots.at(i);
    }
    const RationalMatrix rhs = diagonal(pi) * Td.transpose() * diagonal(inv_nu) * Td;

    IdentityCheck r;
    r.rows_checked = trusted;
    for (std::size_t i = 0; i < trusted && r.exact; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (K(i, j) != rhs(i, j)) {
                r.exact = false;
                r.worst = {i, j};
                break;
            }
    auto nu_s = detail::complex_sqrt(detail::head(f.row_norms, m));
    auto pi_s = detail::complex_sqrt(pi);
    auto Kh = detail::conjugate(K, pi_s, pi_s);
    auto Th = detail::conjugate(Td, nu_s, pi_s);
    auto TtT = Th.transpose() * Th;
    r.float_rel_error = detail::relative_error(TtT, Kh, trusted, m);
    r.float_ok = r.float_rel_error <= tol;
    return r;
}

/// Block bidiagonal factors of a monic block Jacobi matrix: J = L U with
/// L_{n+1,n} = zeta_{2n+2}, U_{n,n} = zeta_{2n+1}, U_{n,n+1} = I.
struct BlockLU {
    BlockTridiagonal L;
    BlockTridiagonal U;
    std::vector<RationalMatrix> zetas;  // zeta_0 .. zeta_{2m-1}
};

inline BlockLU block_lu(const BlockTridiagonal& J) {
    const std::size_t m = J.blocks(), b = J.block_size();
    if (m < 2) throw InsufficientSequence("block_lu needs at least two blocks");
    BlockLU f{BlockTridiagonal(m, b), BlockTridiagonal(m, b), {RationalMatrix(b, b)}};
    const RationalMatrix I = RationalMatrix::identity(b);
    for (std::size_t n = 0; n < m; ++n) {
        f.zetas.push_back(J.diag(n) - f.zetas[2 * n]);  // zeta_{2n+1}
        f.L.diag(n) = I;
        f.U.diag(n) = f.zetas[2 * n + 1];
        if (n + 1 < m) {
            f.U.super(n) = I;
            RationalMatrix inv;
            try {
                inv = inverse(f.zetas[2 * n + 1]);
            } catch (const SingularMatrix&) {
                throw SingularPivotBlock(n);
            }
            f.zetas.push_back(J.sub(n + 1) * inv);  // zeta_{2n+2}
            f.L.sub(n + 1) = f.zetas[2 * n + 2];
        }
    }
    return f;
}

/// U L. With m blocks the last diagonal block misses zeta_{2m}, so only the
/// leading m-1 blocks are exact.
inline BlockTridiagonal darboux_swap(const BlockTridiagonal& L, const BlockTridiagonal& U) {
    return (U * L).leading(L.blocks() - 1);
}

/// zeta_{2n} and zeta_{2n-1} as displayed in closed form (labels as displayed).
struct ReferenceZeta {
    RationalMatrix even;  // labelled zeta_{2n}
    RationalMatrix odd;   // labelled zeta_{2n-1}
};

inline ReferenceZeta reference_zeta(long n) {
    const Integer N = n;
    const Integer q = 4 * N * N - 5 * N + 3;
    const Integer t = 2 * N + 1, u = 2 * N - 1;
    ReferenceZeta z{RationalMatrix(2, 2), RationalMatrix(2, 2)};
    z.even(0, 0) = -frac(2 * (16 * N * N - 12 * N - 9) * u * u * (N - 1) * N, q * t);
    z.even(0, 1) = frac(4 * (8 * N * N * N - 12 * N * N + 4 * N + 3) * N, q * t);
    z.even(1, 0) = -frac(2 * (16 * N * N * N - 40 * N * N + 28 * N - 3) * t * u * u * N, q);
    z.even(1, 1) = frac(2 * (16 * N * N * N - 36 * N * N + 29 * N - 6) * t * N, q);
    z.odd(0, 0) = -frac(2 * (32 * N * N * N * N + 8 * N * N * N - 14 * N * N + 7 * N + 3) * u * N, q * t);
    z.odd(0, 1) = frac(4 * (8 * N * N * N - 2 * N + 3) * N, q * t);
    z.odd(1, 0) = -frac(2 * (32 * N * N * N * N + 16 * N * N * N - 32 * N * N + 14 * N + 9) * t * u * N, q);
    z.odd(1, 1) = frac(2 * (16 * N * N * N + 4 * N * N - 15 * N + 12) * t * N, q);
    return z;
}

/// Simplified closed forms of zeta_{2n+2} + zeta_{2n+1} and zeta_{2n+1} zeta_{2n}.
struct ReferenceSumProduct {
    RationalMatrix sum;
    RationalMatrix product;
};

inline ReferenceSumProduct reference_sum_product(long n) {
    ReferenceSumProduct r{RationalMatrix(2, 2), RationalMatrix(2, 2)};
    const Integer N = n;
    const Integer s = 4 * (N + 1);
    r.sum(0, 0) = Rational(s * (-(4 * N + 3) * (2 * N + 1)));
    r.sum(0, 1) = Rational(s * 2);
    r.sum(1, 0) = Rational(s * (-2 * (4 * N * N + 8 * N + 5) * (2 * N + 3) * (2 * N + 1)));
    r.sum(1, 1) = Rational(s * (4 * N + 5) * (2 * N + 3));
    const Integer p = 4 * (N + 1) * N * (2 * N + 1);
    r.product(0, 0) = Rational(p * (-(8 * N + 3) * (2 * N - 1)));
    r.product(0, 1) = Rational(p * 4);
    r.product(1, 0) = Rational(p * (-4 * (2 * N + 3) * (2 * N + 1) * (2 * N + 1) * (2 * N - 1)));
    r.product(1, 1) = Rational(p * (8 * N + 5) * (2 * N + 3));
    return r;
}

}  // namespace opfold
