#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "opfold/errors.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/matfold.hpp"
#include "opfold/matrix.hpp"
#include "opfold/measures.hpp"
#include "opfold/orthopoly.hpp"
#include "opfold/poly.hpp"
#include "opfold/rational.hpp"

namespace opfold {

/// F -> sum_k F^{(k)}(y) D_k(y), acting on row vectors from the right.
struct RightDifferentialOperator {
    unsigned N = 0;
    std::vector<PolyMatrix> coeffs;

    std::size_t order() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    std::size_t dim() const noexcept { return N + 1; }
    friend bool operator==(const RightDifferentialOperator&, const RightDifferentialOperator&) = default;
};

/// Drops vanishing top coefficients so that D_order != 0 (the zero operator keeps D_0 = 0).
inline RightDifferentialOperator make_operator(unsigned N, std::vector<PolyMatrix> coeffs) {
    for (const auto& D : coeffs)
        if (D.rows() != N + 1 || D.cols() != N + 1) throw DimensionMismatch("operator coefficient has wrong size");
    while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.empty()) coeffs.emplace_back(N + 1, N + 1);
    return {N, std::move(coeffs)};
}

/// Lambda_n = diag(lambda_{(N+1)n}, ..., lambda_{(N+1)n+N}).
struct EigenvalueLadder {
    unsigned N = 0;
    std::function<Rational(std::size_t)> scalar;

    RationalMatrix operator()(std::size_t n) const {
        RationalMatrix L(N + 1, N + 1);
        for (std::size_t i = 0; i <= N; ++i) L(i, i) = scalar((N + 1) * n + i);
        return L;
    }
};

inline EigenvalueLadder zero_ladder(unsigned N) {
    return {N, [](std::size_t) { return Rational(0); }};
}

inline PolyMatrix apply_right(const PolyMatrix& F, const RightDifferentialOperator& op) {
    if (F.cols() != op.dim()) throw DimensionMismatch("apply_right: argument has " + std::to_string(F.cols()) +
                                                      " columns, operator acts on " + std::to_string(op.dim()));
    PolyMatrix out(F.rows(), F.cols());
    for (std::size_t k = 0; k < op.coeffs.size(); ++k) {
        if (op.coeffs[k].is_zero()) continue;
        const PolyMatrix dF = derivative(F, static_cast<unsigned>(k));
        if (dF.is_zero()) break;
        out += dF * op.coeffs[k];
    }
    return out;
}

struct ReferenceOperator {
    RightDifferentialOperator op;
    EigenvalueLadder ladder;
};

/// The order-8 operator of the Laguerre-Sobolev case alpha = 0, c = 0, N = 1.
inline ReferenceOperator reference_operator() {
    // t(a, {c0, c1, ...}, s) = a * (c0 + c1 y + ...) * y^s
    auto t = [](long a, std::initializer_list<long> inner, std::size_t s) {
        Poly p(inner);
        p *= Rational(a);
        return p * Poly::monomial(s);
    };
    std::vector<PolyMatrix> D{
        {{t(0, {0}, 0), t(0, {0}, 0)}, {t(-3, {1}, 0), t(3, {1}, 0)}},
        {{t(1, {-6, 9}, 0), t(-12, {1}, 0)}, {t(1, {54, -105}, 0), t(24, {1}, 1)}},
        {{t(1, {-72, 474, 27}, 0), t(-276, {1}, 1)}, {t(-6, {459, 151}, 1), t(3, {1100, 19}, 1)}},
        {{t(24, {93, 166, 1}, 1), t(-12, {570, 53}, 1)}, {t(-4, {6852, 287}, 2), t(8, {2205, 1278, 4}, 1)}},
        {{t(4, {4701, 1080, 1}, 2), t(-8, {2253, 37}, 2)}, {t(-8, {4908, 47}, 3), t(4, {14301, 1770, 1}, 2)}},
        {{t(96, {252, 13}, 3), t(-32, {348, 1}, 3)}, {t(-32, {534, 1}, 4), t(384, {123, 4}, 3)}},
        {{t(96, {101, 1}, 4), t(-2208, {1}, 4)}, {t(-2656, {1}, 5), t(32, {443, 3}, 4)}},
        {{t(1408, {1}, 5), t(-128, {1}, 5)}, {t(-128, {1}, 6), t(1664, {1}, 5)}},
        {{t(64, {1}, 6), t(0, {0}, 0)}, {t(0, {0}, 0), t(64, {1}, 6)}},
    };
    EigenvalueLadder ladder{1, [](std::size_t m) {
                                const Integer n = static_cast<unsigned long>(m / 2);
                                if (m % 2 == 0) return Rational((4 * n * n * n - n + 6) * n);
                                return Rational((2 * n * n * n + 3 * n * n + n + 3) * (2 * n + 1));
                            }};
    return {make_operator(1, std::move(D)), std::move(ladder)};
}

struct EigenCase {
    std::size_t n = 0;
    PolyMatrix residual;
    bool passed = false;
};

struct EigenReport {
    std::vector<EigenCase> cases;

    bool passed() const {
        for (const auto& c : cases)
            if (!c.passed) return false;
        return true;
    }
    std::vector<std::size_t> failures() const {
        std::vector<std::size_t> f;
        for (const auto& c : cases)
            if (!c.passed) f.push_back(c.n);
        return f;
    }
};

/// Exact residuals R_n D - Lambda_n R_n for n_lo <= n <= n_hi.
inline EigenReport verify_eigen(const MatrixPolySequence& R, const RightDifferentialOperator& op,
                                const EigenvalueLadder& ladder, std::size_t n_lo, std::size_t n_hi) {
    if (n_hi >= R.size()) throw InsufficientSequence("verify_eigen: sequence has " + std::to_string(R.size()) + " blocks");
    EigenReport rep;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        EigenCase c;
        c.n = n;
        c.residual = apply_right(R[n], op) - ladder(n) * R[n];
        c.passed = c.residual.is_zero();
        rep.cases.push_back(std::move(c));
    }
    return rep;
}

namespace detail {

/// Unknown numbering for the coefficients of every entry of every D_k.
struct OperatorLayout {
    unsigned N = 0;
    std::vector<std::size_t> bound;   // degree bound of D_k
    std::vector<std::size_t> offset;  // first unknown of D_k
    std::size_t count = 0;

    OperatorLayout(unsigned n, std::vector<std::size_t> bounds) : N(n), bound(std::move(bounds)) {
        const std::size_t b = N + 1;
        for (std::size_t d : bound) {
            offset.push_back(count);
            count += b * b * (d + 1);
        }
    }
    std::size_t order() const { return bound.size() - 1; }
    std::size_t index(std::size_t k, std::size_t r, std::size_t c, std::size_t d) const {
        return offset[k] + (r * (N + 1) + c) * (bound[k] + 1) + d;
    }
    RightDifferentialOperator decode(const std::vector<Rational>& x) const {
        std::vector<PolyMatrix> D;
        for (std::size_t k = 0; k < bound.size(); ++k) {
            PolyMatrix M(N + 1, N + 1);
            for (std::size_t r = 0; r <= N; ++r)
                for (std::size_t c = 0; c <= N; ++c) {
                    std::vector<Rational> v(bound[k] + 1);
                    for (std::size_t d = 0; d <= bound[k]; ++d) v[d] = x[index(k, r, c, d)];
                    M(r, c) = Poly(std::move(v));
                }
            D.push_back(std::move(M));
        }
        return make_operator(N, std::move(D));
    }
};

/// Rows of R_0..R_{n_fit} unfolded to scalars, their folds, and the expansion of
/// each monomial x^t in them.
struct RowBasis {
    unsigned N = 0;
    std::vector<Poly> u;
    std::vector<std::vector<Poly>> folded;
    std::vector<std::vector<Rational>> kappa;  // x^t = sum_m kappa[t][m] u[m]
};

inline RowBasis row_basis(const MatrixPolySequence& R, std::size_t n_fit) {
    if (n_fit >= R.size())
        throw InsufficientSequence("n_fit = " + std::to_string(n_fit) + " needs " + std::to_string(n_fit + 1) +
                                   " blocks, have " + std::to_string(R.size()));
    RowBasis B;
    B.N = R.N;
    const std::size_t b = R.N + 1;
    for (std::size_t n = 0; n <= n_fit; ++n)
        for (std::size_t i = 0; i < b; ++i) {
            Poly u = unfold_row(R[n], i, R.N);
            if (u.degree() != static_cast<int>(b * n + i))
                throw InvalidArgument("row " + std::to_string(i) + " of block " + std::to_string(n) +
                                      " does not unfold to degree " + std::to_string(b * n + i));
            B.folded.push_back(fold_decompose(u, R.N));
            B.u.push_back(std::move(u));
        }
    const std::size_t K = B.u.size();
    B.kappa.assign(K, std::vector<Rational>(K));
    for (std::size_t t = 0; t < K; ++t) {
        Poly p = Poly::monomial(t);
        while (!p.is_zero()) {
            const auto m = static_cast<std::size_t>(p.degree());
            const Rational k = p.leading() / B.u[m].leading();
            B.kappa[t][m] = k;
            p.add_scaled(B.u[m], -k);
        }
    }
    return B;
}

inline Rational falling(std::size_t j, std::size_t k) {
    Integer r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= static_cast<unsigned long>(j - i);
    return Rational(r);
}

/// Builds the eigen-equations on the monomial rows y^j e_r (x^t, t = (N+1)j + r):
///   sum_k j!/(j-k)! y^{j-k} D_k[r,:] = fold(sum_m kappa[t][m] lambda_m u_m).
/// With a ladder the right side is known; without one each lambda_m is an extra
/// unknown placed after the operator unknowns.
inline SparseSystem eigen_system(const RowBasis& B, const OperatorLayout& L, const EigenvalueLadder* ladder) {
    const std::size_t K = B.u.size(), b = B.N + 1;
    SparseSystem sys(L.count + (ladder ? 0 : K));
    for (std::size_t t = 0; t < K; ++t) {
        const std::size_t j = t / b, r = t % b;
        const std::size_t kmax = std::min(j, L.order());
        std::size_t pmax = j;
        for (std::size_t k = 0; k <= kmax; ++k) pmax = std::max(pmax, j - k + L.bound[k]);
        for (std::size_t c = 0; c < b; ++c)
            for (std::size_t p = 0; p <= pmax; ++p) {
                SparseSystem::Row row;
                for (std::size_t k = 0; k <= kmax; ++k) {
                    if (p < j - k || p - (j - k) > L.bound[k]) continue;
                    row[L.index(k, r, c, p - (j - k))] = falling(j, k);
                }
                Rational rhs = 0;
                for (std::size_t m = 0; m <= t; ++m) {
                    if (B.kappa[t][m] == 0) continue;
                    const Rational v = B.kappa[t][m] * B.folded[m][c].coeff(p);
                    if (v == 0) continue;
                    if (ladder)
                        rhs += v * ladder->scalar(m);
                    else
                        row[L.count + m] = -v;
                }
                sys.add(std::move(row), rhs);
            }
    }
    return sys;
}

}  // namespace detail

struct DiscoveryResult {
    bool consistent = false;
    std::optional<RightDifferentialOperator> op;  // a particular solution
    std::size_t nullity = 0;                      // operators of the same shape annihilating every fitted R_n
    std::vector<RightDifferentialOperator> nullspace;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
};

/// Every D_k entry of degree <= degree_bound, eigen-equations for R_0..R_{n_fit}.
inline DiscoveryResult solve_operator_system(const MatrixPolySequence& R, const EigenvalueLadder& ladder,
                                             std::size_t order, std::size_t degree_bound, std::size_t n_fit) {
    if (ladder.N != R.N) throw DimensionMismatch("ladder size differs from the sequence");
    const auto B = detail::row_basis(R, n_fit);
    const detail::OperatorLayout L(R.N, std::vector<std::size_t>(order + 1, degree_bound));
    const SparseSystem sys = detail::eigen_system(B, L, &ladder);
    const auto sol = sys.solve();
    DiscoveryResult res;
    res.consistent = sol.consistent;
    res.unknowns = sys.variables();
    res.equations = sys.equations();
    res.nullity = sol.nullspace.size();
    if (sol.consistent) res.op = L.decode(sol.particular);
    for (const auto& v : sol.nullspace) res.nullspace.push_back(L.decode(v));
    return res;
}

struct DiscoveredOperator {
    RightDifferentialOperator op;
    std::size_t nullity = 0;  // uniqueness certificate
    std::size_t unknowns = 0;
    std::size_t equations = 0;
};

inline DiscoveredOperator discover_operator(const MatrixPolySequence& R, const EigenvalueLadder& ladder,
                                            std::size_t order, std::size_t degree_bound, std::size_t n_fit) {
    auto res = solve_operator_system(R, ladder, order, degree_bound, n_fit);
    if (!res.consistent)
        throw Infeasible("no operator of order " + std::to_string(order) + " with entries of degree <= " +
                         std::to_string(degree_bound) + " fits R_0..R_" + std::to_string(n_fit));
    if (res.nullity)
        throw Underdetermined("operator not determined by R_0..R_" + std::to_string(n_fit) + ": nullspace dimension " +
                                  std::to_string(res.nullity),
                              res.nullity);
    return {std::move(*res.op), 0, res.unknowns, res.equations};
}

struct OrderLevel {
    std::size_t order = 0;
    std::size_t unknowns = 0;
    std::size_t rank = 0;
    std::size_t nullity = 0;
    bool feasible = false;
};

struct MinOrderReport {
    std::vector<OrderLevel> levels;
    std::optional<std::size_t> min_order;  // least order >= 1 with a new solution
    std::size_t constant_multipliers = 0;  // nullity at order 0 (the identity is always there)
};

/// Free eigenvalues per row. A solution of order m contains one with D_m != 0 iff
/// the nullity grows from order m-1. deg D_k <= k holds for any operator that maps
/// every R_n into Lambda_n R_n, so that is the degree bound used.
inline MinOrderReport min_order_check(const MatrixPolySequence& R, std::size_t max_order, std::size_t n_fit) {
    const auto B = detail::row_basis(R, n_fit);
    MinOrderReport rep;
    std::size_t prev = 0;
    for (std::size_t m = 0; m <= max_order; ++m) {
        std::vector<std::size_t> bounds(m + 1);
        for (std::size_t k = 0; k <= m; ++k) bounds[k] = k;
        const detail::OperatorLayout L(R.N, bounds);
        const auto sol = detail::eigen_system(B, L, nullptr).solve();
        OrderLevel lv{m, L.count + B.u.size(), sol.rank, sol.nullspace.size(), false};
        if (m == 0) {
            rep.constant_multipliers = lv.nullity;
            lv.feasible = lv.nullity > 1;
        } else {
            lv.feasible = lv.nullity > prev;
        }
        prev = lv.nullity;
        rep.levels.push_back(lv);
        if (m > 0 && lv.feasible) {
            rep.min_order = m;
            break;
        }
    }
    return rep;
}

/// Scalar operator sum_k coeffs[k](x) d^k/dx^k with s_n -> eigenvalues[n] s_n.
struct ScalarOperator {
    std::vector<Poly> coeffs;
    std::vector<Rational> eigenvalues;

    std::size_t order() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

inline Poly apply(const ScalarOperator& D, const Poly& p) {
    Poly out;
    for (std::size_t k = 0; k < D.coeffs.size(); ++k) {
        if (D.coeffs[k].is_zero()) continue;
        const Poly dp = derivative(p, static_cast<unsigned>(k));
        if (dp.is_zero()) break;
        out += D.coeffs[k] * dp;
    }
    return out;
}

inline ScalarOperator hermite_operator(std::size_t count) {
    ScalarOperator D{{Poly(), Poly{0, -2}, Poly(1)}, {}};
    for (std::size_t n = 0; n < count; ++n) D.eigenvalues.push_back(Rational(-2 * static_cast<long>(n)));
    return D;
}

/// Monic Hermite polynomials (weight e^{-x^2}) through degree n_max.
inline MonicSequence hermite_sequence(std::size_t n_max) {
    return monic_sequence(measure_form(hermite_moments(2 * n_max + 1)), n_max);
}

inline std::optional<std::size_t> first_scalar_mismatch(const ScalarOperator& D, const MonicSequence& s) {
    const std::size_t n = std::min(s.size(), D.eigenvalues.size());
    for (std::size_t m = 0; m < n; ++m) {
        Poly lhs = apply(D, s[m]);
        Poly rhs = s[m];
        rhs *= D.eigenvalues[m];
        if (lhs != rhs) return m;
    }
    return std::nullopt;
}

/// Scalar discovery: the N = 0 case of discover_operator on s_0..s_{n_fit}.
inline ScalarOperator discover_scalar_operator(const MonicSequence& s, const std::function<Rational(std::size_t)>& lambda,
                                               std::size_t order, std::size_t degree_bound, std::size_t n_fit) {
    const auto R = build_matrix_sequence(s, 0, n_fit + 1);
    const auto found = discover_operator(R, EigenvalueLadder{0, lambda}, order, degree_bound, n_fit);
    ScalarOperator D;
    for (const auto& M : found.op.coeffs) D.coeffs.push_back(M(0, 0));
    for (std::size_t m = 0; m < s.size(); ++m) D.eigenvalues.push_back(lambda(m));
    return D;
}

/// Root-of-unity arithmetic in Q(w) = Q[x] / Phi_n(x).
struct CyclotomicField {
    unsigned n = 1;
    Poly modulus;

    explicit CyclotomicField(unsigned order) : n(order), modulus(cyclotomic_polynomial(order)) {}

    static Poly cyclotomic_polynomial(unsigned n) {
        Poly p = Poly::monomial(n) - Poly(1);
        for (unsigned d = 1; d < n; ++d)
            if (n % d == 0) p = divide_monic(p, cyclotomic_polynomial(d)).first;
        return p;
    }

    /// Quotient and remainder by a monic divisor.
    static std::pair<Poly, Poly> divide_monic(Poly a, const Poly& b) {
        Poly q;
        const int db = b.degree();
        while (!a.is_zero() && a.degree() >= db) {
            const auto shift = static_cast<std::size_t>(a.degree() - db);
            const Rational c = a.leading();
            q.set_coeff(shift, c);
            a.add_scaled(b, -c, shift);
        }
        return {q, a};
    }

    Poly reduce(const Poly& p) const { return divide_monic(p, modulus).second; }
    /// w^e for any integer e.
    Poly power(long e) const {
        const long m = ((e % static_cast<long>(n)) + n) % static_cast<long>(n);
        return reduce(Poly::monomial(static_cast<std::size_t>(m)));
    }
};

/// Data of the conjugation D = A B C B^{-1} A^{-1} for block size N+1.
struct FoldConjugationData {
    unsigned N = 0;
    std::vector<Rational> a_exponents;  // A(y)_{jj} = |y|^{a_exponents[j]}
    Matrix<long> b_exponents;           // B_{jk} = w^{b_exponents(j,k)}, w = exp(2 pi i / (N+1))

    /// B B^* in Q(w); equals (N+1) I.
    Matrix<Poly> b_gram() const {
        const CyclotomicField F(N + 1);
        Matrix<Poly> G(N + 1, N + 1);
        for (std::size_t j = 0; j <= N; ++j)
            for (std::size_t k = 0; k <= N; ++k) {
                Poly acc;
                for (std::size_t l = 0; l <= N; ++l) acc += F.power(b_exponents(j, l) - b_exponents(k, l));
                G(j, k) = F.reduce(acc);
            }
        return G;
    }
    bool unitary_up_to_scale() const {
        const auto G = b_gram();
        for (std::size_t j = 0; j <= N; ++j)
            for (std::size_t k = 0; k <= N; ++k)
                if (G(j, k) != (j == k ? Poly(static_cast<long>(N + 1)) : Poly())) return false;
        return true;
    }

    template <class Real>
    std::complex<Real> w() const {
        return std::polar(Real(1), 2 * std::numbers::pi_v<Real> / static_cast<Real>(N + 1));
    }
    template <class Real>
    Matrix<std::complex<Real>> B() const {
        Matrix<std::complex<Real>> m(N + 1, N + 1);
        for (std::size_t j = 0; j <= N; ++j)
            for (std::size_t k = 0; k <= N; ++k)
                m(j, k) = std::polar(Real(1), 2 * std::numbers::pi_v<Real> * static_cast<Real>(b_exponents(j, k)) /
                                                  static_cast<Real>(N + 1));
        return m;
    }
    /// B^{-1} = B^* / (N+1).
    template <class Real>
    Matrix<std::complex<Real>> B_inverse() const {
        auto b = B<Real>();
        Matrix<std::complex<Real>> m(N + 1, N + 1);
        for (std::size_t j = 0; j <= N; ++j)
            for (std::size_t k = 0; k <= N; ++k) m(j, k) = std::conj(b(k, j)) / static_cast<Real>(N + 1);
        return m;
    }
};

inline FoldConjugationData fold_conjugation_data(unsigned N) {
    FoldConjugationData d;
    d.N = N;
    d.b_exponents = Matrix<long>(N + 1, N + 1);
    for (unsigned j = 0; j <= N; ++j) {
        d.a_exponents.push_back(frac(j, N + 1));
        for (unsigned k = 0; k <= N; ++k) d.b_exponents(j, k) = static_cast<long>((j * k) % (N + 1));
    }
    return d;
}

template <class Real>
struct ConjugationResult {
    Matrix<std::complex<Real>> lhs;  // (R_n D)(y0) through A B C B^{-1} A^{-1}
    Matrix<std::complex<Real>> rhs;  // Lambda_n R_n(y0)
    Real deviation = 0;              // max |lhs - rhs| / max(1, max |rhs|)
};

template <class Real>
Real max_deviation(const Matrix<std::complex<Real>>& a, const Matrix<std::complex<Real>>& b) {
    Real diff = 0, scale = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            diff = std::max(diff, std::abs(a(i, j) - b(i, j)));
            scale = std::max(scale, std::abs(b(i, j)));
        }
    return diff / scale;
}

/// Entry (j,k) of R_n A B C is D s_{(N+1)n+j} evaluated at w^k y0^{1/(N+1)}.
template <class Real = double>
ConjugationResult<Real> conjugation_eval(const ScalarOperator& D, unsigned N, const MonicSequence& s, std::size_t n,
                                         const Rational& y0) {
    if (y0 <= 0) throw InvalidArgument("conjugation_eval needs y0 > 0");
    const std::size_t b = N + 1;
    if (b * (n + 1) > s.size() || b * (n + 1) > D.eigenvalues.size())
        throw InsufficientSequence("conjugation_eval: sequence or eigenvalues too short for n = " + std::to_string(n));
    using C = std::complex<Real>;
    const auto data = fold_conjugation_data(N);
    const Real x0 = std::pow(to_real<Real>(y0), Real(1) / static_cast<Real>(b));
    const Real a_min = std::min(Real(1), std::pow(x0, static_cast<Real>(N)));
    const Real a_max = std::max(Real(1), std::pow(x0, static_cast<Real>(N)));
    if (a_max / a_min > Real(1e12)) throw NumericalInstability("A(y0) is too badly conditioned");
    const C w = data.template w<Real>();

    Matrix<C> M(b, b);
    Matrix<C> rhs(b, b);
    for (std::size_t j = 0; j < b; ++j) {
        const std::size_t m = b * n + j;
        const Poly Ds = apply(D, s[m]);
        for (std::size_t k = 0; k < b; ++k) M(j, k) = evaluate(Ds, std::pow(w, static_cast<int>(k)) * x0);
        const auto parts = fold_decompose(s[m], N);
        const Real lambda = to_real<Real>(D.eigenvalues[m]);
        for (std::size_t c = 0; c < b; ++c) rhs(j, c) = lambda * evaluate_real(parts[c], to_real<Real>(y0));
    }
    Matrix<C> A_inv(b, b);
    for (std::size_t j = 0; j < b; ++j) A_inv(j, j) = std::pow(x0, -static_cast<Real>(j));
    ConjugationResult<Real> res;
    res.lhs = M * data.template B_inverse<Real>() * A_inv;
    res.rhs = std::move(rhs);
    res.deviation = max_deviation(res.lhs, res.rhs);
    return res;
}

/// (R_n D)(y0) from the exact matrix operator, for comparison with conjugation_eval.
template <class Real = double>
Matrix<std::complex<Real>> evaluate_right_action(const PolyMatrix& Rn, const RightDifferentialOperator& op,
                                                 const Rational& y0) {
    const RationalMatrix v = evaluate(apply_right(Rn, op), y0);
    Matrix<std::complex<Real>> out(v.rows(), v.cols());
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) out(i, j) = to_real<Real>(v(i, j));
    return out;
}

}  // namespace opfold
