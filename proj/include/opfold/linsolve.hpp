#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "opfold/errors.hpp"
#include "opfold/matrix.hpp"
#include "opfold/rational.hpp"

namespace opfold {

using RationalVector = std::vector<Rational>;

/// Row echelon form produced by fraction-free elimination.
struct IntegerEchelon {
    Matrix<Integer> a;
    std::vector<std::size_t> pivot_cols;  // pivot column of echelon row r
};

/// Scales every row by the lcm of its denominators.
inline Matrix<Integer> integer_rows(const RationalMatrix& m) {
    Matrix<Integer> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer l = common_denominator(m.row(i));
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rational v = m(i, j) * l;
            r(i, j) = v.get_num();
        }
    }
    return r;
}

/// Bareiss elimination. After k pivots every trailing entry is a (k+1)-minor of
/// the input, so every division is exact. Pivots are only searched among the
/// first `pivot_limit` columns (the rest ride along, e.g. right-hand sides).
inline IntegerEchelon bareiss_echelon(Matrix<Integer> a, std::size_t pivot_limit) {
    IntegerEchelon e;
    const std::size_t rows = a.rows(), cols = a.cols();
    pivot_limit = std::min(pivot_limit, cols);
    Integer prev = 1, t;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_limit && r < rows; ++c) {
        // Smallest nonzero candidate keeps the minors small in practice.
        std::optional<std::size_t> p;
        for (std::size_t i = r; i < rows; ++i)
            if (a(i, c) != 0 && (!p || mpz_cmpabs(a(i, c).get_mpz_t(), a(*p, c).get_mpz_t()) < 0)) p = i;
        if (!p) continue;
        if (*p != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(*p, j), a(r, j));
        const Integer piv = a(r, c);
        for (std::size_t i = r + 1; i < rows; ++i) {
            const Integer f = a(i, c);
            for (std::size_t j = c + 1; j < cols; ++j) {
                t = piv * a(i, j);
                if (f != 0) t -= f * a(r, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, c) = 0;
        }
        prev = piv;
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.a = std::move(a);
    return e;
}

inline std::size_t rank(const RationalMatrix& m) {
    return bareiss_echelon(integer_rows(m), m.cols()).pivot_cols.size();
}

namespace detail {

/// Back substitution on an echelon form; free variables take `free_values`.
inline RationalVector back_substitute(const IntegerEchelon& e, std::size_t nvars,
                                      const std::vector<Rational>& rhs,
                                      const std::vector<Rational>& free_values) {
    RationalVector x = free_values;
    x.resize(nvars);
    for (std::size_t r = e.pivot_cols.size(); r-- > 0;) {
        const std::size_t pc = e.pivot_cols[r];
        Rational s = rhs[r];
        for (std::size_t j = pc + 1; j < nvars; ++j)
            if (e.a(r, j) != 0 && x[j] != 0) s -= Rational(e.a(r, j)) * x[j];
        x[pc] = s / Rational(e.a(r, pc));
    }
    return x;
}

}  // namespace detail

/// Exact solution of a nonsingular square system.
inline RationalVector solve_linear(const RationalMatrix& A, const RationalVector& b) {
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n) throw DimensionMismatch("solve_linear expects square A and matching b");
    RationalMatrix aug(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
        aug(i, n) = b[i];
    }
    IntegerEchelon e = bareiss_echelon(integer_rows(aug), n);
    if (e.pivot_cols.size() < n) throw SingularMatrix("solve_linear: matrix is rank deficient");
    RationalVector rhs(n);
    for (std::size_t r = 0; r < n; ++r) rhs[r] = Rational(e.a(r, n));
    return detail::back_substitute(e, n, rhs, RationalVector(n));
}

/// Basis of {x : A x = 0}; empty when the nullspace is trivial.
inline std::vector<RationalVector> nullspace(const RationalMatrix& A) {
    const std::size_t n = A.cols();
    IntegerEchelon e = bareiss_echelon(integer_rows(A), n);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
    std::vector<RationalVector> basis;
    const RationalVector zero_rhs(e.pivot_cols.size());
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        RationalVector free_values(n);
        free_values[f] = 1;
        basis.push_back(detail::back_substitute(e, n, zero_rhs, free_values));
    }
    return basis;
}

inline RationalMatrix inverse(const RationalMatrix& A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("inverse of non-square matrix");
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
        aug(i, n + i) = 1;
    }
    IntegerEchelon e = bareiss_echelon(integer_rows(aug), n);
    if (e.pivot_cols.size() < n) throw SingularMatrix("inverse: matrix is singular");
    RationalMatrix inv(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        RationalVector rhs(n);
        for (std::size_t r = 0; r < n; ++r) rhs[r] = Rational(e.a(r, n + col));
        RationalVector x = detail::back_substitute(e, n, rhs, RationalVector(n));
        for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
}

enum class Definiteness {
    positive,  // every pivot > 0
    quasi      // every pivot != 0 (signed functionals)
};

/// A = L D L^T with L unit lower triangular.
struct LDLT {
    RationalMatrix L;
    RationalVector D;
};

inline LDLT ldlt(const RationalMatrix& A, Definiteness mode = Definiteness::positive) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("ldlt of non-square matrix");
    LDLT f{RationalMatrix::identity(n), RationalVector(n)};
    for (std::size_t j = 0; j < n; ++j) {
        Rational d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= f.L(j, k) * f.L(j, k) * f.D[k];
        if (d == 0 || (mode == Definiteness::positive && d < 0))
            throw NotPositiveDefinite(j, mode == Definiteness::positive ? "nonpositive LDL^T pivot"
                                                                        : "zero LDL^T pivot");
        f.D[j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            Rational s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= f.L(i, k) * f.L(j, k) * f.D[k];
            f.L(i, j) = s / d;
        }
    }
    return f;
}

/// Exact PSD test by symmetric elimination: negative pivots fail, and a zero
/// pivot is only admissible when the rest of its row is zero.
inline bool is_positive_semidefinite(RationalMatrix A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (A(i, j) != A(j, i)) return false;
    for (std::size_t k = 0; k < n; ++k) {
        const Rational p = A(k, k);
        if (p < 0) return false;
        if (p == 0) {
            for (std::size_t j = k + 1; j < n; ++j)
                if (A(k, j) != 0) return false;
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (A(i, k) == 0) continue;
            const Rational f = A(i, k) / p;
            for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }
    return true;
}

/// Sparse exact linear system assembled row by row and reduced incrementally.
class SparseSystem {
public:
    using Row = std::map<std::size_t, Rational>;

    struct Solution {
        bool consistent = true;
        std::size_t rank = 0;
        RationalVector particular;                // free variables set to zero
        std::vector<RationalVector> nullspace;    // basis of the homogeneous solutions
        std::optional<std::size_t> inconsistent_equation;
    };

    explicit SparseSystem(std::size_t nvars) : nvars_(nvars) {}

    std::size_t variables() const noexcept { return nvars_; }
    std::size_t equations() const noexcept { return count_; }

    /// Adds sum_j row[j] x_j = rhs. Zero coefficients are dropped.
    void add(Row row, const Rational& rhs) {
        for (auto it = row.begin(); it != row.end();) {
            if (it->first >= nvars_) throw DimensionMismatch("sparse row index out of range");
            it = it->second == 0 ? row.erase(it) : std::next(it);
        }
        Rational b = rhs;
        reduce(row, b);
        const std::size_t id = count_++;
        if (row.empty()) {
            if (b != 0 && !first_inconsistent_) first_inconsistent_ = id;
            return;
        }
        const Rational lead = row.begin()->second;
        for (auto& [c, v] : row) v /= lead;
        b /= lead;
        const std::size_t pc = row.begin()->first;
        pivots_.emplace(pc, Pivot{std::move(row), std::move(b)});
    }

    Solution solve() const {
        Solution s;
        s.consistent = !first_inconsistent_;
        s.inconsistent_equation = first_inconsistent_;
        s.rank = pivots_.size();
        // Back substitution to reduced echelon form, highest pivot first.
        std::map<std::size_t, Pivot> reduced;
        for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
            Row row = it->second.row;
            Rational b = it->second.rhs;
            for (auto e = std::next(row.begin()); e != row.end();) {
                auto r = reduced.find(e->first);
                if (r == reduced.end()) {
                    ++e;
                    continue;
                }
                const Rational f = e->second;
                const std::size_t col = e->first;
                for (const auto& [c, v] : r->second.row) {
                    if (c == col) continue;
                    Rational& t = row[c];
                    t -= f * v;
                    if (t == 0) row.erase(c);
                }
                b -= f * r->second.rhs;
                e = row.erase(row.find(col));
                e = row.upper_bound(col);
            }
            reduced.emplace(it->first, Pivot{std::move(row), std::move(b)});
        }
        s.particular.assign(nvars_, Rational(0));
        for (const auto& [pc, p] : reduced) s.particular[pc] = p.rhs;
        for (std::size_t f = 0; f < nvars_; ++f) {
            if (reduced.count(f)) continue;
            RationalVector v(nvars_);
            v[f] = 1;
            for (const auto& [pc, p] : reduced) {
                auto e = p.row.find(f);
                if (e != p.row.end()) v[pc] = -e->second;
            }
            s.nullspace.push_back(std::move(v));
        }
        return s;
    }

private:
    struct Pivot {
        Row row;
        Rational rhs;
    };

    void reduce(Row& row, Rational& b) const {
        auto it = row.begin();
        while (it != row.end()) {
            auto p = pivots_.find(it->first);
            if (p == pivots_.end()) {
                ++it;
                continue;
            }
            const Rational f = it->second;
            const std::size_t col = it->first;
            for (const auto& [c, v] : p->second.row) {
                Rational& t = row[c];
                t -= f * v;
                if (t == 0 && c != col) row.erase(c);
            }
            b -= f * p->second.rhs;
            row.erase(col);
            it = row.upper_bound(col);
        }
    }

    std::size_t nvars_;
    std::size_t count_ = 0;
    std::map<std::size_t, Pivot> pivots_;
    std::optional<std::size_t> first_inconsistent_;
};

}  // namespace opfold
