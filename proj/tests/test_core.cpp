#include <gtest/gtest.h>

#include <random>

#include "opfold/banded.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/poly.hpp"
#include "opfold/rational.hpp"
#include "test_util.hpp"

using namespace opfold;
using opfold::testing_util::same;

TEST(Rational, CanonicalParse) {
    EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
    EXPECT_EQ(to_string(parse_rational("-10/5")), "-2");
    EXPECT_THROW(parse_rational("1/-2"), ParseError);
    EXPECT_EQ(to_string(parse_rational(" 7 ")), "7");
    EXPECT_THROW(parse_rational("1/0"), ParseError);
    EXPECT_THROW(parse_rational("x"), ParseError);
    EXPECT_THROW(parse_rational("1.5"), ParseError);
}

TEST(Rational, FieldIdentities) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> d(-1000, 1000);
    for (int t = 0; t < 200; ++t) {
        Rational a(d(rng), 1 + std::abs(d(rng)));
        Rational b(d(rng), 1 + std::abs(d(rng)));
        a.canonicalize();
        b.canonicalize();
        Rational s = a + b - b;
        EXPECT_EQ(s, a);
        if (a != 0 && b != 0) {
            Rational p = (a / b) * (b / a);
            EXPECT_EQ(p, 1);
        }
        EXPECT_GT(a.get_den(), 0);
    }
}

TEST(Poly, Derivative) {
    Poly p{0, -2, 1};
    EXPECT_EQ(derivative(p, 1), (Poly{-2, 2}));
    EXPECT_TRUE(derivative(p, 3).is_zero());
    EXPECT_EQ(derivative(Poly::monomial(3), 2), Poly::monomial(1, 6));
    EXPECT_EQ(Poly().degree(), -1);
}

TEST(Poly, ShiftCompose) {
    EXPECT_EQ(shift_compose(Poly::monomial(2), 1), (Poly{1, 2, 1}));
    EXPECT_EQ(shift_compose(Poly{-1, 1}, 1), Poly::x());
    EXPECT_EQ(shift_compose(Poly(1), 5), Poly(1));
}

TEST(Poly, ArithmeticAndEvaluation) {
    Poly a{1, 1};
    Poly b = pow(a, 3);
    EXPECT_EQ(b, (Poly{1, 3, 3, 1}));
    EXPECT_EQ(evaluate(b, Rational(1, 2)), Rational(27, 8));
    EXPECT_EQ(substitute_power(a, 2), (Poly{1, 0, 1}));
    EXPECT_EQ(shifted_power(2, 2), (Poly{4, -4, 1}));
    EXPECT_TRUE((b - b).is_zero());
    EXPECT_EQ(to_string(Poly{0, -2, 1}), "x^2 - 2*x");
}

TEST(Solve, Examples) {
    RationalMatrix A{{1, 1}, {1, 3}};
    auto x = solve_linear(A, {1, 0});
    EXPECT_EQ(x[0], Rational(3, 2));
    EXPECT_EQ(x[1], Rational(-1, 2));
    auto y = solve_linear(RationalMatrix::identity(3), {1, 2, 3});
    EXPECT_TRUE(same(y, {1, 2, 3}));
    EXPECT_EQ(solve_linear(RationalMatrix{{2}}, {5})[0], Rational(5, 2));
    EXPECT_THROW(solve_linear(RationalMatrix{{1, 2}, {2, 4}}, {1, 1}), SingularMatrix);
}

TEST(Solve, Nullspace) {
    EXPECT_TRUE(nullspace(RationalMatrix::identity(2)).empty());
    EXPECT_EQ(nullspace(RationalMatrix(1, 2)).size(), 2u);
    auto ns = nullspace(RationalMatrix{{1, 1}});
    ASSERT_EQ(ns.size(), 1u);
    EXPECT_EQ(ns[0][0], -ns[0][1]);
    EXPECT_NE(ns[0][0], 0);
}

namespace {

RationalMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<long> d(-9, 9);
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = frac(d(rng), 1 + std::abs(d(rng)));
    return m;
}

RationalVector mat_vec(const RationalMatrix& A, const RationalVector& x) {
    RationalVector b(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) b[i] += A(i, j) * x[j];
    return b;
}

}  // namespace

TEST(Solve, RoundTripRandom) {
    std::mt19937 rng(11);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + t % 7;
        RationalMatrix A = random_matrix(rng, n, n);
        RationalVector b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = frac(static_cast<long>(i) - 2, 3);
        RationalVector x;
        try {
            x = solve_linear(A, b);
        } catch (const SingularMatrix&) {
            continue;
        }
        EXPECT_TRUE(same(mat_vec(A, x), b));
    }
}

TEST(Solve, RankDeficientNullspaceAgreesWithSparse) {
    std::mt19937 rng(3);
    for (int t = 0; t < 25; ++t) {
        const std::size_t r = 2 + t % 4, c = 3 + t % 5;
        RationalMatrix base = random_matrix(rng, r, c);
        RationalMatrix mix = random_matrix(rng, r + 3, r);
        RationalMatrix A = mix * base;  // rank <= r
        auto ns = nullspace(A);
        EXPECT_EQ(ns.size() + rank(A), c);
        for (const auto& v : ns) EXPECT_TRUE(same(mat_vec(A, v), RationalVector(A.rows())));

        SparseSystem sys(c);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            SparseSystem::Row row;
            for (std::size_t j = 0; j < c; ++j) row[j] = A(i, j);
            sys.add(row, 0);
        }
        auto sol = sys.solve();
        EXPECT_TRUE(sol.consistent);
        EXPECT_EQ(sol.rank, rank(A));
        EXPECT_EQ(sol.nullspace.size(), ns.size());
        for (const auto& v : sol.nullspace) EXPECT_TRUE(same(mat_vec(A, v), RationalVector(A.rows())));
    }
}

TEST(Solve, SparseInconsistent) {
    SparseSystem sys(2);
    sys.add({{0, 1}, {1, 1}}, 1);
    sys.add({{0, 2}, {1, 2}}, 3);
    auto sol = sys.solve();
    EXPECT_FALSE(sol.consistent);
    EXPECT_EQ(sol.inconsistent_equation, 1u);
}

TEST(Solve, SparseParticular) {
    SparseSystem sys(3);
    sys.add({{0, 1}, {1, 1}, {2, 1}}, 6);
    sys.add({{1, 1}, {2, -1}}, 0);
    sys.add({{0, 1}, {2, -1}}, 0);
    auto sol = sys.solve();
    ASSERT_TRUE(sol.consistent);
    EXPECT_TRUE(sol.nullspace.empty());
    EXPECT_TRUE(same(sol.particular, {2, 2, 2}));
}

TEST(Ldlt, PositiveAndQuasi) {
    RationalMatrix G{{1, 1, 2}, {1, 3, 6}, {2, 6, 24}};
    auto f = ldlt(G);
    EXPECT_TRUE(same(f.D, {1, 2, 12}));
    RationalMatrix S{{0, 1}, {1, 0}};
    EXPECT_THROW(ldlt(S, Definiteness::quasi), NotPositiveDefinite);
    RationalMatrix Q{{1, 0}, {0, -1}};
    EXPECT_THROW(ldlt(Q), NotPositiveDefinite);
    EXPECT_TRUE(same(ldlt(Q, Definiteness::quasi).D, {1, -1}));
    EXPECT_TRUE(is_positive_semidefinite(RationalMatrix{{0, 0}, {0, 1}}));
    EXPECT_FALSE(is_positive_semidefinite(RationalMatrix{{0, 1}, {1, 1}}));
    EXPECT_FALSE(is_positive_semidefinite(RationalMatrix{{1, 2}, {2, 1}}));
}

TEST(Banded, ProductBandwidthStructural) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> d(-5, 5);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 12, l1 = t % 3, u1 = (t / 3) % 3, l2 = (t + 1) % 4, u2 = t % 2;
        BandedOperator a(n, l1, u1), b(n, l2, u2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (a.in_band(i, j)) a.set(i, j, d(rng));
                if (b.in_band(i, j)) b.set(i, j, d(rng));
            }
        BandedOperator p = a * b;
        EXPECT_LE(p.lower_bandwidth(), l1 + l2);
        EXPECT_LE(p.upper_bandwidth(), u1 + u2);
        RationalMatrix dense = a.to_dense() * b.to_dense();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (!p.in_band(i, j)) EXPECT_EQ(dense(i, j), 0);
                else EXPECT_EQ(dense(i, j), p.at(i, j));
            }
    }
}

TEST(Banded, SetOutsideBandThrows) {
    BandedOperator a(4, 1, 0);
    EXPECT_THROW(a.set(0, 1, 1), BandViolation);
    EXPECT_NO_THROW(a.set(0, 1, 0));
    EXPECT_EQ(trusted_rows(10, 3), 7u);
}
