#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "opfold/measures.hpp"
#include "test_util.hpp"

using namespace opfold;
using opfold::testing_util::same;

TEST(Moments, Laguerre) {
    EXPECT_EQ(laguerre_moments(0, 4).moment(3), 6);
    EXPECT_EQ(laguerre_moments(2, 4).moment(1), 6);
    EXPECT_EQ(laguerre_moments(0, 4).moment(0), 1);
    EXPECT_THROW(laguerre_moments(0, 4).moment(4), InsufficientMoments);
}

TEST(Moments, Hermite) {
    auto h = hermite_moments(9);
    EXPECT_TRUE(same(h.moments, {1, 0, frac(1, 2), 0, frac(3, 4), 0, frac(15, 8), 0, frac(105, 16)}));
}

TEST(Moments, ChristoffelShift) {
    auto mu = laguerre_moments(0, 12);
    auto s0 = christoffel_shift(mu, 0, 2);
    EXPECT_EQ(s0.moment(0), 2);
    EXPECT_EQ(s0.size(), 10u);
    for (std::size_t k = 0; k < s0.size(); ++k) EXPECT_EQ(s0.moment(k), mu.moment(k + 2));
    auto s1 = christoffel_shift(mu, 1, 2);
    EXPECT_EQ(s1.moment(0), 1);
    const Rational c = frac(-7, 3);
    auto sc = christoffel_shift(mu, c, 2);
    for (std::size_t k = 0; k < sc.size(); ++k)
        EXPECT_EQ(sc.moment(k), mu.moment(k + 2) - 2 * c * mu.moment(k + 1) + c * c * mu.moment(k));
    EXPECT_THROW(christoffel_shift(laguerre_moments(0, 2), 0, 2), InsufficientMoments);
}

TEST(Moments, ShiftedHankelPositivity) {
    // (x-1)^2 e^{-x} is a positive weight; (x-1)^3 e^{-x} changes sign.
    auto mu = laguerre_moments(0, 40);
    EXPECT_FALSE(christoffel_shift(mu, 1, 2).first_nonpositive_hankel(15).has_value());
    EXPECT_TRUE(christoffel_shift(mu, 1, 3).first_nonpositive_hankel(15).has_value());
}

TEST(Sobolev, ReferenceFormValues) {
    auto B = sobolev_form(fixtures::reference_spec());
    EXPECT_EQ(B(1, 1), 1);
    EXPECT_EQ(B(Poly::x(), Poly::x()), 3);
    EXPECT_EQ(B(Poly::x(), Poly::monomial(2)), 6);
}

TEST(Sobolev, Gram) {
    auto B = sobolev_form(fixtures::reference_spec());
    EXPECT_TRUE(same(gram_matrix(B, 2), RationalMatrix{{1, 1, 2}, {1, 3, 6}, {2, 6, 24}}));
    EXPECT_TRUE(same(gram_matrix(B, 0), RationalMatrix{{1}}));
    auto B2 = measure_form(christoffel_shift(laguerre_moments(0, 10), 0, 2));
    EXPECT_TRUE(same(gram_matrix(B2, 1), RationalMatrix{{2, 6}, {6, 24}}));
}

TEST(Sobolev, GramSymmetricPositiveAcrossGrid) {
    for (unsigned alpha : {0u, 1u, 2u})
        for (long c : {0L, 1L})
            for (unsigned N : {1u, 2u}) {
                auto B = sobolev_form(fixtures::spec(alpha, c, N, 50));
                auto G = gram_matrix(B, 20);
                EXPECT_TRUE(same(G, G.transpose()));
                EXPECT_NO_THROW(ldlt(G));
            }
}

TEST(Sobolev, ArbitraryFormIsSymmetric) {
    SobolevSpec s = fixtures::reference_spec(30);
    s.c = frac(1, 2);
    s.M = RationalMatrix{{2, 1}, {1, 3}};
    auto B = sobolev_form(s);
    Poly f{1, -2, 0, 5};
    Poly g(std::vector<Rational>{frac(1, 3), 4, 1});
    EXPECT_EQ(B(f, g), B(g, f));
}

TEST(Sobolev, InsufficientMoments) {
    auto B = sobolev_form(fixtures::reference_spec(5));
    EXPECT_NO_THROW(B(Poly::monomial(2), Poly::monomial(2)));
    EXPECT_THROW(B(Poly::monomial(3), Poly::monomial(2)), InsufficientMoments);
    EXPECT_THROW(gram_matrix(B, 3), InsufficientMoments);
}

TEST(Sobolev, MassValidation) {
    SobolevSpec s = fixtures::reference_spec(10);
    s.M = RationalMatrix{{0, 1}, {0, 1}};
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.M = RationalMatrix{{1, 2}, {2, 1}};
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.M = RationalMatrix{{1}};
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.M = RationalMatrix{{1, 1}, {1, 1}};
    EXPECT_NO_THROW(s.validate());
}

TEST(Symmetry, ReferenceSpecDegreeSix) {
    auto B = sobolev_form(fixtures::reference_spec());
    EXPECT_TRUE(symmetry_check(B, 1, 6).holds);
}

TEST(Symmetry, MassMovedAwayFromCentre) {
    SobolevSpec s = fixtures::reference_spec();
    s.c = 1;
    auto B = sobolev_form(s);
    auto r = symmetry_check(B, 1, 6, 0);
    ASSERT_FALSE(r.holds);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_NE(r.lhs, r.rhs);
    // brute force: the reported pair is the first failing one in row-major order
    const auto [i, j] = *r.counterexample;
    EXPECT_EQ(B(Poly::monomial(i + 2), Poly::monomial(j + 1)), r.lhs);
    EXPECT_EQ(B(Poly::monomial(i + 1), Poly::monomial(j + 2)), r.rhs);
    EXPECT_TRUE(symmetry_check(B, 1, 6, 1).holds);
}

TEST(Symmetry, PureMeasureAlwaysSymmetric) {
    auto B = measure_form(laguerre_moments(1, 40));
    for (unsigned N = 0; N < 4; ++N) EXPECT_TRUE(symmetry_check(B, N, 8).holds);
}

TEST(Symmetry, RequiresMoments) {
    auto B = sobolev_form(fixtures::reference_spec(10));
    EXPECT_THROW(symmetry_check(B, 1, 6), InsufficientMoments);
}
