#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.hpp"
#include "opfold/bispec.hpp"
#include "test_util.hpp"

using namespace opfold;
using opfold::testing_util::same;

namespace {

PolyMatrix row(std::initializer_list<Poly> r) { return PolyMatrix({r}); }

MatrixPolySequence hermite_fold(std::size_t blocks) {
    return build_matrix_sequence(hermite_sequence(2 * blocks + 1), 1, blocks);
}

EigenvalueLadder hermite_ladder() {
    return {1, [](std::size_t m) { return Rational(-2 * static_cast<long>(m)); }};
}

RightDifferentialOperator folded_hermite_operator() {
    // Unique order-2 fit; checked against the scalar operator in HermiteFold.
    return discover_operator(hermite_fold(10), hermite_ladder(), 2, 2, 8).op;
}

}  // namespace

TEST(ApplyRight, Examples) {
    const auto ref = reference_operator();
    EXPECT_TRUE(apply_right(row({1, 0}), ref.op).is_zero());
    EXPECT_EQ(apply_right(row({-1, 1}), ref.op), row({-3, 3}));
    EXPECT_EQ(apply_right(row({Poly::x(), -2}), ref.op), row({Poly{0, 9}, -18}));
    EXPECT_THROW(apply_right(PolyMatrix(1, 3), ref.op), DimensionMismatch);
}

TEST(ApplyRight, Linear) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    const PolyMatrix F = pp.R[3], G = pp.R[5];
    EXPECT_EQ(apply_right(F + G, ref.op), apply_right(F, ref.op) + apply_right(G, ref.op));
    auto twice = ref.op;
    for (auto& D : twice.coeffs) D = D + D;
    EXPECT_EQ(apply_right(F, twice), apply_right(F, ref.op) + apply_right(F, ref.op));
}

TEST(Reference, Transcription) {
    const auto ref = reference_operator();
    EXPECT_EQ(ref.op.order(), 8u);
    EXPECT_TRUE(same(ref.ladder(1), RationalMatrix{{9, 0}, {0, 27}}));
    EXPECT_TRUE(same(ref.ladder(0), RationalMatrix{{0, 0}, {0, 3}}));
    EXPECT_EQ(ref.op.coeffs[0], PolyMatrix({{0, 0}, {-3, 3}}));
    const Poly y5 = Poly::monomial(5), y6 = Poly::monomial(6);
    EXPECT_EQ(ref.op.coeffs[7](0, 0), Poly(1408) * y5);
    EXPECT_EQ(ref.op.coeffs[7](1, 0), Poly(-128) * y6);
    EXPECT_EQ(ref.op.coeffs[8], PolyMatrix({{Poly(64) * y6, Poly(0)}, {Poly(0), Poly(64) * y6}}));
    // A sample of expanded products.
    EXPECT_EQ(ref.op.coeffs[2](1, 0), (Poly{0, -2754, -906}));
    EXPECT_EQ(ref.op.coeffs[4](1, 1), (Poly{0, 0, 57204, 7080, 4}));
    for (std::size_t k = 0; k <= 8; ++k) EXPECT_LE(degree(ref.op.coeffs[k]), static_cast<int>(std::min<std::size_t>(k, 6)));
}

TEST(VerifyEigen, ReferenceOperator) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    auto rep = verify_eigen(pp.R, ref.op, ref.ladder, 0, 15);
    EXPECT_TRUE(rep.passed()) << rep.failures().size();
}

TEST(VerifyEigen, LadderFault) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    auto ladder = ref.ladder;
    ladder.scalar = [base = ref.ladder.scalar](std::size_t m) -> Rational { return base(m) + (m / 2 == 3 ? 1 : 0); };
    auto rep = verify_eigen(pp.R, ref.op, ladder, 0, 8);
    EXPECT_EQ(rep.failures(), std::vector<std::size_t>{3});
}

TEST(VerifyEigen, ZeroOperator) {
    const auto& pp = fixtures::ReferencePipeline::get();
    auto zero = make_operator(1, {PolyMatrix(2, 2)});
    EXPECT_EQ(zero.order(), 0u);
    EXPECT_TRUE(verify_eigen(pp.R, zero, zero_ladder(1), 0, 8).passed());
}

TEST(VerifyEigen, EverySingleCoefficientPerturbationIsDetected) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    for (std::size_t k = 0; k <= 8; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t d = 0; d <= 6; ++d) {
                    auto op = ref.op;
                    Poly& e = op.coeffs[k](i, j);
                    e.set_coeff(d, e.coeff(d) + 1);
                    EXPECT_FALSE(verify_eigen(pp.R, op, ref.ladder, 0, 8).passed()) << k << i << j << d;
                }
}

TEST(Discover, RecoversReference) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    auto found = discover_operator(pp.R, ref.ladder, 8, 6, 12);
    EXPECT_EQ(found.nullity, 0u);
    EXPECT_EQ(found.op, ref.op);
}

TEST(Discover, ZeroLadder) {
    const auto& pp = fixtures::ReferencePipeline::get();
    auto found = discover_operator(pp.R, zero_ladder(1), 8, 6, 12);
    EXPECT_EQ(found.op, make_operator(1, {PolyMatrix(2, 2)}));
}

TEST(Discover, TooLowOrderIsInfeasible) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    EXPECT_THROW(discover_operator(pp.R, ref.ladder, 7, 6, 12), Infeasible);
    EXPECT_THROW(discover_operator(pp.R, ref.ladder, 8, 5, 12), Infeasible);
}

TEST(Discover, TooFewRowsIsUnderdetermined) {
    const auto ref = reference_operator();
    const auto& pp = fixtures::ReferencePipeline::get();
    try {
        discover_operator(pp.R, ref.ladder, 8, 6, 3);
        FAIL();
    } catch (const Underdetermined& e) {
        EXPECT_GT(e.nullity(), 0u);
    }
}

TEST(Discover, HermiteFold) {
    auto op = folded_hermite_operator();
    EXPECT_EQ(op.order(), 2u);
    auto R = hermite_fold(10);
    EXPECT_TRUE(verify_eigen(R, op, hermite_ladder(), 0, 9).passed());
    // Brute force: fold(D h_m) = -2m fold(h_m) for the scalar operator.
    const auto h = hermite_sequence(21);
    const auto D = hermite_operator(22);
    EXPECT_FALSE(first_scalar_mismatch(D, h).has_value());
    for (std::size_t m = 0; m < 20; ++m) {
        PolyMatrix F(1, 2), G(1, 2);
        auto a = fold_decompose(apply(D, h[m]), 1), b = fold_decompose(h[m], 1);
        for (std::size_t c = 0; c < 2; ++c) {
            F(0, c) = a[c];
            G(0, c) = b[c];
        }
        EXPECT_EQ(apply_right(G, op), F) << m;
    }
}

TEST(MinOrder, ReferenceSequence) {
    const auto& pp = fixtures::ReferencePipeline::get();
    auto rep = min_order_check(pp.R, 8, 12);
    ASSERT_TRUE(rep.min_order.has_value());
    EXPECT_EQ(*rep.min_order, 8u);
    EXPECT_EQ(rep.constant_multipliers, 1u);
    ASSERT_EQ(rep.levels.size(), 9u);
    for (std::size_t m = 0; m < 8; ++m) EXPECT_FALSE(rep.levels[m].feasible) << m;
    EXPECT_TRUE(rep.levels[8].feasible);
}

TEST(MinOrder, Hermite) {
    auto rep = min_order_check(hermite_fold(14), 4, 12);
    ASSERT_TRUE(rep.min_order.has_value());
    EXPECT_EQ(*rep.min_order, 2u);
    // R_n are diagonal here, so diag(a, b) commutes with the whole family.
    EXPECT_EQ(rep.constant_multipliers, 2u);
}

TEST(Scalar, HermiteDiscovery) {
    const auto h = hermite_sequence(21);
    auto D = discover_scalar_operator(h, [](std::size_t m) { return Rational(-2 * static_cast<long>(m)); }, 2, 2, 15);
    const auto ref = hermite_operator(22);
    EXPECT_EQ(D.coeffs, ref.coeffs);
}

TEST(Unitarity, ExactInCyclotomicField) {
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(1), (Poly{-1, 1}));
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(2), (Poly{1, 1}));
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(6), (Poly{1, -1, 1}));
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(12), (Poly{1, 0, -1, 0, 1}));
    for (unsigned N = 0; N < 12; ++N) EXPECT_TRUE(fold_conjugation_data(N).unitary_up_to_scale()) << N;
    auto d = fold_conjugation_data(1);
    auto B = d.B<double>();
    EXPECT_NEAR(B(1, 1).real(), -1, 1e-15);
    EXPECT_NEAR(B(1, 1).imag(), 0, 1e-15);
    EXPECT_EQ(d.a_exponents[1], frac(1, 2));
    // A wrong exponent breaks it.
    d.b_exponents(1, 1) = 0;
    EXPECT_FALSE(d.unitary_up_to_scale());
}

TEST(Conjugation, HermiteGrid) {
    const auto h = hermite_sequence(21);
    const auto D = hermite_operator(22);
    for (std::size_t n = 0; n <= 6; ++n)
        for (Rational y0 : {frac(1, 4), frac(1, 2), Rational(1), Rational(3), Rational(10)}) {
            auto r = conjugation_eval(D, 1, h, n, y0);
            EXPECT_LT(r.deviation, 1e-10) << n << " " << y0;
            EXPECT_NEAR(r.rhs(0, 0).real(), -4.0 * n * to_double(evaluate(fold_decompose(h[2 * n], 1)[0], y0)), 1e-6);
        }
    EXPECT_THROW(conjugation_eval(D, 1, h, 1, Rational(0)), InvalidArgument);
    EXPECT_THROW(conjugation_eval(D, 1, h, 11, Rational(1)), InsufficientSequence);
}

TEST(Conjugation, LargerBlocksAndExtended) {
    const auto h = hermite_sequence(27);
    const auto D = hermite_operator(28);
    for (unsigned N : {2u, 3u})
        for (std::size_t n = 0; n <= 3; ++n) {
            EXPECT_LT(conjugation_eval(D, N, h, n, frac(1, 2)).deviation, 1e-9) << N << n;
            EXPECT_LT(conjugation_eval<long double>(D, N, h, n, frac(1, 2)).deviation, 1e-12L) << N << n;
        }
}

TEST(Conjugation, WrongEigenvaluesAreSeen) {
    const auto h = hermite_sequence(11);
    auto D = hermite_operator(12);
    D.eigenvalues[3] += 1;
    EXPECT_GT(conjugation_eval(D, 1, h, 1, Rational(1)).deviation, 1e-3);
}

TEST(Conjugation, ReferenceSequenceBothPaths) {
    const auto& pp = fixtures::ReferencePipeline::get();
    const auto ref = reference_operator();
    auto D = discover_scalar_operator(pp.s, ref.ladder.scalar, 8, 8, 24);
    EXPECT_EQ(D.order(), 8u);
    EXPECT_FALSE(first_scalar_mismatch(D, pp.s).has_value());
    for (std::size_t n = 0; n <= 6; ++n)
        for (Rational y0 : {frac(1, 4), frac(1, 2), Rational(1), Rational(3), Rational(10)}) {
            auto r = conjugation_eval(D, 1, pp.s, n, y0);
            auto direct = evaluate_right_action(pp.R[n], ref.op, y0);
            EXPECT_LT(max_deviation(r.lhs, direct), 1e-8) << n << " " << y0;
        }
}
