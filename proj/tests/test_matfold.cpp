#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "opfold/matfold.hpp"
#include "test_util.hpp"

using namespace opfold;
using opfold::testing_util::same;

namespace {

PolyMatrix pm(std::initializer_list<std::initializer_list<Poly>> rows) { return PolyMatrix(rows); }

}  // namespace

TEST(Fold, Examples) {
    auto a = fold_decompose(Poly(1), 1);
    EXPECT_EQ(a[0], Poly(1));
    EXPECT_TRUE(a[1].is_zero());
    auto b = fold_decompose(Poly{-1, 1}, 1);
    EXPECT_EQ(b[0], Poly(-1));
    EXPECT_EQ(b[1], Poly(1));
    auto c = fold_decompose(Poly{0, -2, 1}, 1);
    EXPECT_EQ(c[0], Poly::x());
    EXPECT_EQ(c[1], Poly(-2));
}

TEST(Fold, ReassemblyRoundTrip) {
    const auto& pp = fixtures::ReferencePipeline::get();
    for (unsigned N = 0; N < 4; ++N)
        for (std::size_t n = 0; n < pp.s.size(); ++n) EXPECT_EQ(reassemble(fold_decompose(pp.s[n], N), N), pp.s[n]);
}

TEST(Fold, MatrixSequenceRows) {
    const auto& pp = fixtures::ReferencePipeline::get();
    EXPECT_EQ(pp.R[0], pm({{1, 0}, {-1, 1}}));
    EXPECT_EQ(pp.R[1](0, 0), Poly::x());
    EXPECT_EQ(pp.R[1](0, 1), Poly(-2));
    for (std::size_t n = 0; n < pp.R.size(); ++n) {
        EXPECT_EQ(degree(pp.R[n]), static_cast<int>(n));
        auto lead = leading_coefficient(pp.R[n], n);
        EXPECT_EQ(lead(0, 0), 1);
        EXPECT_EQ(lead(1, 1), 1);
        EXPECT_EQ(lead(0, 1), 0);
    }
    EXPECT_THROW(build_matrix_sequence(pp.s, 1, 30), InsufficientSequence);
}

TEST(Fold, MatrixGram) {
    const auto& pp = fixtures::ReferencePipeline::get();
    EXPECT_TRUE(matrix_gram(pp.R[0], pp.R[1], 1, pp.form).is_zero());
    EXPECT_TRUE(same(matrix_gram(pp.R[1], pp.R[1], 1, pp.form), RationalMatrix{{12, 0}, {0, 90}}));
    for (std::size_t n = 0; n < 8; ++n)
        for (std::size_t m = 0; m < 8; ++m) {
            auto G = matrix_gram(pp.R[n], pp.R[m], 1, pp.form);
            if (n != m) {
                EXPECT_TRUE(G.is_zero());
            } else {
                EXPECT_TRUE(same(G, diagonal({pp.s.norms_sq[2 * n], pp.s.norms_sq[2 * n + 1]})));
            }
        }
}

TEST(MatrixTTRR, SpotValues) {
    const auto& pp = fixtures::ReferencePipeline::get();
    MatrixPolySequence R = pp.R;
    R.mats.resize(13);
    auto rec = matrix_ttrr(R, pp.form);
    EXPECT_EQ(rec.B(0, 0, 0).square, 4);  // {B_0}_{0,0} = 2
    EXPECT_EQ(rec.coeffs.diag(0)(0, 0), 2);
    EXPECT_EQ(rec.coeffs.diag(0)(1, 1), 7);
    EXPECT_EQ(rec.B(0, 0, 1).square, 8);
    for (std::size_t n = 0; n + 1 < rec.coeffs.blocks(); ++n) EXPECT_EQ(rec.coeffs.super(n)(0, 1), 0);
}

TEST(MatrixTTRR, BlocksAreFoldedRecurrence) {
    const auto& pp = fixtures::ReferencePipeline::get();
    MatrixPolySequence R = pp.R;
    R.mats.resize(13);
    auto rec = matrix_ttrr(R, pp.form);
    auto H = banded_recurrence(pp.s, 0, 1);
    for (std::size_t n = 0; n < rec.coeffs.blocks(); ++n)
        for (std::size_t k = (n ? n - 1 : 0); k <= std::min(n + 1, rec.coeffs.blocks() - 1); ++k)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    EXPECT_EQ(rec.coeffs.block(n, k)(i, j), H.monic.at(2 * n + i, 2 * k + j));
}

TEST(MatrixTTRR, MatchesClosedFormsUpToSigns) {
    const auto& pp = fixtures::ReferencePipeline::get();
    MatrixPolySequence R = pp.R;
    R.mats.resize(13);
    auto rec = matrix_ttrr(R, pp.form);
    auto S = sign_similarity(rec, reference_ab(0));
    EXPECT_EQ(S, (std::vector<int>{1, -1}));
    for (long n = 0; n <= 10; ++n) {
        auto ref = reference_ab(n);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                auto a = rec.A(n, i, j), b = rec.B(n, i, j);
                EXPECT_EQ(a.square, ref.A(i, j).square) << n << i << j;
                EXPECT_EQ(b.square, ref.B(i, j).square) << n << i << j;
                EXPECT_EQ(S[i] * S[j] * a.sign, ref.A(i, j).sign) << n << i << j;
                EXPECT_EQ(S[i] * S[j] * b.sign, ref.B(i, j).sign) << n << i << j;
            }
    }
}

TEST(MatrixTTRR, SymmetricDiagonalBlocks) {
    const auto& pp = fixtures::ReferencePipeline::get();
    MatrixPolySequence R = pp.R;
    R.mats.resize(10);
    auto rec = matrix_ttrr(R, pp.form);
    for (std::size_t n = 0; n < rec.coeffs.blocks(); ++n) EXPECT_EQ(rec.B(n, 0, 1), rec.B(n, 1, 0));
}

TEST(Monic, Normalize) {
    const auto& pp = fixtures::ReferencePipeline::get();
    EXPECT_TRUE(same(evaluate(pp.P[0], 0), RationalMatrix::identity(2)));
    for (std::size_t n = 0; n < pp.P.size(); ++n) EXPECT_TRUE(same(coefficient(pp.P[n], n), RationalMatrix::identity(2)));
    MatrixPolySequence bad;
    bad.N = 1;
    bad.mats.push_back(pm({{1, 0}, {2, 0}}));
    try {
        monic_normalize(bad);
        FAIL();
    } catch (const SingularLeading& e) {
        EXPECT_EQ(e.index(), 0u);
    }
}

TEST(Monic, LeadingDisplay) {
    const auto& pp = fixtures::ReferencePipeline::get();
    for (long n = 2; n <= 10; ++n) {
        auto ref = reference_leading(n);
        auto lead = leading_coefficient(pp.R[n], n);
        const Rational nu0 = pp.s.norms_sq[2 * n], nu1 = pp.s.norms_sq[2 * n + 1];
        EXPECT_EQ(ref(0, 0).square, lead(0, 0) * lead(0, 0) / nu0) << n;
        EXPECT_EQ(ref(1, 0).square, lead(1, 0) * lead(1, 0) / nu1) << n;
        // The displayed (1,1) entry differs by exactly (2n+1)^2.
        EXPECT_EQ(ref(1, 1).square, (2 * n + 1) * (2 * n + 1) * lead(1, 1) * lead(1, 1) / nu1) << n;
        EXPECT_EQ(ref(1, 1).sign, -1);
    }
}

TEST(BlockJacobi, PartnerFamilies) {
    const auto& pp = fixtures::ReferencePipeline::get();
    EXPECT_TRUE(same(pp.JP.diag(0), RationalMatrix{{0, 2}, {-3, 9}}));
    // y P_n expansion residual is zero by construction; check one row explicitly.
    PolyMatrix lhs = multiply_by_monomial(pp.P[3], 1);
    PolyMatrix rhs = pp.P[4] + pp.JP.diag(3) * pp.P[3] + pp.JP.sub(3) * pp.P[2];
    EXPECT_EQ(lhs, rhs);
    EXPECT_THROW(block_jacobi(pp.R), InvalidArgument);
}

TEST(Interlace, FullSweep) {
    const auto& pp = fixtures::ReferencePipeline::get();
    auto lu = block_lu(pp.JP);
    auto r = w_interlace_check(pp.P, pp.Q, lu.zetas, 20);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.checked, 21u);
    auto bad = lu.zetas;
    bad[7](0, 0) += 1;
    auto r2 = w_interlace_check(pp.P, pp.Q, bad, 20);
    ASSERT_FALSE(r2.passed());
    EXPECT_EQ(*r2.first_failure, 7u);
}

TEST(Darboux, GeneralSize) {
    // N = 2: 3x3 blocks from the Sobolev form with mass on f''(0) g''(0).
    auto spec = fixtures::spec(1, 0, 2, 90);
    auto B = sobolev_form(spec);
    auto s = monic_sequence(B, 35);
    auto p = monic_sequence(measure_form(christoffel_shift(spec.base, 0, 3)), 35);
    auto P = monic_normalize(build_matrix_sequence(s, 2));
    auto Q = monic_normalize(build_matrix_sequence(p, 2));
    auto JP = block_jacobi(P), JQ = block_jacobi(Q);
    auto lu = block_lu(JP);
    auto ul = darboux_swap(lu.L, lu.U);
    EXPECT_EQ(ul, JQ.leading(ul.blocks()));
    EXPECT_TRUE(w_interlace_check(P, Q, lu.zetas, 2 * ul.blocks()).passed());
}
