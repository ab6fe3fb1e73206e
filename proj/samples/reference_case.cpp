// Walks the alpha = 0 Laguerre-Sobolev case end to end and prints a few values.
#include <iostream>

#include "opfold/opfold.hpp"

using namespace opfold;

int main() {
    SobolevSpec spec{laguerre_moments(0, 70), 0, 1, top_derivative_mass(1)};
    const auto form = sobolev_form(spec);
    const auto s = monic_sequence(form, 31);
    std::cout << "s_1 = " << s[1] << "\ns_2 = " << s[2] << "\nnorms:";
    for (std::size_t n = 0; n < 4; ++n) std::cout << ' ' << s.norms_sq[n];
    std::cout << "\n";

    const auto H = banded_recurrence(s, form, 0, 1);
    std::cout << "a_0^2 = " << H.orthonormal(0, 2).square << ", b_0^2 = " << H.orthonormal(0, 1).square
              << ", c_0 = " << H.monic.at(0, 0) << "\n";

    const auto R = build_matrix_sequence(s, 1);
    const auto P = monic_normalize(R);
    const auto p = monic_sequence(measure_form(christoffel_shift(spec.base, 0, 2)), 31);
    const auto Q = monic_normalize(build_matrix_sequence(p, 1));
    const auto lu = block_lu(block_jacobi(P));
    std::cout << "zeta_1 = [[" << lu.zetas[1](0, 0) << ", " << lu.zetas[1](0, 1) << "], [" << lu.zetas[1](1, 0) << ", "
              << lu.zetas[1](1, 1) << "]]\n";
    const auto ul = darboux_swap(lu.L, lu.U);
    std::cout << "UL equals the Q block Jacobi matrix: " << std::boolalpha
              << (ul == block_jacobi(Q).leading(ul.blocks())) << "\n";

    const auto ref = reference_operator();
    std::cout << "order-8 operator eigen-check on R_0..R_8: " << verify_eigen(R, ref.op, ref.ladder, 0, 8).passed() << "\n";
    const auto found = discover_operator(R, ref.ladder, 8, 6, 12);
    std::cout << "rediscovered by exact solve: " << (found.op == ref.op) << " (" << found.unknowns << " unknowns)\n";
    const auto mo = min_order_check(R, 8, 12);
    std::cout << "least order: " << *mo.min_order << "\n";
}
