#pragma once

#include "opfold/measures.hpp"
#include "opfold/orthopoly.hpp"

namespace opfold::fixtures {

/// <f,g> = int f g e^{-x} dx + f'(0) g'(0)
inline SobolevSpec reference_spec(std::size_t moments = 80) {
    SobolevSpec s;
    s.base = laguerre_moments(0, moments);
    s.c = 0;
    s.N = 1;
    s.M = top_derivative_mass(1);
    return s;
}

inline SobolevSpec spec(unsigned alpha, const Rational& c, unsigned N, std::size_t moments) {
    SobolevSpec s;
    s.base = laguerre_moments(alpha, moments);
    s.c = c;
    s.N = N;
    s.M = top_derivative_mass(N);
    return s;
}

}  // namespace opfold::fixtures

#include "opfold/darboux.hpp"
#include "opfold/matfold.hpp"

namespace opfold::fixtures {

/// Everything derived from the reference Laguerre-Sobolev inner product, computed once.
struct ReferencePipeline {
    BilinearForm form;
    MonicSequence s;   // Sobolev
    MonicSequence p;   // x^2 e^{-x}
    MatrixPolySequence R, P, Q;
    BlockTridiagonal JP, JQ;

    static const ReferencePipeline& get() {
        static const ReferencePipeline pp = [] {
            ReferencePipeline x;
            x.form = sobolev_form(reference_spec(90));
            x.s = monic_sequence(x.form, 41);
            x.p = monic_sequence(measure_form(christoffel_shift(laguerre_moments(0, 90), 0, 2)), 41);
            x.R = build_matrix_sequence(x.s, 1);
            x.P = monic_normalize(x.R);
            x.Q = monic_normalize(build_matrix_sequence(x.p, 1));
            x.JP = block_jacobi(x.P);
            x.JQ = block_jacobi(x.Q);
            return x;
        }();
        return pp;
    }
};

}  // namespace opfold::fixtures
