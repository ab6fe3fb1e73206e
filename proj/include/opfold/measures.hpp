#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opfold/errors.hpp"
#include "opfold/linsolve.hpp"
#include "opfold/matrix.hpp"
#include "opfold/poly.hpp"
#include "opfold/rational.hpp"

namespace opfold {

/// A linear functional on polynomials given by its moments m_k = L[x^k].
struct MomentFunctional {
    std::vector<Rational> moments;
    std::string label;

    std::size_t size() const noexcept { return moments.size(); }

    const Rational& moment(std::size_t k) const {
        if (k >= moments.size())
            throw InsufficientMoments(label + ": moment " + std::to_string(k) + " requested, " +
                                      std::to_string(moments.size()) + " available");
        return moments[k];
    }

    /// Hankel matrix (m_{i+j})_{i,j<=n}.
    RationalMatrix hankel(std::size_t n) const {
        RationalMatrix h(n + 1, n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j) h(i, j) = moment(i + j);
        return h;
    }

    /// First n <= n_max whose leading Hankel minor is not positive, if any.
    std::optional<std::size_t> first_nonpositive_hankel(std::size_t n_max) const {
        try {
            ldlt(hankel(n_max), Definiteness::positive);
        } catch (const NotPositiveDefinite& e) {
            return e.index();
        }
        return std::nullopt;
    }
};

/// Moments of x^alpha e^{-x} dx on [0, inf): m_k = (k + alpha)!.
inline MomentFunctional laguerre_moments(unsigned alpha, std::size_t count) {
    MomentFunctional mu;
    mu.label = "laguerre(alpha=" + std::to_string(alpha) + ")";
    mu.moments.reserve(count);
    for (std::size_t k = 0; k < count; ++k) mu.moments.emplace_back(factorial(k + alpha));
    return mu;
}

/// Moments of e^{-x^2} dx / sqrt(pi): m_{2k} = (2k-1)!! / 2^k, odd moments vanish.
inline MomentFunctional hermite_moments(std::size_t count) {
    MomentFunctional mu;
    mu.label = "hermite";
    Rational even = 1;
    for (std::size_t k = 0; k < count; ++k) {
        if (k % 2) {
            mu.moments.emplace_back(0);
        } else {
            mu.moments.push_back(even);
            even *= frac(static_cast<long>(k + 1), 2);
        }
    }
    return mu;
}

/// Moments of (x - c)^power d mu by binomial expansion.
inline MomentFunctional christoffel_shift(const MomentFunctional& mu, const Rational& c, unsigned power) {
    if (mu.size() <= power)
        throw InsufficientMoments("christoffel_shift needs more than " + std::to_string(power) + " moments");
    MomentFunctional r;
    r.label = "(x-" + c.get_str() + ")^" + std::to_string(power) + " " + mu.label;
    std::vector<Rational> w(power + 1);  // coefficients of (x - c)^power
    for (unsigned i = 0; i <= power; ++i) {
        Rational neg_c_pow = 1;
        for (unsigned t = 0; t < power - i; ++t) neg_c_pow *= -c;
        w[i] = Rational(binomial(power, i)) * neg_c_pow;
    }
    const std::size_t count = mu.size() - power;
    r.moments.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        for (unsigned i = 0; i <= power; ++i)
            if (w[i] != 0) r.moments[k] += w[i] * mu.moments[k + i];
    return r;
}

/// <f,g> = L[f g] + sum_{j,k} M_{jk} f^(j)(c) g^(k)(c).
struct SobolevSpec {
    MomentFunctional base;
    Rational c = 0;
    unsigned N = 0;
    RationalMatrix M;

    /// Throws InvalidArgument unless M is (N+1)x(N+1), symmetric and PSD.
    void validate() const {
        if (M.rows() != N + 1 || M.cols() != N + 1)
            throw InvalidArgument("mass matrix must be " + std::to_string(N + 1) + "x" + std::to_string(N + 1));
        for (std::size_t i = 0; i <= N; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (M(i, j) != M(j, i)) throw InvalidArgument("mass matrix is not symmetric");
        if (!is_positive_semidefinite(M)) throw InvalidArgument("mass matrix is not positive semi-definite");
    }
};

/// diag(0, ..., 0, mass): a single derivative mass of order N at c.
inline RationalMatrix top_derivative_mass(unsigned N, const Rational& mass = 1) {
    RationalMatrix M(N + 1, N + 1);
    M(N, N) = mass;
    return M;
}

/// Symmetric bilinear form on polynomials, valid while deg f + deg g <= max_total_degree.
class BilinearForm {
public:
    using Fn = std::function<Rational(const Poly&, const Poly&)>;

    BilinearForm() = default;
    BilinearForm(Fn fn, int max_total_degree, std::string label = {})
        : fn_(std::move(fn)), max_total_(max_total_degree), label_(std::move(label)) {}

    Rational operator()(const Poly& f, const Poly& g) const {
        if (f.degree() + g.degree() > max_total_)
            throw InsufficientMoments("form '" + label_ + "' supports total degree " +
                                      std::to_string(max_total_) + ", asked for " +
                                      std::to_string(f.degree() + g.degree()));
        return fn_(f, g);
    }

    int max_total_degree() const noexcept { return max_total_; }
    /// Highest n for which the (n+1)x(n+1) Gram matrix is available.
    int max_degree() const noexcept { return max_total_ / 2; }
    const std::string& label() const noexcept { return label_; }

private:
    Fn fn_;
    int max_total_ = -1;
    std::string label_;
};

inline Rational apply_functional(const MomentFunctional& mu, const Poly& f, const Poly& g) {
    Rational s = 0;
    const auto& a = f.coefficients();
    const auto& b = g.coefficients();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) s += a[i] * b[j] * mu.moments[i + j];
    }
    return s;
}

inline BilinearForm measure_form(MomentFunctional mu) {
    const int max_total = static_cast<int>(mu.size()) - 1;
    std::string label = mu.label;
    return BilinearForm([mu = std::move(mu)](const Poly& f, const Poly& g) { return apply_functional(mu, f, g); },
                        max_total, std::move(label));
}

inline BilinearForm sobolev_form(const SobolevSpec& spec) {
    spec.validate();
    const int max_total = static_cast<int>(spec.base.size()) - 1;
    auto eval = [spec](const Poly& f, const Poly& g) {
        Rational s = apply_functional(spec.base, f, g);
        if (spec.M.is_zero()) return s;
        std::vector<Rational> df(spec.N + 1), dg(spec.N + 1);
        for (unsigned k = 0; k <= spec.N; ++k) {
            df[k] = evaluate(derivative(f, k), spec.c);
            dg[k] = evaluate(derivative(g, k), spec.c);
        }
        for (unsigned j = 0; j <= spec.N; ++j)
            for (unsigned k = 0; k <= spec.N; ++k)
                if (spec.M(j, k) != 0) s += spec.M(j, k) * df[j] * dg[k];
        return s;
    };
    return BilinearForm(std::move(eval), max_total, "sobolev[" + spec.base.label + ", c=" + spec.c.get_str() + "]");
}

/// G_{ij} = B(x^i, x^j), 0 <= i, j <= n.
inline RationalMatrix gram_matrix(const BilinearForm& form, std::size_t n) {
    RationalMatrix g(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = i; j <= n; ++j) {
            g(i, j) = form(Poly::monomial(i), Poly::monomial(j));
            g(j, i) = g(i, j);
        }
    return g;
}

struct SymmetryResult {
    bool holds = true;
    /// First failing monomial pair (i, j) with both sides of the identity.
    std::optional<std::pair<std::size_t, std::size_t>> counterexample;
    Rational lhs, rhs;
};

/// Tests B(E p, t q) = B(t p, E q) with t = x - center and E = t^{N+1}, over the
/// basis p = t^i, q = t^j, 0 <= i, j <= degree.
inline SymmetryResult symmetry_check(const BilinearForm& form, unsigned N, std::size_t degree,
                                     const Rational& center = 0) {
    SymmetryResult r;
    std::vector<Poly> t(degree + N + 3);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = shifted_power(center, static_cast<unsigned>(k));
    for (std::size_t i = 0; i <= degree; ++i)
        for (std::size_t j = 0; j <= degree; ++j) {
            Rational lhs = form(t[i + N + 1], t[j + 1]);
            Rational rhs = form(t[i + 1], t[j + N + 1]);
            if (lhs != rhs) {
                r.holds = false;
                r.counterexample = {i, j};
                r.lhs = lhs;
                r.rhs = rhs;
                return r;
            }
        }
    return r;
}

/// B(E x^i, x^j) = B(x^i, E x^j) for all i, j <= degree.
inline bool multiplication_is_symmetric(const BilinearForm& form, const Poly& E, std::size_t degree) {
    for (std::size_t i = 0; i <= degree; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (form(E * Poly::monomial(i), Poly::monomial(j)) != form(Poly::monomial(i), E * Poly::monomial(j)))
                return false;
    return true;
}

}  // namespace opfold
