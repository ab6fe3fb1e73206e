#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "opfold/errors.hpp"

namespace opfold {

using Integer = mpz_class;
/// Exact rational; gmp keeps every arithmetic result in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Accepts "p", "p/q", optional sign and surrounding blanks. Result is canonicalized.
inline Rational parse_rational(std::string_view text) {
    auto first = text.find_first_not_of(" \t");
    auto last = text.find_last_not_of(" \t");
    if (first == std::string_view::npos) throw ParseError("empty rational literal");
    std::string s(text.substr(first, last - first + 1));
    auto slash = s.find('/');
    auto is_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational literal '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer d(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational q(Integer(num), d);
    q.canonicalize();
    return q;
}

/// p/q in lowest terms (mpq_class's two-argument constructor does not reduce).
inline Rational frac(const Integer& p, const Integer& q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline int sign(const Rational& q) { return sgn(q); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// lcm of the denominators of a range of rationals.
template <class Range>
Integer common_denominator(const Range& values) {
    Integer l = 1;
    for (const Rational& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    return l;
}

inline Integer factorial(unsigned long n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
inline bool exact_sqrt(const Rational& q, Rational& root) {
    if (q < 0) return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return false;
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    root = Rational(n, d);
    root.canonicalize();
    return true;
}

}  // namespace opfold
