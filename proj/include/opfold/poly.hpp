#pragma once

#include <complex>
#include <type_traits>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "opfold/rational.hpp"

namespace opfold {

/// Univariate polynomial with exact coefficients, stored in ascending degree.
/// The zero polynomial has no stored coefficients and degree -1.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& c) {  // NOLINT(google-explicit-constructor)
        if (c != 0) c_.push_back(c);
    }
    Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Poly(int c) : Poly(Rational(c)) {}   // NOLINT(google-explicit-constructor)
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static Poly monomial(std::size_t k, const Rational& c = 1) {
        if (c == 0) return {};
        std::vector<Rational> v(k + 1);
        v[k] = c;
        return Poly(std::move(v));
    }
    static Poly x() { return monomial(1); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<Rational>& coefficients() const noexcept { return c_; }

    /// Coefficient of x^i (zero beyond the degree).
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    void set_coeff(std::size_t i, const Rational& v) {
        if (i >= c_.size()) {
            if (v == 0) return;
            c_.resize(i + 1);
        }
        c_[i] = v;
        trim();
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Rational& s) {
        if (s == 0) {
            c_.clear();
            return *this;
        }
        for (auto& v : c_) v *= s;
        return *this;
    }
    Poly& operator*=(const Poly& o) {
        *this = *this * o;
        return *this;
    }

    /// Adds s * x^shift * o in place; the workhorse of back-substitution.
    void add_scaled(const Poly& o, const Rational& s, std::size_t shift = 0) {
        if (s == 0 || o.is_zero()) return;
        if (o.c_.size() + shift > c_.size()) c_.resize(o.c_.size() + shift);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i + shift] += s * o.c_[i];
        trim();
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& v : a.c_) v = -v;
        return a;
    }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

inline Rational evaluate(const Poly& p, const Rational& x) {
    Rational acc = 0;
    const auto& c = p.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

/// Converts an exact coefficient to a floating type. long double goes through
/// decimal text so that it keeps its full mantissa.
template <class Real>
Real to_real(const Rational& q) {
    if constexpr (std::is_same_v<Real, double>) {
        return q.get_d();
    } else {
        Real n = std::strtold(q.get_num().get_str().c_str(), nullptr);
        Real d = std::strtold(q.get_den().get_str().c_str(), nullptr);
        return n / d;
    }
}

/// Horner evaluation in a floating (possibly complex) type.
template <class Real>
std::complex<Real> evaluate(const Poly& p, std::complex<Real> z) {
    std::complex<Real> acc = 0;
    const auto& c = p.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + to_real<Real>(c[i]);
    return acc;
}

template <class Real>
Real evaluate_real(const Poly& p, Real x) {
    Real acc = 0;
    const auto& c = p.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + to_real<Real>(c[i]);
    return acc;
}

/// Exact k-th derivative.
inline Poly derivative(const Poly& p, unsigned k = 1) {
    const auto& c = p.coefficients();
    if (static_cast<int>(k) > p.degree()) return {};
    std::vector<Rational> r(c.size() - k);
    for (std::size_t i = k; i < c.size(); ++i) {
        Integer f = 1;
        for (std::size_t j = i - k + 1; j <= i; ++j) f *= static_cast<unsigned long>(j);
        r[i - k] = c[i] * Rational(f);
    }
    return Poly(std::move(r));
}

/// Returns q with q(x) = p(x + c).
inline Poly shift_compose(const Poly& p, const Rational& c) {
    if (p.is_zero() || c == 0) return p;
    std::vector<Rational> a = p.coefficients();
    const std::size_t n = a.size();
    // Repeated synthetic division (Taylor shift).
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) a[j - 1] += c * a[j];
    return Poly(std::move(a));
}

/// Returns p(x^e).
inline Poly substitute_power(const Poly& p, unsigned e) {
    if (p.is_zero()) return {};
    std::vector<Rational> r(static_cast<std::size_t>(p.degree()) * e + 1);
    for (std::size_t i = 0; i < p.coefficients().size(); ++i) r[i * e] = p.coefficients()[i];
    return Poly(std::move(r));
}

inline Poly pow(const Poly& p, unsigned k) {
    Poly r = 1;
    for (unsigned i = 0; i < k; ++i) r = r * p;
    return r;
}

/// (x - c)^k
inline Poly shifted_power(const Rational& c, unsigned k) { return pow(Poly(std::vector<Rational>{Rational(-c), Rational(1)}), k); }

inline std::string to_string(const Poly& p, const char* var = "x") {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& c = p.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        Rational a = abs(c[i]);
        os << (c[i] < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (a != 1 || i == 0) os << a.get_str() << (i ? "*" : "");
        if (i >= 1) os << var;
        if (i >= 2) os << '^' << i;
        first = false;
    }
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << to_string(p); }

}  // namespace opfold
