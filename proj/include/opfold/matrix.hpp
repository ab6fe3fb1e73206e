#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "opfold/errors.hpp"
#include "opfold/poly.hpp"
#include "opfold/rational.hpp"

namespace opfold {

/// Dense row-major matrix. T is Rational, Poly, or a floating/complex type.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) : rows_(init.size()) {
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return a_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    void set_row(std::size_t i, const std::vector<T>& r) {
        if (r.size() != cols_) throw DimensionMismatch("row length");
        std::copy(r.begin(), r.end(), a_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const T& v) { return v == T{}; });
    }

    /// Top-left r x c block (square when c is omitted).
    Matrix leading_block(std::size_t r, std::size_t c = static_cast<std::size_t>(-1)) const {
        if (c == static_cast<std::size_t>(-1)) c = r;
        if (r > rows_ || c > cols_) throw DimensionMismatch("leading block larger than matrix");
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    template <class S>
    Matrix& scale(const S& s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& v : a.a_) v = -v;
        return a;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> a_;
};

using RationalMatrix = Matrix<Rational>;
/// Matrix polynomial stored entrywise.
using PolyMatrix = Matrix<Poly>;

inline RationalMatrix diagonal(const std::vector<Rational>& d) {
    RationalMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

inline PolyMatrix lift(const RationalMatrix& m) {
    PolyMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Poly(m(i, j));
    return r;
}

/// Largest entry degree; -1 for the zero matrix polynomial.
inline int degree(const PolyMatrix& m) {
    int d = -1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d = std::max(d, m(i, j).degree());
    return d;
}

/// Matrix coefficient of y^k.
inline RationalMatrix coefficient(const PolyMatrix& m, std::size_t k) {
    RationalMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j).coeff(k);
    return c;
}

/// Left product of a constant matrix with a matrix polynomial.
inline PolyMatrix operator*(const RationalMatrix& c, const PolyMatrix& p) { return lift(c) * p; }
inline PolyMatrix operator*(const PolyMatrix& p, const RationalMatrix& c) { return p * lift(c); }

inline PolyMatrix derivative(const PolyMatrix& m, unsigned k) {
    PolyMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = derivative(m(i, j), k);
    return r;
}

inline PolyMatrix multiply_by_monomial(PolyMatrix m, std::size_t k, const Rational& s = 1) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = Poly::monomial(k, s) * m(i, j);
    return m;
}

inline RationalMatrix evaluate(const PolyMatrix& m, const Rational& y) {
    RationalMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = evaluate(m(i, j), y);
    return r;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

}  // namespace opfold
