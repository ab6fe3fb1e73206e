#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "opfold/errors.hpp"
#include "opfold/matrix.hpp"
#include "opfold/rational.hpp"

namespace opfold {

/// Square truncation of a semi-infinite banded operator. Entries outside
/// [i - lower, i + upper] are structural zeros.
class BandedOperator {
public:
    BandedOperator() = default;
    BandedOperator(std::size_t size, std::size_t lower, std::size_t upper)
        : n_(size), lower_(lower), upper_(upper), band_(size * (lower + upper + 1)) {}

    static BandedOperator identity(std::size_t size) {
        BandedOperator b(size, 0, 0);
        for (std::size_t i = 0; i < size; ++i) b.set(i, i, 1);
        return b;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t lower_bandwidth() const noexcept { return lower_; }
    std::size_t upper_bandwidth() const noexcept { return upper_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept {
        return i < n_ && j < n_ && j + lower_ >= i && j <= i + upper_;
    }

    Rational at(std::size_t i, std::size_t j) const {
        return in_band(i, j) ? band_[index(i, j)] : Rational(0);
    }

    /// Writes a value; a nonzero outside the band is a BandViolation.
    void set(std::size_t i, std::size_t j, const Rational& v) {
        if (!in_band(i, j)) {
            if (v == 0) return;
            throw BandViolation("nonzero entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside band");
        }
        band_[index(i, j)] = v;
    }

    std::size_t first_col(std::size_t i) const noexcept { return i > lower_ ? i - lower_ : 0; }
    std::size_t last_col(std::size_t i) const noexcept { return std::min(n_ - 1, i + upper_); }

    bool is_symmetric() const {
        if (lower_ != upper_) return false;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = first_col(i); j < i; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }

    BandedOperator transpose() const {
        BandedOperator t(n_, upper_, lower_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = first_col(i); j <= last_col(i); ++j) t.set(j, i, at(i, j));
        return t;
    }

    /// A - c I
    BandedOperator shifted(const Rational& c) const {
        BandedOperator r = *this;
        for (std::size_t i = 0; i < n_; ++i) r.band_[index(i, i)] -= c;
        return r;
    }

    /// Product of truncations; the result band is the sum of the bands. Only the
    /// leading rows unaffected by truncation are meaningful (see trusted_rows).
    friend BandedOperator operator*(const BandedOperator& a, const BandedOperator& b) {
        if (a.n_ != b.n_) throw DimensionMismatch("banded product size");
        BandedOperator r(a.n_, a.lower_ + b.lower_, a.upper_ + b.upper_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = a.first_col(i); k <= a.last_col(i); ++k) {
                const Rational& aik = a.band_[a.index(i, k)];
                if (aik == 0) continue;
                for (std::size_t j = b.first_col(k); j <= b.last_col(k); ++j)
                    r.band_[r.index(i, j)] += aik * b.band_[b.index(k, j)];
            }
        return r;
    }

    BandedOperator power(unsigned k) const {
        BandedOperator r = identity(n_);
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    RationalMatrix to_dense() const {
        RationalMatrix m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = first_col(i); j <= last_col(i); ++j) m(i, j) = at(i, j);
        return m;
    }

    /// Leading principal block of size m.
    BandedOperator leading(std::size_t m) const {
        BandedOperator r(std::min(m, n_), lower_, upper_);
        for (std::size_t i = 0; i < r.n_; ++i)
            for (std::size_t j = r.first_col(i); j <= r.last_col(i); ++j) r.set(i, j, at(i, j));
        return r;
    }

    friend bool operator==(const BandedOperator& a, const BandedOperator& b) {
        if (a.n_ != b.n_) return false;
        const std::size_t lo = std::max(a.lower_, b.lower_), up = std::max(a.upper_, b.upper_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t j = i > lo ? i - lo : 0; j <= std::min(a.n_ - 1, i + up); ++j)
                if (a.at(i, j) != b.at(i, j)) return false;
        return true;
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * (lower_ + upper_ + 1) + (j + lower_ - i);
    }

    std::size_t n_ = 0;
    std::size_t lower_ = 0;
    std::size_t upper_ = 0;
    std::vector<Rational> band_;
};

/// Rows of an n-truncated product of operators with total half-bandwidth
/// `bandwidth` that coincide with the semi-infinite product.
inline std::size_t trusted_rows(std::size_t n, std::size_t bandwidth) {
    return n > bandwidth ? n - bandwidth : 0;
}

/// Block tridiagonal truncation with square blocks. sub(n) is block (n, n-1),
/// super(n) is block (n, n+1).
class BlockTridiagonal {
public:
    BlockTridiagonal() = default;
    BlockTridiagonal(std::size_t blocks, std::size_t block_size)
        : block_size_(block_size),
          diag_(blocks, RationalMatrix(block_size, block_size)),
          sub_(blocks ? blocks - 1 : 0, RationalMatrix(block_size, block_size)),
          super_(blocks ? blocks - 1 : 0, RationalMatrix(block_size, block_size)) {}

    std::size_t blocks() const noexcept { return diag_.size(); }
    std::size_t block_size() const noexcept { return block_size_; }

    RationalMatrix& diag(std::size_t n) { return diag_.at(n); }
    const RationalMatrix& diag(std::size_t n) const { return diag_.at(n); }
    RationalMatrix& sub(std::size_t n) { return sub_.at(n - 1); }
    const RationalMatrix& sub(std::size_t n) const { return sub_.at(n - 1); }
    RationalMatrix& super(std::size_t n) { return super_.at(n); }
    const RationalMatrix& super(std::size_t n) const { return super_.at(n); }

    /// Block (i, j); zero outside the three diagonals.
    RationalMatrix block(std::size_t i, std::size_t j) const {
        if (i == j) return diag(i);
        if (i == j + 1) return sub(i);
        if (j == i + 1) return super(i);
        return RationalMatrix(block_size_, block_size_);
    }

    BlockTridiagonal leading(std::size_t m) const {
        m = std::min(m, blocks());
        BlockTridiagonal r(m, block_size_);
        for (std::size_t n = 0; n < m; ++n) {
            r.diag(n) = diag(n);
            if (n + 1 < m) {
                r.super(n) = super(n);
                r.sub(n + 1) = sub(n + 1);
            }
        }
        return r;
    }

    RationalMatrix to_dense() const {
        const std::size_t b = block_size_, m = blocks();
        RationalMatrix d(m * b, m * b);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = (i ? i - 1 : 0); j <= std::min(m - 1, i + 1); ++j) {
                RationalMatrix blk = block(i, j);
                for (std::size_t r = 0; r < b; ++r)
                    for (std::size_t c = 0; c < b; ++c) d(i * b + r, j * b + c) = blk(r, c);
            }
        return d;
    }

    friend bool operator==(const BlockTridiagonal& a, const BlockTridiagonal& b) {
        return a.block_size_ == b.block_size_ && a.diag_ == b.diag_ && a.sub_ == b.sub_ &&
               a.super_ == b.super_;
    }

    /// Product of two block tridiagonal truncations, kept tridiagonal. Blocks two
    /// off the diagonal must vanish (true for bidiagonal factors); otherwise throws.
    friend BlockTridiagonal operator*(const BlockTridiagonal& a, const BlockTridiagonal& b) {
        if (a.blocks() != b.blocks() || a.block_size_ != b.block_size_)
            throw DimensionMismatch("block product shape");
        const std::size_t m = a.blocks();
        BlockTridiagonal r(m, a.block_size_);
        auto entry = [&](std::size_t i, std::size_t j) {
            RationalMatrix s(a.block_size_, a.block_size_);
            const std::size_t lo = std::max(i, j) >= 1 ? std::max(i, j) - 1 : 0;
            for (std::size_t k = lo; k <= std::min(m - 1, std::min(i, j) + 1); ++k)
                s += a.block(i, k) * b.block(k, j);
            return s;
        };
        for (std::size_t i = 0; i < m; ++i) {
            r.diag(i) = entry(i, i);
            if (i + 1 < m) {
                r.super(i) = entry(i, i + 1);
                r.sub(i + 1) = entry(i + 1, i);
            }
            if (i + 2 < m && (!entry(i, i + 2).is_zero() || !entry(i + 2, i).is_zero()))
                throw BandViolation("block product is not tridiagonal");
        }
        return r;
    }

private:
    std::size_t block_size_ = 0;
    std::vector<RationalMatrix> diag_;
    std::vector<RationalMatrix> sub_;
    std::vector<RationalMatrix> super_;
};

}  // namespace opfold
