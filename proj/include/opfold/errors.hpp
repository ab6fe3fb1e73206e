#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opfold {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InsufficientMoments : public Error {
public:
    using Error::Error;
};

/// Raised at the first degree (or pivot) where positivity fails.
class NotPositiveDefinite : public Error {
public:
    NotPositiveDefinite(std::size_t index, const std::string& what)
        : Error(what + " (first failing index " + std::to_string(index) + ")"), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class SymmetryViolated : public Error {
public:
    using Error::Error;
};

class BandViolation : public Error {
public:
    using Error::Error;
};

class IdentityViolated : public Error {
public:
    using Error::Error;
};

class SingularPivotBlock : public Error {
public:
    explicit SingularPivotBlock(std::size_t n)
        : Error("singular pivot block at n=" + std::to_string(n)), n_(n) {}
    std::size_t block() const noexcept { return n_; }

private:
    std::size_t n_;
};

class SingularLeading : public Error {
public:
    explicit SingularLeading(std::size_t n)
        : Error("singular leading coefficient at n=" + std::to_string(n)), n_(n) {}
    std::size_t index() const noexcept { return n_; }

private:
    std::size_t n_;
};

class InsufficientSequence : public Error {
public:
    using Error::Error;
};

class NumericalInstability : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class Underdetermined : public Error {
public:
    Underdetermined(std::string what, std::size_t nullity) : Error(std::move(what)), nullity_(nullity) {}
    std::size_t nullity() const noexcept { return nullity_; }

private:
    std::size_t nullity_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace opfold
