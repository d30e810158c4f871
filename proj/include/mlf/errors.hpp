#pragma once

#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <system_error>
#include <string>

namespace mlf {

/// Shortest round-trip decimal form of a double.
inline std::string format_number(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("?");
}

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical or configured evaluation domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The result is not representable as a finite double.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A series evaluation could not certify its value (term cap or cancellation).
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A quotient whose denominator is numerically zero.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Defect grid cell failure, located by its (t, s) indices.
class GridCellError : public Error {
public:
    GridCellError(std::size_t t_index, std::size_t s_index, const std::string& what)
        : Error("grid cell (" + std::to_string(t_index) + ", " + std::to_string(s_index) +
                "): " + what),
          t_index_(t_index),
          s_index_(s_index) {}

    std::size_t t_index() const noexcept { return t_index_; }
    std::size_t s_index() const noexcept { return s_index_; }

private:
    std::size_t t_index_;
    std::size_t s_index_;
};

/// Matrix function failure at one eigenvalue.
class EigenvalueError : public Error {
public:
    EigenvalueError(std::size_t index, const std::string& what)
        : Error("eigenvalue " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Sup-norm defect fell strictly between the HOLDS and FAILS thresholds.
class InconclusiveError : public Error {
public:
    InconclusiveError(double sup_abs, const std::string& what) : Error(what), sup_abs_(sup_abs) {}

    double sup_abs() const noexcept { return sup_abs_; }

private:
    double sup_abs_;
};

}  // namespace mlf
