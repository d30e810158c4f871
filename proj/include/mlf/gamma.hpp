#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <string>

#include "mlf/errors.hpp"

namespace mlf {

/// Largest argument whose Gamma value is finite in double precision.
inline constexpr double kGammaOverflowArg = 171.6;

namespace detail {

// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// A_g(x) with x already shifted down by one.
template <std::floating_point T>
T lanczos_series(T xm1) {
    T acc = static_cast<T>(kLanczosCoef[0]);
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i)
        acc += static_cast<T>(kLanczosCoef[i]) / (xm1 + static_cast<T>(i));
    return acc;
}

}  // namespace detail

namespace detail {

// Lanczos formula itself; the power t^(x-1/2) is split in two halves around
// exp(-t) so the product stays finite whenever the result is.
template <std::floating_point T>
T lanczos_core(T x) {
    constexpr T pi = std::numbers::pi_v<T>;
    const T xm1 = x - T(1);
    const T t = xm1 + static_cast<T>(kLanczosG) + T(0.5);
    const T half_pow = std::pow(t, (xm1 + T(0.5)) / T(2));
    const T sqrt_two_pi = std::sqrt(T(2) * pi);
    return sqrt_two_pi * half_pow * std::exp(-t) * half_pow * lanczos_series(xm1);
}

// The relative error of the approximation grows roughly like 6e-16 x, so
// moderate arguments are pulled back into [1.5, 2.5) and multiplied up.
inline constexpr double kRecurrenceLimit = 256.0;

}  // namespace detail

/// Gamma(x) for x > 0, evaluated in T. No domain checks.
///
/// Integers up to 171 are exact products; other arguments below 256 use the
/// Lanczos formula on [1.5, 2.5) and the upward recurrence; larger ones use
/// the formula directly. Arguments below 1/2 go through reflection.
template <std::floating_point T>
T lanczos_gamma(T x) {
    constexpr T pi = std::numbers::pi_v<T>;
    if (x < T(0.5)) return pi / (std::sin(pi * x) * lanczos_gamma<T>(T(1) - x));
    if (x <= T(kGammaOverflowArg) && x == std::floor(x)) {
        T fact = 1;
        for (T k = 2; k < x; k += 1) fact *= k;
        return fact;
    }
    if (x >= T(2.5) && x < T(detail::kRecurrenceLimit)) {
        const T shift = std::floor(x - T(1.5));
        const T base = x - shift;
        T prod = 1;
        for (T k = 0; k < shift; k += 1) prod *= base + k;
        return detail::lanczos_core(base) * prod;
    }
    return detail::lanczos_core(x);
}

/// log Gamma(x) for x > 0, Lanczos in log space. No domain checks.
template <std::floating_point T>
T lanczos_log_gamma(T x) {
    constexpr T pi = std::numbers::pi_v<T>;
    if (x < T(0.5))
        return std::log(pi / std::sin(pi * x)) - lanczos_log_gamma<T>(T(1) - x);
    const T xm1 = x - T(1);
    const T t = xm1 + static_cast<T>(detail::kLanczosG) + T(0.5);
    return T(0.5) * std::log(T(2) * pi) + (xm1 + T(0.5)) * std::log(t) - t +
           std::log(detail::lanczos_series(xm1));
}

/// Gamma function on (0, 171.6].
///
/// Throws DomainError for x <= 0 (or NaN) and OverflowError above 171.6.
inline double gamma(double x) {
    if (!(x > 0.0)) throw DomainError("gamma: argument must be > 0, got " + format_number(x));
    if (x > kGammaOverflowArg)
        throw OverflowError("gamma: argument " + format_number(x) + " overflows double");
    return static_cast<double>(lanczos_gamma<long double>(x));
}

/// log Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0))
        throw DomainError("log_gamma: argument must be > 0, got " + format_number(x));
    return lanczos_log_gamma<double>(x);
}

}  // namespace mlf
