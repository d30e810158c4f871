#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>

#include "mlf/errors.hpp"
#include "mlf/gamma.hpp"

#if !defined(MLF_HAVE_QUAD)
#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__) && !defined(__clang__)
#define MLF_HAVE_QUAD 1
#else
#define MLF_HAVE_QUAD 0
#endif
#endif

#if MLF_HAVE_QUAD
#include <quadmath.h>
#endif

namespace mlf {

/// Controls truncation of the power series.
struct SeriesConfig {
    double tol = 1e-14;           ///< relative tail tolerance
    std::size_t max_terms = 10000;
    double z_cap = 50.0;          ///< largest |z| accepted

    void validate() const {
        if (!(tol > 0.0)) throw DomainError("SeriesConfig: tol must be > 0");
        if (max_terms < 1) throw DomainError("SeriesConfig: max_terms must be >= 1");
        if (!(z_cap > 0.0)) throw DomainError("SeriesConfig: z_cap must be > 0");
    }
};

/// A series value with its a posteriori truncation bound.
struct EvalResult {
    double value = 0.0;
    double error_estimate = 0.0;  ///< bound on the neglected tail
    std::size_t terms_used = 0;
    bool converged = false;
};

/// Order alpha in (0, 1], second parameter beta > 0, rate lambda.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
    double lambda = 0.0;

    void validate() const;
};

namespace detail {

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in (0, 1], got " + format_number(alpha));
}

inline void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("beta must be > 0, got " + format_number(beta));
}

inline void check_argument(double z, const SeriesConfig& cfg) {
    if (!std::isfinite(z)) throw DomainError("series argument is not finite");
    if (std::abs(z) > cfg.z_cap)
        throw DomainError("|z| = " + format_number(std::abs(z)) + " exceeds z_cap " +
                          format_number(cfg.z_cap));
}

template <typename T>
T magnitude(T x) {
    return x < T(0) ? -x : x;
}

// Neumaier's variant of Kahan summation.
template <typename T>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (magnitude(sum_) >= magnitude(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{0};
    T comp_{0};
};

// Working precisions for the kernel. Terms and partial sums live in the
// working type; results leave as double.
struct WideOps {
    using real = long double;
    static real pow(real x, real n) { return std::pow(x, n); }
    static real gamma(real x) { return lanczos_gamma<real>(x); }
    static real log_gamma(real x) { return lanczos_log_gamma<real>(x); }
    static real exp(real x) { return std::exp(x); }
    static real log(real x) { return std::log(x); }
    static real abs(real x) { return std::abs(x); }
    static bool finite(real x) { return std::isfinite(x); }
};

#if MLF_HAVE_QUAD
struct QuadOps {
    using real = __float128;
    static real pow(real x, real n) { return powq(x, n); }
    static real gamma(real x) { return tgammaq(x); }
    static real log_gamma(real x) { return lgammaq(x); }
    static real exp(real x) { return expq(x); }
    static real log(real x) { return logq(x); }
    static real abs(real x) { return fabsq(x); }
    static bool finite(real x) { return finiteq(x) != 0; }
};
#endif

// Above this Gamma argument the direct quotient would overflow the working type.
inline constexpr double kWideGammaLimit = 1700.0;

template <typename Ops>
typename Ops::real series_term(typename Ops::real alpha, typename Ops::real beta,
                               typename Ops::real z, std::size_t n) {
    using real = typename Ops::real;
    const real nn = static_cast<real>(n);
    const real x = alpha * nn + beta;
    if (x < static_cast<real>(kWideGammaLimit)) {
        const real p = Ops::pow(z, nn);
        if (Ops::finite(p)) return p / Ops::gamma(x);
    }
    const real mag = Ops::exp(nn * Ops::log(Ops::abs(z)) - Ops::log_gamma(x));
    return (z < 0 && n % 2 == 1) ? -mag : mag;
}

// Below this fraction of the largest term a double result is not trustworthy.
inline constexpr double kCancellationRatio = 1e-8;
// Cancellation beyond which long double (with a ~5e-16 Gamma) hands over to quad.
inline constexpr double kWideLossLimit = 1e3;
// Quad keeps about 33 digits; 20 may be lost before the double result suffers.
inline constexpr double kQuadCancellationRatio = 1e-20;

// On the negative axis the value stays O(1); once a term passes this size
// not even quad precision can certify the sum, so summation stops.
inline constexpr double kNegativeAxisTermCap = 1e22;

struct SeriesSum {
    EvalResult result;
    double max_term = 0.0;  ///< largest |term|, saturating at infinity
};

// Sum_{n>=0} z^n / Gamma(alpha n + beta), z != 0, in the working type of Ops.
template <typename Ops>
SeriesSum sum_series_in(double alpha, double beta, double z, const SeriesConfig& cfg) {
    using real = typename Ops::real;
    const real a = alpha;
    const real b = beta;
    const real zz = z;

    CompensatedSum<real> acc;
    real prev_abs = 0;
    real max_abs = 0;
    double bound = std::numeric_limits<double>::infinity();
    SeriesSum out;

    for (std::size_t n = 0; n < cfg.max_terms; ++n) {
        const real term = series_term<Ops>(a, b, zz, n);
        acc.add(term);
        out.result.terms_used = n + 1;
        const real sum = acc.value();
        if (!Ops::finite(sum) ||
            (z > 0.0 && sum > static_cast<real>(std::numeric_limits<double>::max())))
            throw OverflowError("Mittag-Leffler series overflows double at z = " + format_number(z));

        const real cur_abs = Ops::abs(term);
        if (cur_abs > max_abs) max_abs = cur_abs;
        if (z < 0.0 && max_abs > static_cast<real>(kNegativeAxisTermCap)) break;
        if (n >= 1 && prev_abs > 0) {
            const real ratio = cur_abs / prev_abs;
            if (ratio < 1) {
                bound = static_cast<double>(cur_abs * ratio / (1 - ratio));
                const double scale = std::max(std::abs(static_cast<double>(sum)), 1.0);
                if (bound < cfg.tol * scale) {
                    out.result.converged = true;
                    break;
                }
            } else {
                bound = std::numeric_limits<double>::infinity();
            }
        }
        prev_abs = cur_abs;
    }

    out.result.value = static_cast<double>(acc.value());
    out.result.error_estimate = bound;
    out.max_term = max_abs > static_cast<real>(std::numeric_limits<double>::max())
                       ? std::numeric_limits<double>::infinity()
                       : static_cast<double>(max_abs);
    return out;
}

// Largest term over |value|; infinite when the value is zero or not finite.
inline double cancellation_loss(const SeriesSum& s) {
    const double v = std::abs(s.result.value);
    if (!std::isfinite(v) || v == 0.0) return std::numeric_limits<double>::infinity();
    return s.max_term / v;
}

// Long double first; heavy cancellation on the negative axis is redone in quad.
inline EvalResult sum_series(double alpha, double beta, double z, const SeriesConfig& cfg) {
    SeriesSum s = sum_series_in<WideOps>(alpha, beta, z, cfg);
    double limit = kCancellationRatio;
#if MLF_HAVE_QUAD
    if (z < 0.0 && cancellation_loss(s) > kWideLossLimit) {
        s = sum_series_in<QuadOps>(alpha, beta, z, cfg);
        limit = kQuadCancellationRatio;
    }
#endif
    // Negative arguments whose terms leave double range land here as well.
    if (!std::isfinite(s.result.value) || cancellation_loss(s) * limit > 1.0)
        s.result.converged = false;
    return s.result;
}

}  // namespace detail

inline void MLParams::validate() const {
    detail::check_alpha(alpha);
    detail::check_beta(beta);
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
}

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) on the real line.
///
/// Truncated power series with compensated summation. Summation stops once
/// the term ratio r is below one and the geometric tail bound
/// |term_n| r / (1 - r) drops under tol * max(|sum|, 1); that bound is the
/// returned error_estimate. Since Gamma is log-convex the term ratios are
/// non-increasing, so the geometric bound really does dominate the tail.
///
/// Terms and partial sums are carried in long double. On the negative axis
/// the alternating terms can dwarf the value; when the largest term exceeds
/// the result by more than 1e3 the sum is redone in quad precision (where
/// available). converged is false when max_terms runs out first, or when
/// the sum has cancelled beyond what the working precision can certify
/// (below 1e-8 of the largest term in long double, 1e-20 in quad). For
/// alpha = beta = 1 and z < 0 the result is the reciprocal of the series at
/// -z, which avoids that cancellation altogether.
///
/// Throws DomainError for alpha outside (0, 1], beta <= 0 or |z| > z_cap and
/// OverflowError if the sum is not representable.
inline EvalResult ml_e2(double alpha, double beta, double z, const SeriesConfig& cfg = {}) {
    cfg.validate();
    detail::check_alpha(alpha);
    detail::check_beta(beta);
    detail::check_argument(z, cfg);

    if (z == 0.0) return {1.0 / lanczos_gamma<double>(beta), 0.0, 1, true};

    if (alpha == 1.0 && beta == 1.0 && z < 0.0) {
        const EvalResult pos = detail::sum_series(1.0, 1.0, -z, cfg);
        const double value = 1.0 / pos.value;
        return {value, pos.error_estimate / pos.value * value, pos.terms_used, pos.converged};
    }
    return detail::sum_series(alpha, beta, z, cfg);
}

/// One-parameter Mittag-Leffler function E_alpha(z) = E_{alpha,1}(z).
inline EvalResult ml_e(double alpha, double z, const SeriesConfig& cfg = {}) {
    return ml_e2(alpha, 1.0, z, cfg);
}

/// u(t) = E_alpha(lambda t^alpha), the solution of the Caputo relaxation
/// problem with u(0) = 1. p.beta is not used.
inline EvalResult ml_at_time(const MLParams& p, double t, const SeriesConfig& cfg = {}) {
    p.validate();
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("t must be a finite value >= 0, got " + format_number(t));
    if (t == 0.0) return {1.0, 0.0, 1, true};
    return ml_e(p.alpha, p.lambda * std::pow(t, p.alpha), cfg);
}

/// Value of a converged result; ConvergenceError otherwise.
inline double certified(const EvalResult& r, std::string_view what) {
    if (!r.converged)
        throw ConvergenceError(std::string(what) + ": series value not certified (" +
                               std::to_string(r.terms_used) + " terms, value " +
                               format_number(r.value) + ")");
    return r.value;
}

}  // namespace mlf
