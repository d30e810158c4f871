#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "mlf/errors.hpp"
#include "mlf/series.hpp"

namespace mlf {

/// Semigroup defect E_a(l (t+s)^a) - E_a(l t^a) E_a(l s^a).
///
/// Symmetric in (t, s) bit for bit: t + s and the product both commute exactly.
inline double defect(const MLParams& p, double t, double s, const SeriesConfig& cfg = {}) {
    if (!(t >= 0.0) || !(s >= 0.0))
        throw DomainError("defect: t and s must be >= 0");
    const double joint = certified(ml_at_time(p, t + s, cfg), "defect at t+s");
    const double ft = certified(ml_at_time(p, t, cfg), "defect at t");
    const double fs = certified(ml_at_time(p, s, cfg), "defect at s");
    return joint - ft * fs;
}

/// Defect values on a rectangular (t, s) grid.
struct DefectGrid {
    std::vector<double> t_values;
    std::vector<double> s_values;
    std::vector<double> defect;  ///< row-major, defect[i * s_values.size() + j]
    double sup_abs = 0.0;

    double at(std::size_t i, std::size_t j) const { return defect[i * s_values.size() + j]; }
};

/// n equally spaced points on [lo, hi]; n = 1 gives {lo}.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out[n - 1] = hi;
    return out;
}

namespace detail {

inline void check_axis(const std::vector<double>& v, const char* name) {
    if (v.empty()) throw DomainError(std::string("defect_grid: ") + name + " is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0) || !std::isfinite(v[i]))
            throw DomainError(std::string("defect_grid: ") + name + " must be finite and >= 0");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw DomainError(std::string("defect_grid: ") + name + " must be ascending");
    }
}

}  // namespace detail

/// Fills a DefectGrid. A failing cell is reported as GridCellError(i, j).
inline DefectGrid defect_grid(const MLParams& p, std::vector<double> t_values,
                              std::vector<double> s_values, const SeriesConfig& cfg = {}) {
    p.validate();
    detail::check_axis(t_values, "t_values");
    detail::check_axis(s_values, "s_values");

    DefectGrid g;
    g.t_values = std::move(t_values);
    g.s_values = std::move(s_values);
    g.defect.resize(g.t_values.size() * g.s_values.size());
    for (std::size_t i = 0; i < g.t_values.size(); ++i) {
        for (std::size_t j = 0; j < g.s_values.size(); ++j) {
            double d = 0.0;
            try {
                d = defect(p, g.t_values[i], g.s_values[j], cfg);
            } catch (const Error& e) {
                throw GridCellError(i, j, e.what());
            }
            g.defect[i * g.s_values.size() + j] = d;
            g.sup_abs = std::max(g.sup_abs, std::abs(d));
        }
    }
    return g;
}

/// Square grid [lo, hi]^2 with `points` nodes per axis.
struct GridSpec {
    double lo = 0.25;
    double hi = 2.0;
    std::size_t points = 8;
};

enum class Verdict { holds, fails };

inline const char* to_string(Verdict v) { return v == Verdict::holds ? "HOLDS" : "FAILS"; }

/// Numerical form of the semigroup criterion: HOLDS when the defect's sup
/// over the grid is <= tol, FAILS when it is >= threshold, and
/// InconclusiveError in between.
inline Verdict classify_semigroup(const MLParams& p, const GridSpec& grid = {}, double tol = 1e-9,
                                  double threshold = 1e-3, const SeriesConfig& cfg = {}) {
    if (!(tol > 0.0) || !(threshold > 0.0))
        throw DomainError("classify_semigroup: tol and threshold must be > 0");
    if (!(tol < threshold)) throw DomainError("classify_semigroup: need tol < threshold");
    if (grid.points < 1 || !(grid.hi >= grid.lo))
        throw DomainError("classify_semigroup: invalid grid");
    const auto axis = linspace(grid.lo, grid.hi, grid.points);
    const DefectGrid g = defect_grid(p, axis, axis, cfg);
    if (g.sup_abs <= tol) return Verdict::holds;
    if (g.sup_abs >= threshold) return Verdict::fails;
    throw InconclusiveError(g.sup_abs, "classify_semigroup: sup |defect| = " +
                                           format_number(g.sup_abs) + " lies between tol " +
                                           format_number(tol) + " and threshold " +
                                           format_number(threshold));
}

/// Analytic side of the criterion: the identity holds iff alpha = 1 or lambda = 0.
inline bool semigroup_predicate(const MLParams& p) { return p.alpha == 1.0 || p.lambda == 0.0; }

/// Any callable real -> real.
template <typename F>
concept RealFunction = std::regular_invocable<F, double> &&
                       std::convertible_to<std::invoke_result_t<F, double>, double>;

/// psi_n(tau) = f(tau + n) / f(n), defined for tau >= -n.
///
/// For multiplicative f this reproduces f on [0, inf) and every psi_n
/// agrees with psi_m on [-m, inf) for n > m.
template <RealFunction F>
double extend_multiplicative(F&& f, unsigned n, double tau) {
    if (n < 1) throw DomainError("extend_multiplicative: n must be >= 1");
    const double shift = static_cast<double>(n);
    if (!(tau >= -shift))
        throw DomainError("extend_multiplicative: tau = " + format_number(tau) + " is below -n");
    const double base = f(shift);
    if (!(base > 0.0)) throw DomainError("extend_multiplicative: f(n) must be > 0");
    return f(tau + shift) / base;
}

/// Rate and sup-norm misfit of f against exp(omega t).
struct ExponentialFit {
    double omega = 0.0;
    double residual = 0.0;
};

/// omega = ln f(1); residual = max |f(t) - exp(omega t)| over `samples`
/// equally spaced points of [0, horizon]. Exact for true exponentials.
template <RealFunction F>
ExponentialFit exponential_fit(F&& f, double horizon, std::size_t samples) {
    if (samples < 2) throw DomainError("exponential_fit: samples must be >= 2");
    if (!(horizon > 0.0)) throw DomainError("exponential_fit: domain end must be > 0");
    const double at_one = f(1.0);
    if (!(at_one > 0.0)) throw DomainError("exponential_fit: f(1) must be > 0");
    ExponentialFit fit;
    fit.omega = std::log(at_one);
    for (double t : linspace(0.0, horizon, samples))
        fit.residual = std::max(fit.residual, std::abs(f(t) - std::exp(fit.omega * t)));
    return fit;
}

/// Threshold below which E_{alpha,alpha} counts as zero in proof_trace_lambda.
inline constexpr double kDegenerateDenominator = 1e-300;

/// t^(1-alpha) omega e^(omega t) / E_{alpha,alpha}(lambda t^alpha).
///
/// This is the value lambda would have to take if E_alpha(lambda t^alpha)
/// coincided with exp(omega t); it tends to 0 as t -> 0+ for alpha < 1.
inline double proof_trace_lambda(const MLParams& p, double omega, double t,
                                 const SeriesConfig& cfg = {}) {
    p.validate();
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("proof_trace_lambda: t must be > 0, got " + format_number(t));
    const double z = p.lambda * std::pow(t, p.alpha);
    const double denom = certified(ml_e2(p.alpha, p.alpha, z, cfg), "proof_trace_lambda");
    if (std::abs(denom) < kDegenerateDenominator)
        throw DegenerateError("proof_trace_lambda: E_{alpha,alpha}(lambda t^alpha) vanishes");
    if (omega == 0.0) return 0.0;
    return std::pow(t, 1.0 - p.alpha) * omega * std::exp(omega * t) / denom;
}

}  // namespace mlf
