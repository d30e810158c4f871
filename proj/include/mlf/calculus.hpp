#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mlf/errors.hpp"
#include "mlf/gamma.hpp"
#include "mlf/series.hpp"

namespace mlf {

/// d/dt E_alpha(lambda t^alpha) = lambda t^(alpha-1) E_{alpha,alpha}(lambda t^alpha), t > 0.
inline double ml_derivative(const MLParams& p, double t, const SeriesConfig& cfg = {}) {
    p.validate();
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("ml_derivative: t must be > 0, got " + format_number(t));
    if (p.lambda == 0.0) return 0.0;
    const double z = p.lambda * std::pow(t, p.alpha);
    const double kernel = certified(ml_e2(p.alpha, p.alpha, z, cfg), "ml_derivative");
    return p.lambda * std::pow(t, p.alpha - 1.0) * kernel;
}

/// Default central-difference step.
inline constexpr double kDefaultFdStep = 1e-5;

/// Relative gap between the central difference (f(t+h) - f(t-h)) / 2h of
/// f = E_alpha(lambda t^alpha) and ml_derivative. Requires 0 < h < t.
inline double finite_difference_check(const MLParams& p, double t, double h = kDefaultFdStep,
                                      const SeriesConfig& cfg = {}) {
    if (!(h > 0.0)) throw DomainError("finite_difference_check: h must be > 0");
    if (!(h < t))
        throw DomainError("finite_difference_check: need h < t, got h = " + format_number(h) +
                          ", t = " + format_number(t));
    const double fp = certified(ml_at_time(p, t + h, cfg), "finite_difference_check");
    const double fm = certified(ml_at_time(p, t - h, cfg), "finite_difference_check");
    const double central = (fp - fm) / (2.0 * h);
    const double exact = ml_derivative(p, t, cfg);
    return std::abs(central - exact) / std::max(std::abs(exact), 1e-300);
}

/// Node placement for the L1 check.
enum class L1Mesh {
    uniform,  ///< t_k = T k / n
    graded,   ///< t_k = T (k / n)^r with r = (2 - alpha) / alpha
};

/// L1 approximation of the Caputo derivative of order alpha at nodes[1..n].
///
/// values[k] samples u at nodes[k]; nodes must start at 0 and increase
/// strictly. The weights integrate the piecewise-linear interpolant of u
/// exactly, so linear u is differentiated without error. alpha = 1 gives the
/// backward difference.
inline std::vector<double> l1_caputo(std::span<const double> nodes,
                                     std::span<const double> values, double alpha) {
    detail::check_alpha(alpha);
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw DomainError("l1_caputo: need matching node/value arrays with at least 2 entries");
    for (std::size_t k = 1; k < nodes.size(); ++k)
        if (!(nodes[k] > nodes[k - 1])) throw DomainError("l1_caputo: nodes must increase");

    const std::size_t n = nodes.size() - 1;
    std::vector<double> out(n);
    if (alpha == 1.0) {
        for (std::size_t k = 1; k <= n; ++k)
            out[k - 1] = (values[k] - values[k - 1]) / (nodes[k] - nodes[k - 1]);
        return out;
    }

    const double expo = 1.0 - alpha;
    const double scale = 1.0 / lanczos_gamma<double>(2.0 - alpha);
    for (std::size_t k = 1; k <= n; ++k) {
        detail::CompensatedSum<double> acc;
        for (std::size_t j = 1; j <= k; ++j) {
            const double step = nodes[j] - nodes[j - 1];
            const double w =
                (std::pow(nodes[k] - nodes[j - 1], expo) - std::pow(nodes[k] - nodes[j], expo)) /
                step;
            acc.add(w * (values[j] - values[j - 1]));
        }
        out[k - 1] = scale * acc.value();
    }
    return out;
}

/// Outcome of an L1 residual run.
struct ResidualReport {
    std::size_t grid_steps = 0;
    double max_residual = 0.0;
    double empirical_order = std::numeric_limits<double>::quiet_NaN();
    bool converged = true;  ///< every series evaluation was certified
};

namespace detail {

struct L1Run {
    double residual = 0.0;
    bool converged = true;
};

inline std::vector<double> l1_nodes(double alpha, double horizon, std::size_t n, L1Mesh mesh) {
    const double grading = mesh == L1Mesh::graded ? (2.0 - alpha) / alpha : 1.0;
    std::vector<double> nodes(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        nodes[k] = horizon * std::pow(static_cast<double>(k) / static_cast<double>(n), grading);
    nodes[n] = horizon;
    return nodes;
}

// max |L1[u](t_k) - lambda u(t_k)| over nodes with t_k >= T/2.
inline L1Run l1_run(const MLParams& p, double u0, double horizon, std::size_t n, L1Mesh mesh,
                    const SeriesConfig& cfg) {
    const auto nodes = l1_nodes(p.alpha, horizon, n, mesh);
    std::vector<double> u(nodes.size());
    L1Run run;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const EvalResult r = ml_at_time(p, nodes[k], cfg);
        run.converged = run.converged && r.converged;
        u[k] = u0 * r.value;
    }
    const auto deriv = l1_caputo(nodes, u, p.alpha);
    for (std::size_t k = 1; k <= n; ++k) {
        if (nodes[k] < 0.5 * horizon) continue;
        run.residual = std::max(run.residual, std::abs(deriv[k - 1] - p.lambda * u[k]));
    }
    return run;
}

}  // namespace detail

/// Residual of the closed-form solution u(t) = E_alpha(lambda t^alpha) u0
/// in the L1-discretised problem  D^alpha u = lambda u.
///
/// The residual is the largest |L1[u](t_k) - lambda u(t_k)| over nodes in
/// [T/2, T]. Near t = 0 the solution behaves like t^alpha and the local
/// residual there does not shrink with the mesh, so those nodes are left
/// out. On the graded mesh the residual decays like n^-(2-alpha); on the
/// uniform mesh like n^-min(2-alpha, 1+alpha). empirical_order compares n
/// against 2n steps and is NaN when either residual is exactly zero.
inline ResidualReport caputo_l1_residual(const MLParams& p, double u0, double horizon,
                                         std::size_t n_steps, L1Mesh mesh = L1Mesh::graded,
                                         const SeriesConfig& cfg = {}) {
    p.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw DomainError("caputo_l1_residual: T must be > 0");
    if (n_steps < 2) throw DomainError("caputo_l1_residual: n_steps must be >= 2");
    if (!std::isfinite(u0)) throw DomainError("caputo_l1_residual: u0 must be finite");

    const auto coarse = detail::l1_run(p, u0, horizon, n_steps, mesh, cfg);
    const auto fine = detail::l1_run(p, u0, horizon, 2 * n_steps, mesh, cfg);

    ResidualReport rep;
    rep.grid_steps = n_steps;
    rep.max_residual = coarse.residual;
    rep.converged = coarse.converged && fine.converged;
    if (coarse.residual > 0.0 && fine.residual > 0.0)
        rep.empirical_order = std::log2(coarse.residual / fine.residual);
    return rep;
}

}  // namespace mlf
