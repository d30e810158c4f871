#pragma once

// Command-line front end. Kept header-only so tests can drive run() in-process.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlf/calculus.hpp"
#include "mlf/errors.hpp"
#include "mlf/io.hpp"
#include "mlf/matrix.hpp"
#include "mlf/semigroup.hpp"
#include "mlf/series.hpp"

namespace mlf::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kEvalError = 1, kUsageError = 2 };

enum class OutputFormat { csv, json };

using Cell = std::variant<double, long long, bool, std::string>;

/// A result table: named columns, rows of cells and optional scalar summaries.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, double>> summary;
};

namespace detail {

inline std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
                return format_number(v);
            else if constexpr (std::is_same_v<V, long long>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<V, bool>)
                return v ? "true" : "false";
            else
                return v;
        },
        c);
}

inline nlohmann::json json_cell(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

}  // namespace detail

/// Header row plus one line per row; summaries are not part of the CSV.
inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += detail::csv_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

/// {"tool", "command", "rows": [{column: value}...], <summaries>}.
inline std::string to_json(const Table& t, const std::string& command) {
    nlohmann::ordered_json doc;
    doc["tool"] = std::string("mlf ") + kVersion;
    doc["command"] = command;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = detail::json_cell(row[i]);
        doc["rows"].push_back(std::move(obj));
    }
    for (const auto& [name, value] : t.summary) doc[name] = value;
    return doc.dump(2) + "\n";
}

/// Options shared by every subcommand.
struct CommonOptions {
    OutputFormat format = OutputFormat::csv;
    std::string output_path;
    double series_tol = SeriesConfig{}.tol;
    std::optional<std::size_t> max_terms;
    double z_cap = SeriesConfig{}.z_cap;
};

namespace detail {

inline void add_common(CLI::App& sub, CommonOptions& c) {
    const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv},
                                                      {"json", OutputFormat::json}};
    sub.add_option("--output-format", c.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
        ->type_name("{csv,json}")
        ->default_str("csv");
    sub.add_option("--output", c.output_path, "write results to this file instead of stdout");
    sub.add_option("--series-tol", c.series_tol, "relative truncation tolerance")
        ->capture_default_str();
    sub.add_option("--max-terms", c.max_terms, "series term cap (overrides ML_MAX_TERMS)");
    sub.add_option("--z-cap", c.z_cap, "largest accepted |z|")->capture_default_str();
}

// Thrown for invalid ML_MAX_TERMS so it maps to the usage exit code.
struct EnvUsageError {
    std::string message;
};

inline SeriesConfig make_config(const CommonOptions& c) {
    SeriesConfig cfg;
    cfg.tol = c.series_tol;
    cfg.z_cap = c.z_cap;
    if (const char* env = std::getenv("ML_MAX_TERMS"); env != nullptr && *env != '\0') {
        std::size_t parsed = 0;
        const std::string_view sv(env);
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), parsed);
        if (ec != std::errc{} || ptr != sv.data() + sv.size() || parsed == 0)
            throw EnvUsageError{"ML_MAX_TERMS: expected a positive integer, got '" +
                                std::string(sv) + "'"};
        cfg.max_terms = parsed;
    }
    if (c.max_terms) cfg.max_terms = *c.max_terms;
    cfg.validate();
    return cfg;
}

}  // namespace detail

/// Runs the CLI. Returns 0 on success, 1 on domain or evaluation errors and
/// 2 on usage errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mittag-Leffler evaluation and semigroup-defect toolkit", "mlf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("mlf ") + kVersion);

    CommonOptions common;
    Table table;
    std::string command;
    int status = kOk;

    double alpha = 0.0, beta = 1.0, lambda = 0.0, t = 0.0, s = 0.0;
    double tmin = 0.0, tmax = 0.0, tol = 1e-9, threshold = 1e-3, u0 = 1.0, horizon = 1.0;
    std::size_t n = 0, samples = 101;
    std::string matrix_path, mesh_name = "graded";
    std::optional<double> z_opt, lambda_opt, t_opt, s_opt;

    auto* eval = app.add_subcommand("eval", "evaluate E_{alpha,beta}(z) or E_alpha(lambda t^alpha)");
    eval->add_option("--alpha", alpha, "order in (0, 1]")->required();
    eval->add_option("--beta", beta, "second parameter > 0")->capture_default_str();
    auto* z_flag = eval->add_option("--z", z_opt, "series argument");
    auto* l_flag = eval->add_option("--lambda", lambda_opt, "rate (with --t)");
    auto* t_flag = eval->add_option("--t", t_opt, "time >= 0 (with --lambda)");
    z_flag->excludes(l_flag)->excludes(t_flag);
    l_flag->needs(t_flag);
    t_flag->needs(l_flag);
    detail::add_common(*eval, common);

    auto* def = app.add_subcommand("defect", "semigroup defect at one (t, s)");
    def->add_option("--alpha", alpha, "order in (0, 1]")->required();
    def->add_option("--lambda", lambda, "rate")->required();
    def->add_option("--t", t, "first time >= 0")->required();
    def->add_option("--s", s, "second time >= 0")->required();
    detail::add_common(*def, common);

    auto* grid = app.add_subcommand("grid", "semigroup defect on [tmin, tmax]^2");
    grid->add_option("--alpha", alpha, "order in (0, 1]")->required();
    grid->add_option("--lambda", lambda, "rate")->required();
    grid->add_option("--tmax", tmax, "upper grid end")->required();
    grid->add_option("--tmin", tmin, "lower grid end")->capture_default_str();
    grid->add_option("--n", n, "points per axis")->required()->check(CLI::PositiveNumber);
    detail::add_common(*grid, common);

    auto* cls = app.add_subcommand("classify", "HOLDS / FAILS verdict for the semigroup identity");
    GridSpec spec_grid;
    cls->add_option("--alpha", alpha, "order in (0, 1]")->required();
    cls->add_option("--lambda", lambda, "rate")->required();
    cls->add_option("--tmin", spec_grid.lo, "lower grid end")->capture_default_str();
    cls->add_option("--tmax", spec_grid.hi, "upper grid end")->capture_default_str();
    cls->add_option("--n", spec_grid.points, "points per axis")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cls->add_option("--tol", tol, "HOLDS when sup |defect| <= tol")->capture_default_str();
    cls->add_option("--threshold", threshold, "FAILS when sup |defect| >= threshold")
        ->capture_default_str();
    detail::add_common(*cls, common);

    auto* mat = app.add_subcommand("matrix", "E_alpha(A t^alpha) for a symmetric matrix A");
    mat->add_option("--alpha", alpha, "order in (0, 1]")->required();
    mat->add_option("--matrix", matrix_path, "row-major CSV file")->required();
    mat->add_option("--t", t, "time >= 0")->required();
    mat->add_option("--s", s_opt, "second time: report the matrix semigroup defect instead");
    detail::add_common(*mat, common);

    auto* cap = app.add_subcommand("caputo-check", "L1 Caputo residual of E_alpha(lambda t^alpha) u0");
    cap->add_option("--alpha", alpha, "order in (0, 1]")->required();
    cap->add_option("--lambda", lambda, "rate")->required();
    cap->add_option("--u0", u0, "initial value")->capture_default_str();
    cap->add_option("--T", horizon, "horizon > 0")->capture_default_str();
    cap->add_option("--n", n, "steps (>= 2); 2n is used for the order")->default_val(64)->check(
        CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max() / 2));
    cap->add_option("--mesh", mesh_name, "graded or uniform")
        ->check(CLI::IsMember({"graded", "uniform"}))
        ->capture_default_str();
    detail::add_common(*cap, common);

    auto* fit = app.add_subcommand("fit", "fit exp(omega t) to E_alpha(lambda t^alpha)");
    fit->add_option("--alpha", alpha, "order in (0, 1]")->required();
    fit->add_option("--lambda", lambda, "rate")->required();
    fit->add_option("--T", horizon, "domain end > 0")->default_val(5.0);
    fit->add_option("--samples", samples, "sample count (>= 2)")->capture_default_str()->check(
        CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    detail::add_common(*fit, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        const CLI::App* failing = &app;
        for (const auto* sub : app.get_subcommands({})) {
            if (sub->parsed()) failing = sub;
        }
        err << failing->help();
        return kUsageError;
    }

    SeriesConfig cfg;
    try {
        cfg = detail::make_config(common);
    } catch (const detail::EnvUsageError& e) {
        err << "usage error: " << e.message << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (eval->parsed()) {
            command = "eval";
            double arg = 0.0;
            EvalResult r;
            if (z_opt) {
                arg = *z_opt;
                r = ml_e2(alpha, beta, arg, cfg);
            } else if (lambda_opt && t_opt) {
                const MLParams p{.alpha = alpha, .beta = 1.0, .lambda = *lambda_opt};
                arg = *t_opt > 0.0 ? *lambda_opt * std::pow(*t_opt, alpha) : 0.0;
                if (beta != 1.0) throw DomainError("eval: --beta applies only with --z");
                r = ml_at_time(p, *t_opt, cfg);
            } else {
                err << "usage error: eval needs --z, or --lambda together with --t\n"
                    << eval->help();
                return kUsageError;
            }
            table.columns = {"alpha", "beta", "z", "value", "error_estimate", "terms_used",
                             "converged"};
            table.rows.push_back({alpha, beta, arg, r.value, r.error_estimate,
                                  static_cast<long long>(r.terms_used), r.converged});
            if (!r.converged) {
                err << "error: series did not converge to the requested tolerance\n";
                status = kEvalError;
            }
        } else if (def->parsed()) {
            command = "defect";
            const MLParams p{.alpha = alpha, .lambda = lambda};
            table.columns = {"t", "s", "defect"};
            table.rows.push_back({t, s, defect(p, t, s, cfg)});
        } else if (grid->parsed()) {
            command = "grid";
            if (!(tmax >= tmin)) throw DomainError("grid: --tmax must be >= --tmin");
            const MLParams p{.alpha = alpha, .lambda = lambda};
            const auto axis = linspace(tmin, tmax, n);
            const DefectGrid g = defect_grid(p, axis, axis, cfg);
            table.columns = {"t", "s", "defect"};
            for (std::size_t i = 0; i < g.t_values.size(); ++i)
                for (std::size_t j = 0; j < g.s_values.size(); ++j)
                    table.rows.push_back({g.t_values[i], g.s_values[j], g.at(i, j)});
            table.summary.emplace_back("sup_abs", g.sup_abs);
        } else if (cls->parsed()) {
            command = "classify";
            const MLParams p{.alpha = alpha, .lambda = lambda};
            const Verdict v = classify_semigroup(p, spec_grid, tol, threshold, cfg);
            const auto axis = linspace(spec_grid.lo, spec_grid.hi, spec_grid.points);
            const double sup = defect_grid(p, axis, axis, cfg).sup_abs;
            table.columns = {"alpha", "lambda", "sup_abs", "verdict", "predicate"};
            table.rows.push_back({alpha, lambda, sup, std::string(to_string(v)),
                                  semigroup_predicate(p)});
        } else if (mat->parsed()) {
            command = "matrix";
            const Spectrum spectrum = eig_symmetric(read_matrix_csv(matrix_path));
            if (s_opt) {
                table.columns = {"t", "s", "defect"};
                table.rows.push_back({t, *s_opt, matrix_defect(alpha, spectrum, t, *s_opt, cfg)});
            } else {
                const Matrix m = ml_matrix(alpha, spectrum, t, cfg);
                table.columns = {"row", "col", "value"};
                for (std::size_t i = 0; i < m.rows(); ++i)
                    for (std::size_t j = 0; j < m.cols(); ++j)
                        table.rows.push_back(
                            {static_cast<long long>(i), static_cast<long long>(j), m(i, j)});
            }
        } else if (cap->parsed()) {
            command = "caputo-check";
            const MLParams p{.alpha = alpha, .lambda = lambda};
            const L1Mesh mesh = mesh_name == "uniform" ? L1Mesh::uniform : L1Mesh::graded;
            const ResidualReport rep = caputo_l1_residual(p, u0, horizon, n, mesh, cfg);
            table.columns = {"grid_steps", "max_residual", "empirical_order", "converged"};
            table.rows.push_back({static_cast<long long>(rep.grid_steps), rep.max_residual,
                                  rep.empirical_order, rep.converged});
            if (!rep.converged) {
                err << "error: a series evaluation on the grid did not converge\n";
                status = kEvalError;
            }
        } else if (fit->parsed()) {
            command = "fit";
            const MLParams p{.alpha = alpha, .lambda = lambda};
            p.validate();
            const auto f = [&](double tau) { return certified(ml_at_time(p, tau, cfg), "fit"); };
            const ExponentialFit ef = exponential_fit(f, horizon, samples);
            table.columns = {"omega", "residual"};
            table.rows.push_back({ef.omega, ef.residual});
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kEvalError;
    }

    const std::string payload =
        common.format == OutputFormat::json ? to_json(table, command) : to_csv(table);
    if (common.output_path.empty()) {
        out << payload;
    } else {
        std::ofstream file(common.output_path, std::ios::binary);
        if (!(file << payload)) {
            err << "error: cannot write --output '" << common.output_path << "'\n";
            return kEvalError;
        }
    }
    return status;
}

}  // namespace mlf::cli
