#pragma once

// Sweep execution for the chaocav command line: compute one row per (gamma, t)
// grid point, check the physical invariants of every row, and write CSV
// (plus an optional SVG rendering of the same rows).

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaocav/cli/config.hpp"
#include "chaocav/cli/svg.hpp"
#include "chaocav/cli/verify.hpp"
#include "chaocav/dynamics.hpp"
#include "chaocav/entanglement.hpp"
#include "chaocav/parallel.hpp"
#include "chaocav/teleportation.hpp"

namespace chaocav::cli {

struct SweepRow {
    double t = 0.0;
    double gamma = 0.0;
    double alpha_field = 0.0;
    double doe = 0.0;
    double pre_norm_trace = 0.0;
    // teleportation columns (fidelity and contour modes)
    double fidelity = 0.0;
    std::array<Complex, 4> kappa{};
    double weight = 0.0;
};

inline bool has_fidelity(Mode m) { return m == Mode::fidelity || m == Mode::contour; }

inline std::string grid_point(double t, double gamma) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(t = %.12g, gamma = %.12g)", t, gamma);
    return buf;
}

// Bounds shared by the sweep and the invariant suite.
inline constexpr double unit_interval_slack = 1e-12;

inline bool in_unit_interval(double v) {
    return v >= -unit_interval_slack && v <= 1.0 + unit_interval_slack;
}

inline SweepRow compute_row(double t, double gamma, const RunConfig& c, const CoherentField& field,
                            const UnknownQubit& u) {
    const ModelParams p = c.model(gamma);
    const AmplitudeStream stream = amplitude_stream(t, c.init, field, p);

    SweepRow row;
    row.t = t;
    row.gamma = gamma;
    row.alpha_field = c.alpha_field;
    const std::string where = grid_point(t, gamma);

    DensityResult dr;
    try {
        dr = normalize_density(assemble_density(stream));
        if (auto why = density_violation(dr.rho)) throw InvariantViolation(*why);
        row.doe = negativity(dr.rho, t, gamma).doe;
    } catch (const std::exception& e) {
        throw InvariantViolation("atomic state invalid at " + where + ": " + e.what());
    }
    row.pre_norm_trace = dr.pre_norm_trace;
    if (!in_unit_interval(row.doe))
        throw InvariantViolation("DoE = " + std::to_string(row.doe) + " outside [0, 1] at " + where);

    if (has_fidelity(c.mode)) {
        ClosedFormTeleport cf;
        try {
            cf = closed_form_from_stream(stream, u, c.variant);
        } catch (const std::exception& e) {
            throw InvariantViolation("teleportation undefined at " + where + ": " + e.what());
        }
        if (auto why = density_violation(cf.outcome.bob_state))
            throw InvariantViolation("Bob's state invalid at " + where + ": " + *why);
        row.fidelity = cf.outcome.fidelity;
        row.kappa = cf.kappa;
        row.weight = cf.outcome.outcome_weight;
        if (!in_unit_interval(row.fidelity))
            throw InvariantViolation("fidelity = " + std::to_string(row.fidelity) + " outside [0, 1] at " + where);
    }
    return row;
}

// Rows in grid order: gamma outer, t inner.
inline std::vector<SweepRow> compute_rows(const RunConfig& c) {
    const CoherentField field = coherent_weights(c.field_amplitude(), c.eps_trunc);
    const UnknownQubit u = c.unknown_qubit();
    const auto ts = c.t_grid();
    const auto gs = c.gammas();
    std::vector<SweepRow> rows(ts.size() * gs.size());
    parallel_for(rows.size(), c.threads, [&](std::size_t i) {
        rows[i] = compute_row(ts[i % ts.size()], gs[i / ts.size()], c, field, u);
    });
    return rows;
}

inline std::string format_csv(const std::vector<SweepRow>& rows, Mode mode) {
    std::string out = "t,gamma,alpha_field,doe,pre_norm_trace";
    if (has_fidelity(mode)) out += ",fidelity,kappa1,kappa2_re,kappa2_im,kappa4,weight";
    out += '\n';
    char buf[32];
    auto put = [&](double v, bool first = false) {
        std::snprintf(buf, sizeof buf, "%.12e", v);
        if (!first) out += ',';
        out += buf;
    };
    for (const auto& r : rows) {
        put(r.t, true);
        put(r.gamma);
        put(r.alpha_field);
        put(r.doe);
        put(r.pre_norm_trace);
        if (has_fidelity(mode)) {
            put(r.fidelity);
            put(r.kappa[0].real());
            put(r.kappa[1].real());
            put(r.kappa[1].imag());
            put(r.kappa[3].real());
            put(r.weight);
        }
        out += '\n';
    }
    return out;
}

inline std::string render_svg(const std::vector<SweepRow>& rows, const RunConfig& c) {
    const bool fid = has_fidelity(c.mode);
    auto value = [&](const SweepRow& r) { return fid ? r.fidelity : r.doe; };
    const std::string quantity = fid ? "teleportation fidelity" : "degree of entanglement";
    char title[160];
    std::snprintf(title, sizeof title, "%s, field %g, %s variant", quantity.c_str(), c.alpha_field,
                  c.variant == Variant::corrected ? "corrected" : "verbatim");

    const auto ts = c.t_grid();
    const auto gs = c.gammas();
    if (c.mode == Mode::contour) {
        return svg::heatmap(
            ts, gs, [&](std::size_t i, std::size_t j) { return value(rows[j * ts.size() + i]); }, title, "t",
            "gamma");
    }
    std::vector<svg::Series> series;
    for (std::size_t j = 0; j < gs.size(); ++j) {
        svg::Series s;
        char label[48];
        std::snprintf(label, sizeof label, "gamma = %g", gs[j]);
        s.label = label;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            s.x.push_back(ts[i]);
            s.y.push_back(value(rows[j * ts.size() + i]));
        }
        series.push_back(std::move(s));
    }
    return svg::line_chart(series, title, "t", fid ? "F" : "DoE");
}

// foo.csv -> foo.svg; foo -> foo.svg
inline std::string svg_path(const std::string& output) {
    const auto slash = output.find_last_of('/');
    const auto dot = output.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return output.substr(0, dot) + ".svg";
    return output + ".svg";
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

// Opens (and truncates) the output before the sweep so an unwritable path
// fails fast.
inline void probe_writable(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
}

inline ExitCode run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.mode == Mode::verify) {
        const auto checks = run_verification(c.seed, c.threads);
        const std::string table = format_checks(checks);
        if (c.output.empty()) out << table;
        else write_file(c.output, table);
        const bool ok = all_passed(checks);
        err << (ok ? "verify: all asserted checks passed\n" : "verify: some asserted checks FAILED\n");
        return ok ? ExitCode::ok : ExitCode::invariant;
    }

    if (!c.output.empty()) {
        probe_writable(c.output);
        if (c.emit_svg) probe_writable(svg_path(c.output));
    }
    const auto rows = compute_rows(c);
    const std::string csv = format_csv(rows, c.mode);
    if (c.output.empty()) {
        out << csv;
    } else {
        write_file(c.output, csv);
        if (c.emit_svg) write_file(svg_path(c.output), render_svg(rows, c));
    }
    return ExitCode::ok;
}

// Full command-line entry: parse, run, map failures onto exit codes.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    try {
        const RunConfig c = parse_config(args);
        return static_cast<int>(run(c, out, err));
    } catch (const HelpRequested& h) {
        out << h.text;
        return static_cast<int>(ExitCode::ok);
    } catch (const ConfigError& e) {
        err << "chaocav: configuration error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config);
    } catch (const IoError& e) {
        err << "chaocav: I/O error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::io);
    } catch (const InvariantViolation& e) {
        err << "chaocav: invariant violated: " << e.what() << '\n';
        return static_cast<int>(ExitCode::invariant);
    } catch (const std::exception& e) {
        err << "chaocav: error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::failure);
    }
}

}  // namespace chaocav::cli
