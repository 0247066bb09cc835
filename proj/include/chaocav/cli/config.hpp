#pragma once

// Run configuration for the chaocav command line: built-in figure presets,
// a plain-text `key = value` file, and command-line flags, applied in that
// order so later layers override earlier ones.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "chaocav/dynamics.hpp"
#include "chaocav/field.hpp"
#include "chaocav/teleportation.hpp"

namespace chaocav::cli {

enum class ExitCode : int { ok = 0, failure = 1, config = 2, io = 3, invariant = 4 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --help was given; carries the usage text.
struct HelpRequested {
    std::string text;
};

enum class Mode { entanglement, fidelity, contour, verify };

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::entanglement: return "entanglement";
        case Mode::fidelity: return "fidelity";
        case Mode::contour: return "contour";
        case Mode::verify: return "verify";
    }
    return "?";
}

struct GammaRange {
    double min = 0.0;
    double max = 1.0;
    std::size_t steps = 100;
};

struct RunConfig {
    Mode mode = Mode::entanglement;
    std::string fig;  // preset name, empty for none

    double t_min = 0.0;
    double t_max = 10.0;
    std::size_t t_steps = 500;

    std::vector<double> gamma_list{0.1, 0.5, 0.9};
    std::optional<GammaRange> gamma_range;  // takes precedence over gamma_list

    double alpha_field = 5.0;
    FieldConvention field_convention = FieldConvention::amplitude;
    AtomicInit init{0.2, 0.0, 0.0, std::sqrt(1.0 - 0.2 * 0.2)};
    Complex alpha_u{0.95};
    std::optional<Complex> beta_u;  // default sqrt(1 - |alpha_u|^2)

    Variant variant = Variant::corrected;
    PhaseModel phase_model = PhaseModel::mean_field;
    double omega = 1.0;
    double g0 = 1.0;
    double eps_trunc = 1e-12;

    std::string output;  // empty: stdout
    bool emit_svg = false;
    std::uint64_t seed = 20090101;
    unsigned threads = 0;

    // Grid times t_min + i (t_max - t_min) / t_steps, i = 0..t_steps.
    std::vector<double> t_grid() const {
        std::vector<double> g(t_steps + 1);
        for (std::size_t i = 0; i <= t_steps; ++i)
            g[i] = i == t_steps ? t_max
                                : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(t_steps);
        return g;
    }

    std::vector<double> gammas() const {
        if (!gamma_range) return gamma_list;
        const auto& r = *gamma_range;
        std::vector<double> g(r.steps + 1);
        for (std::size_t i = 0; i <= r.steps; ++i)
            g[i] = i == r.steps ? r.max
                                : r.min + (r.max - r.min) * static_cast<double>(i) / static_cast<double>(r.steps);
        return g;
    }

    double field_amplitude() const { return coherent_amplitude(alpha_field, field_convention); }

    UnknownQubit unknown_qubit() const {
        if (beta_u) return {alpha_u, *beta_u};
        const double rest = 1.0 - std::norm(alpha_u);
        return {alpha_u, std::sqrt(std::max(0.0, rest))};
    }

    ModelParams model(double gamma) const {
        ModelParams p;
        p.gamma = gamma;
        p.omega_rabi = omega;
        p.g0 = g0;
        p.alpha = field_amplitude();
        p.eps_trunc = eps_trunc;
        p.variant = variant;
        p.phase_model = phase_model;
        return p;
    }
};

// ---------------------------------------------------------------------------
// value parsing

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// A decimal literal, optionally wrapped as sqrt(<literal>).
inline double parse_real(std::string_view text, std::string_view what) {
    std::string s = trim(text);
    bool take_root = false;
    if (s.rfind("sqrt(", 0) == 0 && !s.empty() && s.back() == ')') {
        take_root = true;
        s = trim(std::string_view(s).substr(5, s.size() - 6));
    }
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigError("malformed number for " + std::string(what) + ": '" + std::string(text) + "'");
    if (take_root) {
        if (v < 0.0) throw ConfigError("sqrt of negative number for " + std::string(what));
        v = std::sqrt(v);
    }
    return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    return parts;
}

// "re,im" or "re"
inline Complex parse_complex(std::string_view text, std::string_view what) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {parse_real(parts[0], what), 0.0};
    if (parts.size() == 2) return {parse_real(parts[0], what), parse_real(parts[1], what)};
    throw ConfigError("malformed complex value for " + std::string(what) + ": '" + std::string(text) +
                      "' (expected re,im)");
}

inline std::vector<double> parse_real_list(std::string_view text, std::string_view what) {
    std::string s(text);
    for (char& c : s)
        if (c == ';' || c == ' ' || c == '\t') c = ',';
    std::vector<double> out;
    for (const auto& part : split(s, ','))
        if (!part.empty()) out.push_back(parse_real(part, what));
    if (out.empty()) throw ConfigError("empty list for " + std::string(what));
    return out;
}

inline std::size_t parse_count(std::string_view text, std::string_view what) {
    const double v = parse_real(text, what);
    if (v < 0.0 || v != std::floor(v) || v > 1e9)
        throw ConfigError("expected a non-negative integer for " + std::string(what) + ": '" + std::string(text) + "'");
    return static_cast<std::size_t>(v);
}

inline std::uint64_t parse_seed(std::string_view text) {
    const std::string s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("malformed seed: '" + s + "'");
    return v;
}

inline bool parse_bool(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("malformed boolean for " + std::string(what) + ": '" + s + "'");
}

inline Mode parse_mode(std::string_view text) {
    const std::string s = trim(text);
    if (s == "entanglement") return Mode::entanglement;
    if (s == "fidelity") return Mode::fidelity;
    if (s == "contour") return Mode::contour;
    if (s == "verify") return Mode::verify;
    throw ConfigError("unknown mode '" + s + "' (entanglement|fidelity|contour|verify)");
}

inline Variant parse_variant(std::string_view text) {
    const std::string s = trim(text);
    if (s == "verbatim") return Variant::verbatim;
    if (s == "corrected") return Variant::corrected;
    throw ConfigError("unknown variant '" + s + "' (verbatim|corrected)");
}

inline FieldConvention parse_field_convention(std::string_view text) {
    const std::string s = trim(text);
    if (s == "amplitude") return FieldConvention::amplitude;
    if (s == "mean") return FieldConvention::mean;
    throw ConfigError("unknown field convention '" + s + "' (amplitude|mean)");
}

inline PhaseModel parse_phase_model(std::string_view text) {
    const std::string s = trim(text);
    if (s == "mean_field") return PhaseModel::mean_field;
    if (s == "coherent") return PhaseModel::coherent;
    throw ConfigError("unknown phase model '" + s + "' (mean_field|coherent)");
}

// ---------------------------------------------------------------------------
// presets

// Figure parameter sets. Time and gamma ranges for the line plots are not
// given numerically by the figures; these contain the features they show.
inline void apply_preset(RunConfig& c, std::string_view name) {
    const std::string fig = trim(name);
    c.fig = fig;
    c.init = {0.2, 0.0, 0.0, std::sqrt(1.0 - 0.2 * 0.2)};
    c.omega = 1.0;
    c.gamma_range.reset();
    if (fig == "1a" || fig == "1b") {
        c.gamma_list = {0.1, 0.5, 0.9};
        c.alpha_field = fig == "1a" ? 5.0 : 6.0;
        c.t_min = 0.0;
        c.t_max = 10.0;
        c.t_steps = 500;
    } else if (fig == "2") {
        c.gamma_list = {0.0, 0.25, 0.5, 0.75, 1.0};
        c.alpha_field = 5.0;
        c.alpha_u = 0.95;
        c.beta_u.reset();
        c.t_min = 0.0;
        c.t_max = 3.0;
        c.t_steps = 300;
    } else if (fig == "3") {
        c.gamma_range = GammaRange{0.0, 1.0, 100};
        c.alpha_field = 5.0;
        c.alpha_u = 0.95;
        c.beta_u.reset();
        c.t_min = 0.0;
        c.t_max = 3.0;
        c.t_steps = 150;
    } else {
        throw ConfigError("unknown figure preset '" + fig + "' (1a|1b|2|3)");
    }
}

// ---------------------------------------------------------------------------
// key = value application

struct GammaRangeDraft {
    std::optional<double> min, max;
    std::optional<std::size_t> steps;
};

inline void apply_key(RunConfig& c, GammaRangeDraft& range, const std::string& key, const std::string& value) {
    if (key == "mode") c.mode = parse_mode(value);
    else if (key == "fig") apply_preset(c, value);
    else if (key == "t_min") c.t_min = parse_real(value, key);
    else if (key == "t_max") c.t_max = parse_real(value, key);
    else if (key == "t_steps") c.t_steps = parse_count(value, key);
    else if (key == "gamma") {
        c.gamma_list = parse_real_list(value, key);
        c.gamma_range.reset();
    }
    else if (key == "gamma_min") range.min = parse_real(value, key);
    else if (key == "gamma_max") range.max = parse_real(value, key);
    else if (key == "gamma_steps") range.steps = parse_count(value, key);
    else if (key == "alpha_field") c.alpha_field = parse_real(value, key);
    else if (key == "field_convention") c.field_convention = parse_field_convention(value);
    else if (key == "c00") c.init.c00 = parse_complex(value, key);
    else if (key == "c01") c.init.c01 = parse_complex(value, key);
    else if (key == "c10") c.init.c10 = parse_complex(value, key);
    else if (key == "c11") c.init.c11 = parse_complex(value, key);
    else if (key == "alpha_u") c.alpha_u = parse_complex(value, key);
    else if (key == "beta_u") c.beta_u = parse_complex(value, key);
    else if (key == "variant") c.variant = parse_variant(value);
    else if (key == "phase_model") c.phase_model = parse_phase_model(value);
    else if (key == "omega") c.omega = parse_real(value, key);
    else if (key == "g0") c.g0 = parse_real(value, key);
    else if (key == "eps_trunc") c.eps_trunc = parse_real(value, key);
    else if (key == "output") c.output = trim(value);
    else if (key == "emit_svg") c.emit_svg = parse_bool(value, key);
    else if (key == "seed") c.seed = parse_seed(value);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_count(value, key));
    else throw ConfigError("unknown key '" + key + "'");
}

inline void finish_gamma_range(RunConfig& c, const GammaRangeDraft& range) {
    if (!range.min && !range.max && !range.steps) return;
    GammaRange r = c.gamma_range.value_or(GammaRange{});
    if (range.min) r.min = *range.min;
    if (range.max) r.max = *range.max;
    if (range.steps) r.steps = *range.steps;
    c.gamma_range = r;
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines; '#' starts a comment; blank lines ignored.
inline KeyValues parse_config_text(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": missing key");
        kv.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

inline void validate(const RunConfig& c) {
    if (!(c.t_min >= 0.0) || !(c.t_max > c.t_min))
        throw ConfigError("time grid must satisfy 0 <= t_min < t_max");
    if (c.t_steps < 1) throw ConfigError("t_steps must be >= 1");
    if (c.gamma_range) {
        const auto& r = *c.gamma_range;
        if (!(r.min >= 0.0) || !(r.max >= r.min)) throw ConfigError("gamma range must satisfy 0 <= gamma_min <= gamma_max");
        if (r.steps < 1 && r.max > r.min) throw ConfigError("gamma_steps must be >= 1");
    }
    for (double g : c.gammas())
        if (!(g >= 0.0)) throw ConfigError("gamma values must be >= 0");
    if (c.gammas().empty()) throw ConfigError("gamma grid is empty");
    if (!(c.alpha_field >= 0.0)) throw ConfigError("alpha_field must be >= 0");
    if (!(c.eps_trunc > 0.0 && c.eps_trunc < 1.0)) throw ConfigError("eps_trunc must lie in (0, 1)");

    const double n2 = c.init.norm_squared();
    if (std::abs(n2 - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(15);
        os << "initial atomic amplitudes are not normalized: |c00|^2+|c01|^2+|c10|^2+|c11|^2 = " << n2
           << " (amplitudes are not renormalized automatically)";
        throw ConfigError(os.str());
    }
    if (!c.beta_u && std::norm(c.alpha_u) > 1.0) throw ConfigError("|alpha_u| must not exceed 1");
    const double u2 = std::norm(c.unknown_qubit().alpha_u) + std::norm(c.unknown_qubit().beta_u);
    if (std::abs(u2 - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(15);
        os << "unknown qubit is not normalized: |alpha_u|^2+|beta_u|^2 = " << u2;
        throw ConfigError(os.str());
    }
}

// Parses argv-style arguments (args[0] is the program name). `file_text`, if
// given, replaces reading --config from disk (used by tests).
inline RunConfig parse_config(const std::vector<std::string>& args,
                              const std::optional<std::string>& file_text = std::nullopt) {
    CLI::App app{"chaocav: entanglement and teleportation through a chaotic cavity", "chaocav"};
    std::string mode;
    std::optional<std::string> fig, gamma, alpha_field, t_max, steps, variant, field_convention, out, config;
    std::optional<std::uint64_t> seed;
    bool svg = false;

    app.add_option("mode", mode, "entanglement | fidelity | contour | verify")->required();
    app.add_option("--fig", fig, "figure preset: 1a | 1b | 2 | 3");
    app.add_option("--gamma", gamma, "comma-separated gamma values");
    app.add_option("--alpha-field", alpha_field, "field parameter (amplitude, or mean photon number)");
    app.add_option("--t-max", t_max, "end of the time grid");
    app.add_option("--steps", steps, "number of time steps");
    app.add_option("--variant", variant, "verbatim | corrected");
    app.add_option("--field-convention", field_convention, "amplitude | mean");
    app.add_option("--out", out, "output file (default stdout)");
    app.add_flag("--svg", svg, "also write an SVG rendering next to --out");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--config", config, "key = value configuration file");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig c;
    c.mode = parse_mode(mode);

    KeyValues file_kv;
    if (config) {
        std::string text;
        if (file_text) {
            text = *file_text;
        } else {
            std::ifstream in(*config);
            if (!in) throw ConfigError("cannot read config file '" + *config + "'");
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        file_kv = parse_config_text(text);
    }

    // Preset first, from the flag or else the file.
    if (fig) {
        apply_preset(c, *fig);
    } else {
        for (const auto& [k, v] : file_kv)
            if (k == "fig") apply_preset(c, v);
    }

    GammaRangeDraft range;
    for (const auto& [k, v] : file_kv) {
        if (k == "fig") continue;
        if (k == "mode") continue;  // the positional mode wins
        apply_key(c, range, k, v);
    }
    finish_gamma_range(c, range);

    if (gamma) {
        c.gamma_list = parse_real_list(*gamma, "--gamma");
        c.gamma_range.reset();
    }
    if (alpha_field) c.alpha_field = parse_real(*alpha_field, "--alpha-field");
    if (t_max) c.t_max = parse_real(*t_max, "--t-max");
    if (steps) c.t_steps = parse_count(*steps, "--steps");
    if (variant) c.variant = parse_variant(*variant);
    if (field_convention) c.field_convention = parse_field_convention(*field_convention);
    if (out) c.output = *out;
    if (svg) c.emit_svg = true;
    if (seed) c.seed = *seed;

    validate(c);
    if (c.emit_svg && c.output.empty()) throw ConfigError("--svg needs --out to name the output files");
    return c;
}

}  // namespace chaocav::cli
