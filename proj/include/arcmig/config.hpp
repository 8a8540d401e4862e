#pragma once

// Experiment configuration: JSON schema, presets, validation and the
// canonical form used for hashing.
//
//   {
//     "arc": "line" | "curve" | {"x": SERIES, "y": SERIES},
//     "N": 20, "lambda": 0.4, "snr_db": 20 | null, "seed": 1,
//     "mode": "bie" | "kirchhoff", "bie_nodes": 0,
//     "schemes": ["xi_deg:90", "xi:0,1", "incident_aligned", "oracle_normal"],
//     "rank": {"threshold": 0.05} | {"explicit": 5},
//     "grid": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "step": 0.02},
//     "strict_grid": true, "identities": false, "output": "out"
//   }
//
// SERIES = {"poly": [c0, c1, ...], "cos": [[a, w], ...], "sin": [[b, w], ...]}
// where each trigonometric pair contributes a cos(w pi s) or b sin(w pi s).
// Missing keys take the defaults of ExperimentConfig; unknown keys are rejected.

#include "errors.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "msr.hpp"
#include "random.hpp"
#include "spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace arcmig {

struct ArcSpec {
    std::string builtin = "line"; // empty when the series form is used
    CoordinateSeries x;
    CoordinateSeries y;
};

struct ExperimentConfig {
    ArcSpec arc;
    int n = 20;
    double lambda = 0.4;
    std::optional<double> snr_db = 20.0;
    std::uint64_t seed = 1;
    SolverMode mode = SolverMode::bie;
    int bie_nodes = 0;
    std::vector<std::string> schemes;
    RankPolicy rank = ThresholdRank{0.05};
    std::optional<GridSpec> grid; // default_grid when absent
    bool strict_grid = true;
    bool identities = false;
    std::string output = "out";
};

/// Figure-style scheme list: xi at pi/2, pi/3, pi/4, pi/6, 0 and c_n = theta_n.
inline std::vector<std::string> figure_schemes()
{
    return {"xi_deg:90", "xi_deg:60", "xi_deg:45", "xi_deg:30", "xi_deg:0", "incident_aligned"};
}

inline ExperimentConfig preset(const std::string& name)
{
    ExperimentConfig c;
    c.schemes = figure_schemes();
    if (name == "example1") {
        c.arc.builtin = "line";
        c.n = 20;
        c.lambda = 0.4;
    } else if (name == "example2") {
        c.arc.builtin = "curve";
        c.n = 32;
        c.lambda = 0.5;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected example1 or example2)");
    }
    c.output = "out/" + name;
    return c;
}

inline Arc build_arc(const ArcSpec& spec)
{
    if (spec.builtin == "line")
        return make_line_arc();
    if (spec.builtin == "curve")
        return make_curve_arc();
    if (!spec.builtin.empty())
        throw ConfigError("unknown builtin arc '" + spec.builtin + "' (expected line or curve)");
    return make_series_arc(spec.x, spec.y);
}

/// Parses one scheme string. OracleNormal needs the arc sample, which the
/// caller supplies.
inline TestVectorScheme parse_scheme(const std::string& text, const ArcSample* sample = nullptr)
{
    if (text == "incident_aligned")
        return IncidentAligned{};
    if (text == "oracle_normal") {
        if (!sample)
            throw ConfigError("scheme oracle_normal requires an arc sample");
        return OracleNormal{*sample};
    }
    const auto value_after = [&](const std::string& prefix) -> std::optional<std::string> {
        if (text.rfind(prefix, 0) == 0)
            return text.substr(prefix.size());
        return std::nullopt;
    };
    try {
        if (auto deg = value_after("xi_deg:")) {
            std::size_t used = 0;
            const double angle = std::stod(*deg, &used);
            if (used != deg->size())
                throw std::invalid_argument("trailing characters");
            return fixed_xi_at_angle(angle * std::numbers::pi / 180.0);
        }
        if (auto vec = value_after("xi:")) {
            const auto comma = vec->find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("missing comma");
            const Point xi(std::stod(vec->substr(0, comma)), std::stod(vec->substr(comma + 1)));
            if (!(xi.norm() > 0.0))
                throw std::invalid_argument("zero vector");
            return FixedXi{xi.normalized()};
        }
    } catch (const std::exception&) {
        throw ConfigError("malformed scheme '" + text + "'");
    }
    throw ConfigError("unknown scheme '" + text
                      + "' (expected xi_deg:<angle>, xi:<x>,<y>, incident_aligned or oracle_normal)");
}

/// File-name stem for a scheme string: "xi_deg:90" -> "xi_deg_90".
inline std::string scheme_tag(const std::string& text)
{
    std::string tag;
    for (char c : text)
        tag += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return tag;
}

namespace detail {

/// 1-based line of the first occurrence of "key" in the source text, 0 if absent.
inline int line_of_key(const std::string& text, const std::string& key)
{
    const auto pos = text.find('"' + key + '"');
    if (pos == std::string::npos)
        return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

inline std::vector<std::pair<double, double>> parse_pairs(const nlohmann::json& j)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2)
            throw ConfigError("trigonometric terms must be [amplitude, frequency] pairs");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

inline CoordinateSeries parse_series(const nlohmann::json& j)
{
    CoordinateSeries s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "poly")
            s.poly = it.value().get<std::vector<double>>();
        else if (it.key() == "cos")
            s.cos_terms = parse_pairs(it.value());
        else if (it.key() == "sin")
            s.sin_terms = parse_pairs(it.value());
        else
            throw ConfigError("unknown key '" + it.key() + "'");
    }
    return s;
}

inline nlohmann::json series_to_json(const CoordinateSeries& s)
{
    nlohmann::json j;
    j["poly"] = s.poly;
    auto pairs = [](const std::vector<std::pair<double, double>>& v) {
        auto a = nlohmann::json::array();
        for (auto [amp, w] : v)
            a.push_back({amp, w});
        return a;
    };
    j["cos"] = pairs(s.cos_terms);
    j["sin"] = pairs(s.sin_terms);
    return j;
}

} // namespace detail

/// Structural checks that need no computation.
inline void validate(const ExperimentConfig& c)
{
    if (c.n < 4)
        throw ConfigError("N must be at least 4");
    if (!(c.lambda > 0.0) || !std::isfinite(c.lambda))
        throw ConfigError("lambda must be positive and finite");
    if (c.snr_db && (std::isnan(*c.snr_db) || *c.snr_db == -std::numeric_limits<double>::infinity()))
        throw ConfigError("snr_db must be a number or null");
    if (c.bie_nodes != 0 && (c.bie_nodes < 16 || c.bie_nodes % 2 != 0))
        throw ConfigError("bie_nodes must be 0 or an even number >= 16");
    if (c.schemes.empty())
        throw ConfigError("at least one scheme is required");
    std::set<std::string> seen;
    for (const auto& s : c.schemes) {
        if (!seen.insert(s).second)
            throw ConfigError("duplicate scheme '" + s + "'");
        if (s != "oracle_normal")
            validate_scheme(parse_scheme(s));
    }
    if (const auto* t = std::get_if<ThresholdRank>(&c.rank); t && (!(t->tau > 0.0) || t->tau > 1.0))
        throw ConfigError("rank threshold must lie in (0, 1]");
    if (const auto* e = std::get_if<ExplicitRank>(&c.rank); e && (e->rank < 1 || e->rank > c.n))
        throw ConfigError("explicit rank must lie in [1, N]");
    if (c.grid && (!(c.grid->step > 0.0) || c.grid->x_max < c.grid->x_min || c.grid->y_max < c.grid->y_min))
        throw ConfigError("grid must have positive step and non-empty extent");
    if (c.output.empty())
        throw ConfigError("output directory must not be empty");
    build_arc(c.arc).validate();
}

/// Applies the keys present in `j` on top of `base`. `source` is the raw
/// text, used only to attach line numbers to messages.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {},
                                         const std::string& source = {})
{
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");
    std::string key;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            key = it.key();
            const auto& v = it.value();
            if (key == "arc") {
                if (v.is_string()) {
                    base.arc = ArcSpec{};
                    base.arc.builtin = v.get<std::string>();
                } else if (v.is_object()) {
                    base.arc = ArcSpec{};
                    base.arc.builtin.clear();
                    for (auto a = v.begin(); a != v.end(); ++a) {
                        if (a.key() == "x")
                            base.arc.x = detail::parse_series(a.value());
                        else if (a.key() == "y")
                            base.arc.y = detail::parse_series(a.value());
                        else
                            throw ConfigError("unknown key '" + a.key() + "'");
                    }
                } else {
                    throw ConfigError("expected a builtin name or {\"x\": ..., \"y\": ...}");
                }
            } else if (key == "N") {
                base.n = v.get<int>();
            } else if (key == "lambda") {
                base.lambda = v.get<double>();
            } else if (key == "snr_db") {
                base.snr_db = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
            } else if (key == "seed") {
                base.seed = v.get<std::uint64_t>();
            } else if (key == "mode") {
                base.mode = parse_solver_mode(v.get<std::string>());
            } else if (key == "bie_nodes") {
                base.bie_nodes = v.get<int>();
            } else if (key == "schemes") {
                base.schemes = v.get<std::vector<std::string>>();
            } else if (key == "rank") {
                if (!v.is_object() || v.size() != 1)
                    throw ConfigError("expected {\"threshold\": tau} or {\"explicit\": M}");
                if (v.contains("threshold"))
                    base.rank = ThresholdRank{v.at("threshold").get<double>()};
                else if (v.contains("explicit"))
                    base.rank = ExplicitRank{v.at("explicit").get<int>()};
                else
                    throw ConfigError("unknown key '" + v.begin().key() + "'");
            } else if (key == "grid") {
                GridSpec g = default_grid(WaveContext::from_wavelength(base.lambda));
                bool has_step = false;
                for (auto a = v.begin(); a != v.end(); ++a) {
                    const double value = a.value().get<double>();
                    if (a.key() == "x_min")
                        g.x_min = value;
                    else if (a.key() == "x_max")
                        g.x_max = value;
                    else if (a.key() == "y_min")
                        g.y_min = value;
                    else if (a.key() == "y_max")
                        g.y_max = value;
                    else if (a.key() == "step") {
                        g.step = value;
                        has_step = true;
                    } else
                        throw ConfigError("unknown key '" + a.key() + "'");
                }
                if (!has_step)
                    throw ConfigError("grid requires \"step\"");
                base.grid = g;
            } else if (key == "strict_grid") {
                base.strict_grid = v.get<bool>();
            } else if (key == "identities") {
                base.identities = v.get<bool>();
            } else if (key == "output") {
                base.output = v.get<std::string>();
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        }
    } catch (const std::exception& e) {
        const int line = detail::line_of_key(source, key);
        std::string where = "config";
        if (line > 0)
            where += ":" + std::to_string(line);
        throw ConfigError(where + ": \"" + key + "\": " + e.what());
    }
    return base;
}

/// Reads and validates a config file. Parse errors carry line and column.
inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {})
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Recover the line from the byte offset nlohmann reports.
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
    }
    try {
        return config_from_json(j, std::move(base), text);
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        if (msg.rfind("config", 0) == 0)
            msg = path + msg.substr(6);
        throw ConfigError(msg);
    }
}

/// Canonical JSON: every field spelled out, keys sorted.
inline nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    if (c.arc.builtin.empty())
        j["arc"] = {{"x", detail::series_to_json(c.arc.x)}, {"y", detail::series_to_json(c.arc.y)}};
    else
        j["arc"] = c.arc.builtin;
    j["N"] = c.n;
    j["lambda"] = c.lambda;
    j["snr_db"] = c.snr_db ? nlohmann::json(*c.snr_db) : nlohmann::json(nullptr);
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["bie_nodes"] = c.bie_nodes;
    j["schemes"] = c.schemes;
    if (const auto* t = std::get_if<ThresholdRank>(&c.rank))
        j["rank"] = {{"threshold", t->tau}};
    else
        j["rank"] = {{"explicit", std::get<ExplicitRank>(c.rank).rank}};
    const GridSpec g = c.grid ? *c.grid : default_grid(WaveContext::from_wavelength(c.lambda));
    j["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min}, {"y_max", g.y_max}, {"step", g.step}};
    j["strict_grid"] = c.strict_grid;
    j["identities"] = c.identities;
    j["output"] = c.output;
    return j;
}

/// FNV-1a of the canonical JSON with the output directory removed, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& c)
{
    auto j = to_json(c);
    j.erase("output");
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
    return os.str();
}

} // namespace arcmig
