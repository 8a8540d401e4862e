#pragma once

// Multi-static response matrix over the full-view direction set, noise
// injection and the JSON container.

#include "bie.hpp"
#include "errors.hpp"
#include "forward.hpp"
#include "geometry.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace arcmig {

enum class SolverMode { bie, kirchhoff };

inline std::string to_string(SolverMode mode) { return mode == SolverMode::bie ? "bie" : "kirchhoff"; }

inline SolverMode parse_solver_mode(const std::string& text)
{
    if (text == "bie")
        return SolverMode::bie;
    if (text == "kirchhoff")
        return SolverMode::kirchhoff;
    throw ConfigError("unknown solver mode '" + text + "' (expected \"bie\" or \"kirchhoff\")");
}

/// theta_n = -(cos(2 pi (n-1) / N), sin(2 pi (n-1) / N)), observation = -theta.
struct DirectionSet {
    std::vector<Point> incident;
    std::vector<Point> observation;

    int count() const { return static_cast<int>(incident.size()); }
};

inline DirectionSet make_directions(int n)
{
    if (n < 4)
        throw ConfigError("make_directions: need at least 4 directions, got " + std::to_string(n));
    DirectionSet dirs;
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / n;
        const Point theta = -Point(std::cos(angle), std::sin(angle));
        dirs.incident.push_back(theta);
        dirs.observation.push_back(-theta);
    }
    return dirs;
}

struct MsrMatrix {
    Eigen::MatrixXcd entries; // (j, l) = psi_inf(vartheta_j, theta_l)
    DirectionSet directions;
    WaveContext ctx = WaveContext::from_wavelength(1.0);
    std::string mode = "kirchhoff";
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
};

struct AssembleOptions {
    int nodes = 0; // BIE basis size; 0 selects default_node_count
};

/// Kirchhoff-mode matrix from an explicit sample of arc points.
inline MsrMatrix assemble_kirchhoff(const ArcSample& sample, const DirectionSet& dirs, const WaveContext& ctx)
{
    const int n = dirs.count();
    MsrMatrix msr;
    msr.entries.resize(n, n);
    msr.directions = dirs;
    msr.ctx = ctx;
    msr.mode = "kirchhoff";
    for (int l = 0; l < n; ++l) {
        const auto density = kirchhoff_density(sample, dirs.incident[l], ctx);
        for (int j = 0; j < n; ++j)
            msr.entries(j, l) = far_field(density, dirs.observation[j], ctx);
    }
    return msr;
}

inline MsrMatrix assemble(const Arc& arc, const DirectionSet& dirs, const WaveContext& ctx, SolverMode mode,
                          const AssembleOptions& options = {})
{
    if (mode == SolverMode::kirchhoff)
        return assemble_kirchhoff(sample_arc(arc, ctx.wavelength()), dirs, ctx);

    const int nodes = options.nodes > 0 ? options.nodes : default_node_count(arc.length(), ctx);
    const NeumannArcSolver solver(arc, ctx, nodes);
    const int n = dirs.count();
    MsrMatrix msr;
    msr.entries.resize(n, n);
    msr.directions = dirs;
    msr.ctx = ctx;
    msr.mode = "bie";
    for (int l = 0; l < n; ++l) {
        const auto density = solver.solve(dirs.incident[l]);
        for (int j = 0; j < n; ++j)
            msr.entries(j, l) = far_field(density, dirs.observation[j], ctx);
    }
    return msr;
}

/// ||K - K^T||_F / ||K||_F.
inline double symmetry_residual(const Eigen::MatrixXcd& k)
{
    return (k - k.transpose()).norm() / k.norm();
}

/// Adds circular complex white Gaussian noise with power
/// mean|K_jl|^2 / 10^(snr_db / 10), split equally between real and imaginary
/// parts. snr_db = +inf returns the input unchanged.
inline MsrMatrix add_awgn(const MsrMatrix& matrix, double snr_db, std::uint64_t seed)
{
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
        throw ConfigError("add_awgn: snr_db must be finite");
    MsrMatrix out = matrix;
    out.snr_db = snr_db;
    out.seed = seed;
    if (std::isinf(snr_db))
        return out;

    const double signal_power = matrix.entries.cwiseAbs2().mean();
    const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(0.5 * noise_power);

    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (Eigen::Index l = 0; l < out.entries.cols(); ++l)
        for (Eigen::Index j = 0; j < out.entries.rows(); ++j) {
            const double re = normal(engine);
            const double im = normal(engine);
            out.entries(j, l) += Complex(re, im);
        }
    return out;
}

inline nlohmann::json to_json(const MsrMatrix& msr)
{
    nlohmann::json j;
    j["N"] = msr.directions.count();
    j["k"] = msr.ctx.k();
    j["lambda"] = msr.ctx.wavelength();
    j["mode"] = msr.mode;
    j["seed"] = msr.seed;
    j["snr_db"] = msr.snr_db ? nlohmann::json(*msr.snr_db) : nlohmann::json(nullptr);
    auto entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < msr.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < msr.entries.cols(); ++c)
            entries.push_back({msr.entries(r, c).real(), msr.entries(r, c).imag()});
    j["entries"] = std::move(entries);
    return j;
}

/// Inverse of to_json. The direction set is rebuilt from N.
inline MsrMatrix msr_from_json(const nlohmann::json& j)
{
    try {
        MsrMatrix msr;
        const int n = j.at("N").get<int>();
        msr.directions = make_directions(n);
        msr.ctx = WaveContext::restore(j.at("k").get<double>(), j.at("lambda").get<double>());
        msr.mode = j.at("mode").get<std::string>();
        msr.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("snr_db").is_null())
            msr.snr_db = j.at("snr_db").get<double>();
        const auto& entries = j.at("entries");
        if (entries.size() != static_cast<std::size_t>(n) * n)
            throw ConfigError("MSR JSON: expected " + std::to_string(n * n) + " entries");
        msr.entries.resize(n, n);
        std::size_t idx = 0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c, ++idx)
                msr.entries(r, c) = Complex(entries[idx].at(0).get<double>(), entries[idx].at(1).get<double>());
        return msr;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("MSR JSON: ") + e.what());
    }
}

} // namespace arcmig
