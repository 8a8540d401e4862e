#pragma once

// End-to-end runs: forward solve -> MSR -> noise -> SVD -> imaging ->
// structure comparison, and the identity sweep. Everything is computed in
// memory first; files are only written once the whole run has succeeded.

#include "analytic.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "imaging.hpp"
#include "msr.hpp"
#include "random.hpp"
#include "spectral.hpp"
#include "version.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace arcmig {

// ---------------------------------------------------------------------------
// Identity sweep

struct SweepSpec {
    int count = 200;
    std::vector<int> n_values{256};
    double lambda = 0.4;
    double max_kx = 20.0;
    std::uint64_t seed = 1;
    double sum_tolerance = 1e-3;
    double oracle_tolerance = 1e-9;
};

struct SweepRow {
    std::string identity; // "identity1" (xi != zeta) or "identity2" (xi = zeta)
    Point xi;
    Point zeta;
    Point x;
    int n;
    IdentityReport report;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    nlohmann::json summary;
    bool passed = true;
};

/// Random (xi, zeta, x) tuples from derive_seed(seed, "identities"). The first
/// five tuples sit at x = 0 and every fourth has zeta = xi.
inline SweepResult verify_identities(const SweepSpec& spec)
{
    if (spec.count < 1)
        throw ConfigError("verify-identities: count must be positive");
    const auto ctx = WaveContext::from_wavelength(spec.lambda);
    std::mt19937_64 engine(derive_seed(spec.seed, "identities"));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SweepResult out;
    double max_sum = 0.0, max_series = 0.0, max_id1 = 0.0, max_id2 = 0.0, max_corrected = 0.0, max_origin = 0.0;
    for (int i = 0; i < spec.count; ++i) {
        const Point xi = unit_vector(angle(engine));
        const Point zeta = (i % 4 == 3) ? xi : unit_vector(angle(engine));
        const double radius = i < 5 ? 0.0 : spec.max_kx / ctx.k() * unit(engine);
        const Point x = radius * unit_vector(angle(engine));
        for (int n : spec.n_values) {
            SweepRow row{(xi - zeta).norm() == 0.0 ? "identity2" : "identity1", xi, zeta, x, n,
                         identity_report(xi, zeta, x, n, ctx)};
            const auto& rep = row.report;
            max_sum = std::max(max_sum, rep.residual_lhs_vs_quadrature);
            max_series = std::max(max_series, rep.residual_quadrature_vs_series);
            max_corrected = std::max(max_corrected, rep.residual_quadrature_vs_corrected);
            (rep.same_direction ? max_id2 : max_id1) =
                std::max(rep.same_direction ? max_id2 : max_id1, rep.residual_quadrature_vs_quoted);
            if (radius == 0.0)
                max_origin = std::max(max_origin, rep.residual_lhs_vs_quadrature);
            if (rep.residual_lhs_vs_quadrature >= spec.sum_tolerance
                || rep.residual_quadrature_vs_series > spec.oracle_tolerance)
                out.passed = false;
            out.rows.push_back(std::move(row));
        }
    }
    out.summary = {{"rows", out.rows.size()},
                   {"n_values", spec.n_values},
                   {"lambda", spec.lambda},
                   {"max_kx", spec.max_kx},
                   {"max_sum_vs_quadrature", max_sum},
                   {"max_quadrature_vs_series", max_series},
                   {"max_quadrature_vs_quoted_identity1", max_id1},
                   {"max_quadrature_vs_quoted_identity2", max_id2},
                   {"max_quadrature_vs_corrected_form", max_corrected},
                   {"max_origin_sum_vs_quadrature", max_origin},
                   {"sum_tolerance", spec.sum_tolerance},
                   {"oracle_tolerance", spec.oracle_tolerance},
                   {"passed", out.passed}};
    return out;
}

// ---------------------------------------------------------------------------
// Imaging runs

struct SchemeResult {
    std::string text;
    std::string tag;
    ImageGrid image;
    ContrastStats stats;
    TheoremComparison theorem;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::string hash;
    ArcSample sample;
    double arc_length = 0.0;
    MsrMatrix clean;
    MsrMatrix data; // after noise
    SvdBasis basis;
    std::vector<SchemeResult> schemes;
    std::optional<SweepResult> identities;
};

/// Identity sweep attached to a run: default sweep at the run's wavelength and seed.
inline SweepSpec sweep_for(const ExperimentConfig& c)
{
    SweepSpec s;
    s.lambda = c.lambda;
    s.seed = c.seed;
    return s;
}

/// Noise stream seed for a master seed.
inline std::uint64_t noise_seed(std::uint64_t master) { return derive_seed(master, "noise"); }

/// Forward data for a config: the clean matrix and, when snr_db is set, the
/// noisy one.
inline std::pair<MsrMatrix, MsrMatrix> simulate(const ExperimentConfig& c)
{
    const auto ctx = WaveContext::from_wavelength(c.lambda);
    const Arc arc = build_arc(c.arc);
    const auto dirs = make_directions(c.n);
    MsrMatrix clean = assemble(arc, dirs, ctx, c.mode, AssembleOptions{c.bie_nodes});
    MsrMatrix data = c.snr_db ? add_awgn(clean, *c.snr_db, noise_seed(c.seed)) : clean;
    data.seed = c.seed;
    return {std::move(clean), std::move(data)};
}

inline ExperimentResult run_experiment(const ExperimentConfig& c)
{
    validate(c);
    ExperimentResult r;
    r.config = c;
    r.hash = config_hash(c);

    const auto ctx = WaveContext::from_wavelength(c.lambda);
    const Arc arc = build_arc(c.arc);
    const auto dirs = make_directions(c.n);
    const GridSpec grid = c.grid ? *c.grid : default_grid(ctx);
    r.arc_length = arc.length();
    r.sample = sample_arc(arc, c.lambda);

    std::tie(r.clean, r.data) = simulate(c);
    r.basis = select_rank(decompose(r.data), c.rank);

    for (const auto& text : c.schemes) {
        SchemeResult s;
        s.text = text;
        s.tag = scheme_tag(text);
        const auto scheme = parse_scheme(text, &r.sample);
        s.image = imaging_map(r.basis, dirs, ctx, scheme, grid, c.strict_grid);
        s.stats = contrast_statistics(s.image, arc, ctx);
        s.theorem = theorem_vs_pipeline_report(r.sample, dirs, ctx, scheme, grid);
        r.schemes.push_back(std::move(s));
    }
    if (c.identities)
        r.identities = verify_identities(sweep_for(c));
    return r;
}

// ---------------------------------------------------------------------------
// Serialisation

inline nlohmann::json metadata(const std::string& hash, std::uint64_t seed)
{
    return {{"config_hash", hash}, {"seed", seed}, {"version", version}};
}

/// Comment line prepended to CSV artifacts.
inline std::string csv_header(const std::string& hash, std::uint64_t seed)
{
    return "# arcmig " + std::string(version) + " config_hash=" + hash + " seed=" + std::to_string(seed) + "\n";
}

inline nlohmann::json to_json(const ContrastStats& s)
{
    return {{"on_arc_mean", s.on_arc_mean},   {"off_arc_mean", s.off_arc_mean}, {"off_arc_p95", s.off_arc_p95},
            {"contrast", s.contrast},         {"argmax_distance", s.argmax_distance},
            {"on_count", s.on_count},         {"off_count", s.off_count}};
}

inline std::string sweep_hash(const SweepSpec& s)
{
    const nlohmann::json j = {{"count", s.count},   {"n_values", s.n_values}, {"lambda", s.lambda},
                              {"max_kx", s.max_kx}, {"seed", s.seed}};
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
    return os.str();
}

/// `hash` defaults to the sweep's own hash; runs pass their config hash.
inline std::map<std::string, std::string> render_sweep(const SweepSpec& spec, const SweepResult& r,
                                                       std::string hash = {})
{
    if (hash.empty())
        hash = sweep_hash(spec);
    std::ostringstream csv;
    csv << csv_header(hash, spec.seed);
    csv << "case,n,xi_x,xi_y,zeta_x,zeta_y,x_x,x_y,k,sum_vs_quad,quad_vs_quoted,quad_vs_series,quad_vs_corrected\n";
    csv.precision(17);
    const double k = 2.0 * std::numbers::pi / spec.lambda;
    for (const auto& row : r.rows) {
        const auto& rep = row.report;
        csv << row.identity << ',' << row.n << ',' << row.xi.x() << ',' << row.xi.y() << ',' << row.zeta.x() << ','
            << row.zeta.y() << ',' << row.x.x() << ',' << row.x.y() << ',' << k << ','
            << rep.residual_lhs_vs_quadrature << ',' << rep.residual_quadrature_vs_quoted << ','
            << rep.residual_quadrature_vs_series << ',' << rep.residual_quadrature_vs_corrected << '\n';
    }
    auto summary = r.summary;
    summary["metadata"] = metadata(hash, spec.seed);
    return {{"identities.csv", csv.str()}, {"identities.json", summary.dump(1) + "\n"}};
}

/// File name -> content for every artifact of a run.
inline std::map<std::string, std::string> render_artifacts(const ExperimentResult& r)
{
    const auto& c = r.config;
    const auto meta = metadata(r.hash, c.seed);
    std::map<std::string, std::string> files;

    auto msr_json = to_json(r.data);
    msr_json["metadata"] = meta;
    files["msr.json"] = msr_json.dump(1) + "\n";

    {
        std::ostringstream os;
        os << csv_header(r.hash, c.seed);
        write_singular_values_csv(os, r.basis);
        files["singular_values.csv"] = os.str();
    }

    nlohmann::json contrast;
    contrast["metadata"] = meta;
    contrast["signal_rank"] = r.basis.signal_rank;
    contrast["arc_samples"] = r.sample.count();
    contrast["arc_length"] = r.arc_length;
    nlohmann::json theorem;
    theorem["metadata"] = meta;

    for (const auto& s : r.schemes) {
        std::ostringstream csv;
        csv << csv_header(r.hash, c.seed);
        write_image_csv(csv, s.image);
        files["map_" + s.tag + ".csv"] = csv.str();

        std::ostringstream pgm;
        write_image_pgm(pgm, s.image);
        // PGM allows a comment after the magic number.
        std::string bytes = pgm.str();
        bytes.insert(3, "# arcmig " + std::string(version) + " config_hash=" + r.hash + " seed="
                            + std::to_string(c.seed) + "\n");
        files["map_" + s.tag + ".pgm"] = bytes;

        const auto& g = s.image.spec;
        nlohmann::json side;
        side["metadata"] = meta;
        side["scheme"] = s.text;
        side["N"] = c.n;
        side["lambda"] = c.lambda;
        side["k"] = r.data.ctx.k();
        side["mode"] = to_string(c.mode);
        side["snr_db"] = c.snr_db ? nlohmann::json(*c.snr_db) : nlohmann::json(nullptr);
        side["seed"] = c.seed;
        side["M"] = r.basis.signal_rank;
        side["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
                        {"y_max", g.y_max}, {"step", g.step},   {"nx", g.nx()},
                        {"ny", g.ny()},     {"coarse", s.image.coarse}};
        side["contrast"] = to_json(s.stats);
        files["map_" + s.tag + ".json"] = side.dump(1) + "\n";

        contrast["schemes"][s.text] = to_json(s.stats);
        theorem["schemes"][s.text] = to_json(s.theorem);
    }
    files["contrast.json"] = contrast.dump(1) + "\n";
    files["theorem.json"] = theorem.dump(1) + "\n";
    if (r.identities)
        files.merge(render_sweep(sweep_for(c), *r.identities, r.hash));
    return files;
}

/// Writes `files` into `dir`. Each file goes to a temporary name first and is
/// renamed once every write has succeeded; on failure nothing new remains.
inline void write_artifacts(const std::filesystem::path& dir, const std::map<std::string, std::string>& files)
{
    namespace fs = std::filesystem;
    std::vector<fs::path> staged;
    std::vector<fs::path> committed;
    const auto cleanup = [&] {
        std::error_code ec;
        for (const auto& p : staged)
            fs::remove(p, ec);
        for (const auto& p : committed)
            fs::remove(p, ec);
    };
    try {
        fs::create_directories(dir);
        for (const auto& [name, content] : files) {
            const fs::path tmp = dir / (name + ".partial");
            staged.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.close();
            if (!out)
                throw Error("cannot write " + tmp.string());
        }
        for (const auto& [name, content] : files) {
            fs::rename(dir / (name + ".partial"), dir / name);
            committed.push_back(dir / name);
        }
    } catch (const fs::filesystem_error& e) {
        cleanup();
        throw Error(std::string("output: ") + e.what());
    } catch (...) {
        cleanup();
        throw;
    }
}

} // namespace arcmig
