// arcmig command-line front end.
//
//   arcmig run --preset example1 --seed 3 --out out/run3
//   arcmig verify-identities --out out/identities
//   arcmig export-msr --config configs/example2.json --out msr.json
//   arcmig info --preset example2

#include <arcmig/arcmig.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct ConfigFlags {
    std::string config;
    std::string preset;
    std::optional<int> n;
    std::optional<double> lambda;
    std::optional<std::string> snr_db;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> schemes;
    std::optional<std::string> mode;
    std::optional<std::string> out;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f)
{
    auto* cfg = cmd->add_option("--config", f.config, "JSON experiment config");
    cmd->add_option("--preset", f.preset, "example1 or example2")->excludes(cfg);
    cmd->add_option("--n", f.n, "number of directions N");
    cmd->add_option("--lambda", f.lambda, "wavelength");
    cmd->add_option("--snr-db", f.snr_db, "noise level in dB, or 'none' for clean data");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--scheme", f.schemes, "test-vector scheme (repeatable; replaces the list)");
    cmd->add_option("--mode", f.mode, "forward solver: bie or kirchhoff");
    cmd->add_option("--out", f.out, "output path");
}

arcmig::ExperimentConfig resolve(const ConfigFlags& f)
{
    arcmig::ExperimentConfig c = arcmig::preset("example1");
    if (!f.preset.empty())
        c = arcmig::preset(f.preset);
    if (!f.config.empty())
        c = arcmig::load_config(f.config, c);
    if (f.n)
        c.n = *f.n;
    if (f.lambda)
        c.lambda = *f.lambda;
    if (f.snr_db) {
        if (*f.snr_db == "none")
            c.snr_db.reset();
        else {
            try {
                c.snr_db = std::stod(*f.snr_db);
            } catch (const std::exception&) {
                throw arcmig::ConfigError("--snr-db: expected a number or 'none'");
            }
        }
    }
    if (f.seed)
        c.seed = *f.seed;
    if (!f.schemes.empty())
        c.schemes = f.schemes;
    if (f.mode)
        c.mode = arcmig::parse_solver_mode(*f.mode);
    if (f.out)
        c.output = *f.out;
    arcmig::validate(c);
    return c;
}

int cmd_run(const ConfigFlags& f)
{
    const auto config = resolve(f);
    const auto result = arcmig::run_experiment(config);
    arcmig::write_artifacts(config.output, arcmig::render_artifacts(result));

    std::printf("config %s  seed %llu  mode %s  N %d  lambda %g\n", result.hash.c_str(),
                static_cast<unsigned long long>(config.seed), arcmig::to_string(config.mode).c_str(), config.n,
                config.lambda);
    std::printf("signal rank M = %d (arc samples %zu)\n", result.basis.signal_rank, result.sample.count());
    for (const auto& s : result.schemes)
        std::printf("  %-18s contrast %7.4f  argmax-to-arc %.4f\n", s.text.c_str(), s.stats.contrast,
                    s.stats.argmax_distance);
    std::printf("artifacts written to %s\n", config.output.c_str());
    if (result.identities && !result.identities->passed) {
        std::fprintf(stderr, "identity sweep failed: discrete sum or oracle mismatch\n");
        return 3;
    }
    return 0;
}

int cmd_export(const ConfigFlags& f)
{
    auto config = resolve(f);
    const auto [clean, data] = arcmig::simulate(config);
    auto j = arcmig::to_json(data);
    j["metadata"] = arcmig::metadata(arcmig::config_hash(config), config.seed);
    const std::filesystem::path out = f.out ? *f.out : std::string("msr.json");
    const auto dir = out.has_parent_path() ? out.parent_path() : std::filesystem::path(".");
    arcmig::write_artifacts(dir, {{out.filename().string(), j.dump(1) + "\n"}});
    std::printf("wrote %s (%dx%d, %s)\n", out.string().c_str(), config.n, config.n, data.mode.c_str());
    return 0;
}

int cmd_info(const ConfigFlags& f)
{
    std::printf("arcmig %s\n", arcmig::version);
    std::printf("presets: example1 (line, N=20, lambda=0.4), example2 (curve, N=32, lambda=0.5)\n");
    std::printf("schemes: xi_deg:<angle>, xi:<x>,<y>, incident_aligned, oracle_normal\n");
    const auto config = resolve(f);
    const auto ctx = arcmig::WaveContext::from_wavelength(config.lambda);
    const auto arc = arcmig::build_arc(config.arc);
    std::printf("arc length %.6f, lambda/2 samples %zu, k %.6f\n", arc.length(),
                arcmig::sample_arc(arc, config.lambda).count(), ctx.k());
    std::printf("config hash %s\n%s\n", arcmig::config_hash(config).c_str(), arcmig::to_json(config).dump(2).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Subspace migration imaging of sound-hard arcs"};
    app.require_subcommand(1);

    ConfigFlags run_flags;
    auto* run = app.add_subcommand("run", "simulate data and write imaging artifacts");
    add_config_flags(run, run_flags);

    ConfigFlags export_flags;
    auto* exp = app.add_subcommand("export-msr", "simulate data and write the MSR matrix as JSON");
    add_config_flags(exp, export_flags);

    ConfigFlags info_flags;
    auto* info = app.add_subcommand("info", "print version and the resolved config");
    add_config_flags(info, info_flags);

    arcmig::SweepSpec sweep;
    std::string sweep_out = "identities";
    std::optional<int> sweep_n;
    auto* verify = app.add_subcommand("verify-identities", "check the circle-average identities against oracles");
    verify->add_option("--count", sweep.count, "number of random tuples")->check(CLI::PositiveNumber);
    verify->add_option("--n", sweep_n, "number of directions in the discrete sum")->check(CLI::Range(8, 1 << 16));
    verify->add_option("--lambda", sweep.lambda, "wavelength")->check(CLI::PositiveNumber);
    verify->add_option("--seed", sweep.seed, "master seed");
    verify->add_option("--out", sweep_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_flags);
        if (exp->parsed())
            return cmd_export(export_flags);
        if (info->parsed())
            return cmd_info(info_flags);
        if (sweep_n)
            sweep.n_values = {*sweep_n};
        const auto result = arcmig::verify_identities(sweep);
        arcmig::write_artifacts(sweep_out, arcmig::render_sweep(sweep, result));
        std::printf("%s\n", result.summary.dump(2).c_str());
        return result.passed ? 0 : 3;
    } catch (const arcmig::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const arcmig::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
