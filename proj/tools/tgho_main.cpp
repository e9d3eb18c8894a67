// Command-line driver: named experiments, custom runs, the acceptance
// suite and Green's-function dumps.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 acceptance-check failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tgho/tgho.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

tgho::AxisRange parse_axis(const std::string& text) {
    tgho::AxisRange r;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &r.lo, &r.hi, &r.count) != 3 || r.count < 1)
        throw tgho::ConfigError("axis must be 'lo:hi:count', got '" + text + "'");
    return r;
}

tgho::Regime parse_regime(const std::string& text) {
    if (text == "classical") return tgho::Regime::classical;
    if (text == "quantum") return tgho::Regime::quantum;
    throw tgho::ConfigError("regime must be 'classical' or 'quantum'");
}

std::map<std::string, std::string> provenance_for(const tgho::SimulationConfig& cfg,
                                                  std::uint64_t seed) {
    return {{"config_hash", tgho::config_hash(cfg)},
            {"code_version", tgho::version_string},
            {"seed", std::to_string(seed)}};
}

int cmd_run(const std::string& name, const std::string& regime, const std::string& out_dir,
            const std::string& axis1, const std::string& axis2, int points,
            std::uint64_t seed, int workers, const std::string& config_path) {
    const auto exp_name = tgho::parse_experiment_name(name);
    if (!exp_name || *exp_name == tgho::ExperimentName::custom)
        throw tgho::ConfigError("unknown experiment '" + name +
                                "' (use the 'custom' subcommand for full configs)");
    tgho::ExperimentSpec spec;
    spec.name = *exp_name;
    spec.regime = parse_regime(regime);
    spec.output_dir = out_dir;
    if (!axis1.empty()) spec.axis1 = parse_axis(axis1);
    if (!axis2.empty()) spec.axis2 = parse_axis(axis2);
    if (points > 0) spec.quad_points = points;
    spec.seed = seed;
    spec.workers = workers;
    if (!config_path.empty()) {
        const auto cfg = tgho::load_config(config_path);
        spec.md = cfg.md;   // MD settings are the only config-borne overrides here
    }
    const tgho::SweepResult result = tgho::run_experiment(spec);
    const tgho::Summary summary = tgho::summarize({result});
    if (!spec.output_dir.empty()) tgho::write_summary(summary, spec.output_dir);
    std::cout << tgho::summary_text(summary);
    return kExitOk;
}

int cmd_custom(const std::string& config_path, const std::string& regime,
               const std::string& out_dir, int points, std::uint64_t seed, int workers,
               long long dump_every) {
    tgho::SimulationConfig cfg = tgho::load_config(config_path);
    tgho::ExperimentSpec spec;
    spec.name = tgho::ExperimentName::custom;
    spec.regime = parse_regime(regime);
    spec.output_dir = out_dir;
    spec.config = cfg;
    if (points > 0) spec.quad_points = points;
    spec.seed = seed;
    spec.workers = workers;

    const auto prov = provenance_for(cfg, cfg.md.base_seed);
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::filesystem::create_directories(dir);

    if (cfg.fk) {
        // trajectory tap (forward direction), gated by --dump-trajectory
        tgho::CsvTable traj;
        std::mutex traj_mutex;
        traj.header = {"step", "realization", "bead", "position", "velocity"};
        traj.provenance = prov;
        tgho::TrajectoryTap tap;
        tap.every = dump_every;
        tap.sink = [&](int realization, const tgho::MDState& s) {
            std::lock_guard<std::mutex> lock(traj_mutex);
            for (int b = 1; b <= cfg.chain.n; ++b)
                traj.add_row({static_cast<long long>(s.step),
                              static_cast<long long>(realization), static_cast<long long>(b),
                              s.u[static_cast<size_t>(b - 1)] + b * cfg.chain.spacing,
                              s.v[static_cast<size_t>(b - 1)]});
        };
        const tgho::Model model = tgho::validate(cfg.chain, cfg.baths);
        if (model.thermostated != std::vector<int>{1, cfg.chain.n})
            throw tgho::ConfigError("FK molecular dynamics thermostats only beads 1 and N");
        const auto fkr = tgho::run_fk_rectification(
            cfg.chain, *cfg.fk, cfg.baths.temperature(1), cfg.baths.temperature(cfg.chain.n),
            cfg.md, workers, cfg.baths.friction(1), dump_every > 0 ? &tap : nullptr);

        tgho::CsvTable per_real;
        per_real.header = {"direction", "realization", "current"};
        per_real.provenance = prov;
        for (size_t r = 0; r < fkr.forward.per_realization.size(); ++r)
            per_real.add_row({std::string("forward"), static_cast<long long>(r),
                              fkr.forward.per_realization[r]});
        for (size_t r = 0; r < fkr.reverse.per_realization.size(); ++r)
            per_real.add_row({std::string("reverse"), static_cast<long long>(r),
                              fkr.reverse.per_realization[r]});
        per_real.save(dir / "md_realizations.csv");

        tgho::CsvTable windows;
        windows.header = {"realization", "window", "mean_current"};
        windows.provenance = prov;
        for (size_t r = 0; r < fkr.forward.window_means.size(); ++r)
            for (size_t w = 0; w < fkr.forward.window_means[r].size(); ++w)
                windows.add_row({static_cast<long long>(r), static_cast<long long>(w),
                                 fkr.forward.window_means[r][w]});
        windows.save(dir / "md_windows.csv");
        if (dump_every > 0) traj.save(dir / "trajectory.csv");

        std::cout << "J  = " << tgho::format_g17(fkr.forward.mean_current) << " +/- "
                  << tgho::format_g17(fkr.forward.stderr_mean) << "\n"
                  << "Jr = " << tgho::format_g17(fkr.reverse.mean_current) << " +/- "
                  << tgho::format_g17(fkr.reverse.stderr_mean) << "\n"
                  << "R  = " << tgho::format_g17(fkr.ratio) << " +/- "
                  << tgho::format_g17(fkr.ratio_error) << "\n";
        return kExitOk;
    }

    tgho::QuadratureSpec quad = cfg.quad;
    if (cfg.quad_auto) quad.omega_max = 10.0 * tgho::max_chain_frequency(cfg.chain);
    if (points > 0) quad.points = points;
    const auto report =
        tgho::rectification(cfg.chain, cfg.baths, quad, spec.regime, workers);
    const auto m = tgho::compute_M(cfg.chain, cfg.baths, quad, workers);
    tgho::write_m_matrix_csv(m, prov, dir / "m_matrix.csv");
    tgho::write_current_report_csv(report, prov, dir / "current_report.csv");
    std::cout << "J      = " << tgho::format_g17(report.total_forward) << "\n"
              << "Jrev   = " << tgho::format_g17(report.total_reverse.value_or(0.0)) << "\n"
              << "deltaJ = " << tgho::format_g17(report.delta.value_or(0.0)) << "\n";
    if (report.ratio)
        std::cout << "R      = " << tgho::format_g17(*report.ratio) << "\n";
    else if (report.ratio_unbounded)
        std::cout << "R      = unbounded (reverse current below numeric floor)\n";
    std::cout << "conservation residual = "
              << tgho::format_g17(report.conservation_residual) << "\n";
    return kExitOk;
}

int cmd_check(bool skip_md, int workers, const std::string& out_dir) {
    const auto results = tgho::run_acceptance_checks(!skip_md, workers);
    bool all_pass = true;
    std::ostringstream report;
    for (const auto& r : results) {
        const bool counted = !(skip_md && (r.id == 9 || r.id == 10));
        report << (r.pass ? "[PASS] " : (counted ? "[FAIL] " : "[SKIP] ")) << "criterion "
               << r.id << ": " << r.name << (r.detail.empty() ? "" : "  -- " + r.detail)
               << "\n";
        if (counted) all_pass = all_pass && r.pass;
    }
    std::cout << report.str();
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(std::filesystem::path(out_dir) / "acceptance_report.txt");
        out << report.str();
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_dump_green(const std::string& config_path, const std::string& out_file,
                   int points, double omega_max) {
    const tgho::SimulationConfig cfg = tgho::load_config(config_path);
    tgho::validate(cfg.chain, cfg.baths);
    double wmax = omega_max > 0.0 ? omega_max : 10.0 * tgho::max_chain_frequency(cfg.chain);
    const int np = points > 0 ? points : 512;
    tgho::CsvTable csv;
    csv.header = {"omega", "l", "m", "re", "im"};
    csv.provenance = provenance_for(cfg, 0);
    for (int i = 0; i < np; ++i) {
        const double omega = wmax * (i + 0.5) / np;
        const auto g = tgho::green_elements(cfg.chain, cfg.baths, omega);
        for (const auto& [pair, value] : g.values)
            csv.add_row({omega, static_cast<long long>(pair.first),
                         static_cast<long long>(pair.second), value.real(), value.imag()});
    }
    csv.save(out_file);
    std::cout << "wrote " << out_file << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat currents and thermal rectification in harmonic chains "
                 "coupled to multiple Langevin baths"};
    app.require_subcommand(1);

    std::string name, regime = "classical", out_dir, axis1, axis2, config_path, out_file;
    int points = 0, workers = 0;
    long long dump_every = 0;
    std::uint64_t seed = 0x7500c0ffeeULL;
    double omega_max = 0.0;
    bool skip_md = false;

    auto* run = app.add_subcommand("run", "run a named experiment");
    run->add_option("experiment", name,
                    "fig3_contour | fig4_M_elements | fig5_gradient_map | "
                    "fig6_quantum_diagonal | lengthdep_NB | lengthdep_NI | fig7_fk_sweep")
        ->required();
    run->add_option("--regime", regime, "classical or quantum");
    run->add_option("--out", out_dir, "output directory for CSV + summary");
    run->add_option("--axis1", axis1, "override sweep axis 1 as lo:hi:count");
    run->add_option("--axis2", axis2, "override sweep axis 2 as lo:hi:count");
    run->add_option("--points", points, "frequency-grid points");
    run->add_option("--seed", seed, "MD base seed");
    run->add_option("--workers", workers, "worker threads (0 = all cores)");
    run->add_option("--config", config_path, "config file with md.* overrides");

    auto* custom = app.add_subcommand("custom", "run a fully configured model");
    custom->add_option("--config", config_path, "model configuration file")->required();
    custom->add_option("--regime", regime, "classical or quantum");
    custom->add_option("--out", out_dir, "output directory");
    custom->add_option("--points", points, "frequency-grid points");
    custom->add_option("--seed", seed, "MD base seed");
    custom->add_option("--workers", workers, "worker threads");
    custom->add_option("--dump-trajectory", dump_every,
                       "dump thinned MD trajectory every N steps");

    auto* check = app.add_subcommand("check", "run the acceptance suite");
    check->add_flag("--skip-md", skip_md, "skip the MD-based checks");
    check->add_option("--workers", workers, "worker threads");
    check->add_option("--out", out_dir, "directory for acceptance_report.txt");

    auto* dump = app.add_subcommand("dump-green", "dump Green's-function elements as CSV");
    dump->add_option("--config", config_path, "model configuration file")->required();
    dump->add_option("--out", out_file, "output CSV path")->required();
    dump->add_option("--points", points, "frequency samples");
    dump->add_option("--omega-max", omega_max, "frequency cutoff");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(name, regime, out_dir, axis1, axis2, points, seed, workers,
                           config_path);
        if (custom->parsed())
            return cmd_custom(config_path, regime, out_dir, points, seed, workers, dump_every);
        if (check->parsed()) return cmd_check(skip_md, workers, out_dir);
        if (dump->parsed()) return cmd_dump_green(config_path, out_file, points, omega_max);
    } catch (const tgho::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tgho::ValidationError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tgho::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const tgho::SingularMatrixError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const tgho::IntegrationBlowupError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
