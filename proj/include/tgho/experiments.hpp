#pragma once

// Named experiments and custom sweeps. Each named experiment pins its
// published parameter set and exposes only the swept axes; everything else
// goes through `custom` with a full config file. Landauer sweeps are
// deterministic (byte-identical CSV on rerun); MD sweeps carry their seeds
// in the provenance line.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tgho/chain.hpp"
#include "tgho/config.hpp"
#include "tgho/csv.hpp"
#include "tgho/landauer.hpp"
#include "tgho/md.hpp"
#include "tgho/version.hpp"

namespace tgho {

enum class ExperimentName {
    fig3_contour,
    fig4_M_elements,
    fig5_gradient_map,
    fig6_quantum_diagonal,
    lengthdep_NB,
    lengthdep_NI,
    fig7_fk_sweep,
    custom
};

inline const char* experiment_name(ExperimentName e) {
    switch (e) {
        case ExperimentName::fig3_contour: return "fig3_contour";
        case ExperimentName::fig4_M_elements: return "fig4_M_elements";
        case ExperimentName::fig5_gradient_map: return "fig5_gradient_map";
        case ExperimentName::fig6_quantum_diagonal: return "fig6_quantum_diagonal";
        case ExperimentName::lengthdep_NB: return "lengthdep_NB";
        case ExperimentName::lengthdep_NI: return "lengthdep_NI";
        case ExperimentName::fig7_fk_sweep: return "fig7_fk_sweep";
        case ExperimentName::custom: return "custom";
    }
    return "?";
}

inline std::optional<ExperimentName> parse_experiment_name(const std::string& s) {
    for (auto e : {ExperimentName::fig3_contour, ExperimentName::fig4_M_elements,
                   ExperimentName::fig5_gradient_map, ExperimentName::fig6_quantum_diagonal,
                   ExperimentName::lengthdep_NB, ExperimentName::lengthdep_NI,
                   ExperimentName::fig7_fk_sweep, ExperimentName::custom})
        if (s == experiment_name(e)) return e;
    return std::nullopt;
}

struct AxisRange {
    double lo = 0.0, hi = 0.0;
    int count = 0;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i)
            v[static_cast<size_t>(i)] =
                count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        return v;
    }
};

struct ExperimentSpec {
    ExperimentName name = ExperimentName::custom;
    Regime regime = Regime::classical;
    std::filesystem::path output_dir;       ///< empty = compute only, no files
    std::optional<AxisRange> axis1, axis2;  ///< override the default sweep ranges
    std::optional<SimulationConfig> config; ///< required for custom
    std::optional<int> quad_points;
    std::optional<MDConfig> md;             ///< override MD settings (fig7)
    int workers = 0;                        ///< 0 = hardware concurrency
    std::uint64_t seed = 0x7500c0ffeeULL;   ///< MD base seed
};

/// Grid of computed values; `values[k]` is row-major over the axes product.
struct SweepResult {
    std::string experiment;
    Regime regime = Regime::classical;
    std::vector<std::string> axis_names;
    std::vector<std::vector<double>> axes;
    std::vector<std::string> value_names;
    std::vector<std::vector<double>> values;
    std::string config_hash;
    std::string code_version = version_string;
    std::uint64_t seed = 0;

    size_t grid_size() const {
        size_t n = 1;
        for (const auto& a : axes) n *= a.size();
        return n;
    }
    double value(const std::string& name, size_t flat) const {
        for (size_t k = 0; k < value_names.size(); ++k)
            if (value_names[k] == name) return values[k][flat];
        throw std::invalid_argument("no value column '" + name + "'");
    }
    bool has_value(const std::string& name) const {
        return std::find(value_names.begin(), value_names.end(), name) != value_names.end();
    }
};

namespace detail {

inline void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn) {
    int nw = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    nw = std::max(1, std::min<int>(nw, static_cast<int>(count)));
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    if (nw == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Pinned parameter sets

/// Five-bead diode chain: interior springs k_2 = k_3 = 1, zone springs
/// kappa_left (k_0 = k_1) and kappa_right (k_4 = k_5), unit masses.
inline ChainSpec diode5_chain(double kappa_left, double kappa_right) {
    ChainSpec c = uniform_chain(5, 1.0);
    c.springs[0] = c.springs[1] = kappa_left;
    c.springs[4] = c.springs[5] = kappa_right;
    return c;
}

/// Baths for the five-bead diode: beads 1,2 hot and 4,5 cold, gamma = 1.
inline BathSpec diode5_baths(double t1, double t2, double t4, double t5) {
    return zone_baths(5, 2, 1.0, {t1, t2}, {t4, t5});
}

/// Length-dependence chain: zone springs 1 (left) and 0.1 (right),
/// interior springs 1, unit masses.
inline ChainSpec lengthdep_chain(int n_b, int n_i) {
    const int n = 2 * n_b + n_i;
    ChainSpec c = uniform_chain(n, 1.0);
    for (int i = n - n_b + 1; i <= n; ++i) c.springs[static_cast<size_t>(i)] = 0.1;
    return c;
}

inline BathSpec lengthdep_baths(int n_b, int n_i) {
    return zone_baths(2 * n_b + n_i, n_b, 1.0, linear_gradient_profile(1.0, 0.5, n_b),
                      linear_gradient_profile(0.2, 0.1, n_b));
}

/// Five-bead Frenkel-Kontorova junction: springs 0.1 on the left half and
/// 1 on the right, onsite amplitudes V_L on the first two beads and V_R on
/// the last three.
inline ChainSpec fk5_chain() {
    ChainSpec c = uniform_chain(5, 1.0);
    c.springs[0] = c.springs[1] = c.springs[2] = 0.1;
    return c;
}

inline FKPotentialSpec fk5_potential(double v_left, double v_right = 1.0) {
    FKPotentialSpec fk;
    fk.amplitudes = {v_left, v_left, v_right, v_right, v_right};
    fk.period = 1.0;
    return fk;
}

// ---------------------------------------------------------------------------
// Experiment driver

namespace detail {

inline std::string sweep_provenance_text(const ExperimentSpec& spec,
                                         const std::vector<std::vector<double>>& axes) {
    std::ostringstream out;
    out << "experiment = " << experiment_name(spec.name) << '\n';
    out << "regime = " << regime_name(spec.regime) << '\n';
    for (size_t a = 0; a < axes.size(); ++a) {
        out << "axis" << a << " =";
        for (double v : axes[a]) out << ' ' << format_g17(v);
        out << '\n';
    }
    if (spec.quad_points) out << "quad.points = " << *spec.quad_points << '\n';
    if (spec.config) out << canonical_config_text(*spec.config);
    if (spec.name == ExperimentName::fig7_fk_sweep || spec.config) {
        const MDConfig md = spec.md ? *spec.md : MDConfig{};
        out << "md.dt = " << format_g17(md.dt) << '\n'
            << "md.equilibration_steps = " << md.equilibration_steps << '\n'
            << "md.production_steps = " << md.production_steps << '\n'
            << "md.realizations = " << md.realizations << '\n';
        out << "seed = " << spec.seed << '\n';
    }
    return out.str();
}

inline QuadratureSpec sweep_quadrature(const ChainSpec& chain, const ExperimentSpec& spec) {
    QuadratureSpec q = default_quadrature(chain);
    if (spec.quad_points) q.points = *spec.quad_points;
    return q;
}

} // namespace detail

inline SweepResult run_experiment(const ExperimentSpec& spec) {
    SweepResult res;
    res.experiment = experiment_name(spec.name);
    res.regime = spec.regime;
    res.seed = spec.seed;

    auto landauer_sweep = [&](const std::vector<std::string>& axis_names,
                              const std::vector<std::vector<double>>& axes,
                              const std::function<std::pair<ChainSpec, BathSpec>(
                                  double, double)>& model_at) {
        res.axis_names = axis_names;
        res.axes = axes;
        res.value_names = {"J", "J_rev", "delta", "ratio", "ratio_sym"};
        const size_t n0 = axes[0].size();
        const size_t n1 = axes.size() > 1 ? axes[1].size() : 1;
        const size_t total = n0 * n1;
        res.values.assign(res.value_names.size(), std::vector<double>(total, 0.0));
        detail::parallel_for(total, spec.workers, [&](size_t flat) {
            const double a0 = axes[0][flat / n1];
            const double a1 = axes.size() > 1 ? axes[1][flat % n1] : 0.0;
            auto [chain, baths] = model_at(a0, a1);
            const QuadratureSpec quad = detail::sweep_quadrature(chain, spec);
            const CurrentReport r = rectification(chain, baths, quad, spec.regime, 1);
            res.values[0][flat] = r.total_forward;
            res.values[1][flat] = r.total_reverse.value_or(0.0);
            res.values[2][flat] = r.delta.value_or(0.0);
            const double ratio = r.ratio ? *r.ratio : std::numeric_limits<double>::quiet_NaN();
            res.values[3][flat] = ratio;
            res.values[4][flat] = std::isnan(ratio) ? ratio : std::max(ratio, 1.0 / ratio);
        });
    };

    switch (spec.name) {
        case ExperimentName::fig3_contour: {
            const AxisRange a1 = spec.axis1.value_or(AxisRange{0.1, 2.0, 41});
            const AxisRange a2 = spec.axis2.value_or(AxisRange{0.1, 2.0, 41});
            landauer_sweep({"kappa_left", "kappa_right"}, {a1.values(), a2.values()},
                           [&](double kl, double kr) {
                               return std::pair{diode5_chain(kl, kr),
                                                diode5_baths(1.0, 0.5, 0.2, 0.1)};
                           });
            break;
        }
        case ExperimentName::fig4_M_elements: {
            const AxisRange a1 = spec.axis1.value_or(AxisRange{0.1, 2.0, 41});
            const AxisRange a2 = spec.axis2.value_or(AxisRange{0.1, 2.0, 41});
            res.axis_names = {"kappa_left", "kappa_right"};
            res.axes = {a1.values(), a2.values()};
            res.value_names = {"M_14", "M_25", "M_15", "M_24"};
            const size_t n1 = res.axes[1].size();
            const size_t total = res.axes[0].size() * n1;
            res.values.assign(res.value_names.size(), std::vector<double>(total, 0.0));
            detail::parallel_for(total, spec.workers, [&](size_t flat) {
                const ChainSpec chain =
                    diode5_chain(res.axes[0][flat / n1], res.axes[1][flat % n1]);
                const BathSpec baths = diode5_baths(1.0, 0.5, 0.2, 0.1);
                const auto m =
                    compute_M(chain, baths, detail::sweep_quadrature(chain, spec), 1);
                res.values[0][flat] = m.at(1, 4);
                res.values[1][flat] = m.at(2, 5);
                res.values[2][flat] = m.at(1, 5);
                res.values[3][flat] = m.at(2, 4);
            });
            break;
        }
        case ExperimentName::fig5_gradient_map: {
            const AxisRange a1 = spec.axis1.value_or(AxisRange{0.0, 10.0, 21});
            const AxisRange a2 = spec.axis2.value_or(AxisRange{0.0, 10.0, 21});
            landauer_sweep({"dT_hot", "dT_cold"}, {a1.values(), a2.values()},
                           [&](double dth, double dtc) {
                               return std::pair{diode5_chain(2.0, 0.1),
                                                diode5_baths(10.0, 10.0 - dth, dtc, 0.0)};
                           });
            break;
        }
        case ExperimentName::fig6_quantum_diagonal: {
            res.regime = Regime::quantum;   // the purely-quantum diagonal
            const AxisRange a1 = spec.axis1.value_or(AxisRange{0.0, 10.0, 21});
            res.axis_names = {"dT"};
            res.axes = {a1.values()};
            res.value_names = {"J", "J_rev", "delta", "ratio", "ratio_sym"};
            const size_t total = res.axes[0].size();
            res.values.assign(res.value_names.size(), std::vector<double>(total, 0.0));
            detail::parallel_for(total, spec.workers, [&](size_t flat) {
                const double dt = res.axes[0][flat];
                const ChainSpec chain = diode5_chain(2.0, 0.1);
                const BathSpec baths = diode5_baths(10.0, 10.0 - dt, dt, 0.0);
                const QuadratureSpec quad = detail::sweep_quadrature(chain, spec);
                const CurrentReport r =
                    rectification(chain, baths, quad, Regime::quantum, 1);
                res.values[0][flat] = r.total_forward;
                res.values[1][flat] = r.total_reverse.value_or(0.0);
                res.values[2][flat] = r.delta.value_or(0.0);
                const double ratio =
                    r.ratio ? *r.ratio : std::numeric_limits<double>::quiet_NaN();
                res.values[3][flat] = ratio;
                res.values[4][flat] = std::isnan(ratio) ? ratio : std::max(ratio, 1.0 / ratio);
            });
            break;
        }
        case ExperimentName::lengthdep_NB: {
            const AxisRange a1 = spec.axis1.value_or(AxisRange{2.0, 8.0, 7});
            landauer_sweep({"n_b"}, {a1.values()}, [&](double nb_d, double) {
                const int nb = static_cast<int>(std::lround(nb_d));
                return std::pair{lengthdep_chain(nb, 1), lengthdep_baths(nb, 1)};
            });
            break;
        }
        case ExperimentName::lengthdep_NI: {
            const AxisRange a1 = spec.axis1.value_or(AxisRange{1.0, 30.0, 30});
            landauer_sweep({"n_i"}, {a1.values()}, [&](double ni_d, double) {
                const int ni = static_cast<int>(std::lround(ni_d));
                return std::pair{lengthdep_chain(2, ni), lengthdep_baths(2, ni)};
            });
            break;
        }
        case ExperimentName::fig7_fk_sweep: {
            const AxisRange a1 = spec.axis1.value_or(AxisRange{0.0, 5.0, 6});
            res.axis_names = {"V_L"};
            res.axes = {a1.values()};
            res.value_names = {"J",     "J_err",     "J_rev", "J_rev_err",
                               "ratio", "ratio_err", "delta", "delta_err"};
            const size_t total = res.axes[0].size();
            res.values.assign(res.value_names.size(), std::vector<double>(total, 0.0));
            MDConfig md = spec.md ? *spec.md : MDConfig{};
            md.base_seed = spec.seed;
            for (size_t flat = 0; flat < total; ++flat) {   // MD saturates the cores itself
                MDConfig md_point = md;
                md_point.base_seed = md.base_seed + 1000003ULL * flat;
                const auto fkr =
                    run_fk_rectification(fk5_chain(), fk5_potential(res.axes[0][flat]), 1.0,
                                         0.1, md_point, spec.workers);
                res.values[0][flat] = fkr.forward.mean_current;
                res.values[1][flat] = fkr.forward.stderr_mean;
                res.values[2][flat] = fkr.reverse.mean_current;
                res.values[3][flat] = fkr.reverse.stderr_mean;
                res.values[4][flat] = fkr.ratio;
                res.values[5][flat] = fkr.ratio_error;
                res.values[6][flat] = fkr.delta;
                res.values[7][flat] = fkr.delta_error;
            }
            break;
        }
        case ExperimentName::custom: {
            if (!spec.config)
                throw ConfigError("custom experiment needs a full configuration file");
            const SimulationConfig& cfg = *spec.config;
            QuadratureSpec quad = cfg.quad;
            if (cfg.quad_auto) quad.omega_max = 10.0 * max_chain_frequency(cfg.chain);
            if (spec.quad_points) quad.points = *spec.quad_points;
            res.axis_names = {"point"};
            res.axes = {{0.0}};
            if (cfg.fk) {
                MDConfig md = spec.md ? *spec.md : cfg.md;
                const Model model = validate(cfg.chain, cfg.baths);
                if (model.thermostated != std::vector<int>{1, cfg.chain.n})
                    throw ConfigError(
                        "FK molecular dynamics runs thermostat only beads 1 and N");
                const double th = cfg.baths.temperature(1);
                const double tc = cfg.baths.temperature(cfg.chain.n);
                const auto fkr = run_fk_rectification(cfg.chain, *cfg.fk, th, tc, md,
                                                      spec.workers, cfg.baths.friction(1));
                res.value_names = {"J", "J_err", "J_rev", "J_rev_err", "ratio", "ratio_err"};
                res.values = {{fkr.forward.mean_current}, {fkr.forward.stderr_mean},
                              {fkr.reverse.mean_current}, {fkr.reverse.stderr_mean},
                              {fkr.ratio},                {fkr.ratio_error}};
            } else {
                const CurrentReport r =
                    rectification(cfg.chain, cfg.baths, quad, spec.regime, spec.workers);
                res.value_names = {"J", "J_rev", "delta", "ratio", "conservation_residual"};
                res.values = {{r.total_forward},
                              {r.total_reverse.value_or(0.0)},
                              {r.delta.value_or(0.0)},
                              {r.ratio.value_or(std::numeric_limits<double>::quiet_NaN())},
                              {r.conservation_residual}};
            }
            break;
        }
    }

    res.config_hash = text_hash(detail::sweep_provenance_text(spec, res.axes));

    // shape invariant
    for (const auto& v : res.values)
        if (v.size() != res.grid_size())
            throw std::logic_error("sweep value shape does not match axes product");

    if (!spec.output_dir.empty()) {
        std::filesystem::create_directories(spec.output_dir);
        CsvTable csv;
        csv.provenance = {{"config_hash", res.config_hash},
                          {"code_version", res.code_version},
                          {"experiment", res.experiment},
                          {"regime", regime_name(res.regime)},
                          {"seed", std::to_string(res.seed)}};
        csv.header = res.axis_names;
        for (const auto& v : res.value_names) csv.header.push_back(v);
        const size_t n1 = res.axes.size() > 1 ? res.axes[1].size() : 1;
        for (size_t flat = 0; flat < res.grid_size(); ++flat) {
            std::vector<CsvCell> row;
            row.emplace_back(res.axes[0][flat / n1]);
            if (res.axes.size() > 1) row.emplace_back(res.axes[1][flat % n1]);
            for (const auto& v : res.values) row.emplace_back(v[flat]);
            csv.add_row(std::move(row));
        }
        csv.save(spec.output_dir / (res.experiment + ".csv"));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Summaries

struct SummaryCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SummaryEntry {
    std::string experiment;
    std::string config_hash;
    double peak_ratio = 0.0;                 ///< max of ratio_sym (or ratio)
    std::vector<double> peak_location;       ///< axis values at the peak
    std::vector<SummaryCheck> checks;
};

struct Summary {
    std::vector<SummaryEntry> entries;
    std::string code_version = version_string;
};

namespace detail {

inline void experiment_checks(const SweepResult& r, SummaryEntry& e) {
    auto add = [&](const std::string& name, bool pass, const std::string& det) {
        e.checks.push_back({name, pass, det});
    };
    const size_t total = r.grid_size();
    if (r.experiment == "fig3_contour" && r.regime == Regime::classical) {
        add("peak_ratio_near_1.4", e.peak_ratio > 1.3 && e.peak_ratio < 1.5,
            "peak max(R,1/R) = " + format_g17(e.peak_ratio));
    } else if (r.experiment == "fig4_M_elements") {
        bool ok = true;
        for (const auto& col : r.values)
            for (double v : col) ok = ok && v >= 0.0;
        add("all_M_nonnegative", ok, "");
    } else if (r.experiment == "fig6_quantum_diagonal") {
        double r0 = r.value("ratio", 0);
        add("unbiased_endpoint_R_equals_1", std::abs(r0 - 1.0) < 1e-6,
            "R(dT=0) = " + format_g17(r0));
        double dev = 0.0;
        for (size_t i = 0; i < total; ++i)
            dev = std::max(dev, std::abs(r.value("ratio", i) - 1.0));
        add("quantum_diode_present", dev > 1e-4, "max |R-1| = " + format_g17(dev));
    } else if (r.experiment == "lengthdep_NB") {
        bool mono = true;
        for (size_t i = 0; i + 1 < total; ++i)
            mono = mono && r.value("ratio_sym", i + 1) <= r.value("ratio_sym", i) + 1e-9;
        add("ratio_decays_with_zone_size", mono, "");
    } else if (r.experiment == "lengthdep_NI") {
        bool conv = total >= 4;
        for (size_t i = total >= 4 ? total - 4 : 0; i + 1 < total; ++i) {
            const double a = r.value("ratio_sym", i), b = r.value("ratio_sym", i + 1);
            conv = conv && std::abs(b - a) <= 0.01 * std::abs(a);
        }
        add("ratio_saturates_with_interior_size", conv, "");
    } else if (r.experiment == "fig7_fk_sweep") {
        bool diode = false;
        for (size_t i = 0; i < total; ++i)
            diode = diode ||
                    std::abs(r.value("ratio", i) - 1.0) > 2.0 * r.value("ratio_err", i);
        add("fk_diode_beyond_2_stderr", diode, "");
    } else if (r.experiment == "custom" && r.has_value("conservation_residual")) {
        const double c = r.value("conservation_residual", 0);
        add("current_conservation", c < 1e-8, "residual = " + format_g17(c));
    }
}

} // namespace detail

/// Merge one or more sweep results into a single summary. Results claiming
/// the same experiment must carry the same config hash.
inline Summary summarize(const std::vector<SweepResult>& results) {
    Summary s;
    std::map<std::string, std::string> seen;
    for (const auto& r : results) {
        auto it = seen.find(r.experiment);
        if (it != seen.end() && it->second != r.config_hash)
            throw ConfigError("refusing to merge '" + r.experiment +
                              "' results with mismatched config hashes (" + it->second +
                              " vs " + r.config_hash + ")");
        seen[r.experiment] = r.config_hash;

        SummaryEntry e;
        e.experiment = r.experiment;
        e.config_hash = r.config_hash;
        const std::string col = r.has_value("ratio_sym") ? "ratio_sym"
                                : r.has_value("ratio")   ? "ratio"
                                                         : "";
        if (!col.empty()) {
            size_t arg = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < r.grid_size(); ++i) {
                const double v = r.value(col, i);
                if (std::isfinite(v) && v > best) {
                    best = v;
                    arg = i;
                }
            }
            e.peak_ratio = best;
            const size_t n1 = r.axes.size() > 1 ? r.axes[1].size() : 1;
            e.peak_location.push_back(r.axes[0][arg / n1]);
            if (r.axes.size() > 1) e.peak_location.push_back(r.axes[1][arg % n1]);
        }
        detail::experiment_checks(r, e);
        s.entries.push_back(std::move(e));
    }
    return s;
}

inline std::string summary_json(const Summary& s) {
    std::ostringstream out;
    out << "{\n  \"code_version\": \"" << s.code_version << "\",\n  \"experiments\": [";
    for (size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        out << (i ? ",\n" : "\n") << "    {\"experiment\": \"" << e.experiment
            << "\", \"config_hash\": \"" << e.config_hash << "\", \"peak_ratio\": "
            << format_g17(e.peak_ratio) << ", \"peak_location\": [";
        for (size_t j = 0; j < e.peak_location.size(); ++j)
            out << (j ? ", " : "") << format_g17(e.peak_location[j]);
        out << "], \"checks\": [";
        for (size_t j = 0; j < e.checks.size(); ++j)
            out << (j ? ", " : "") << "{\"name\": \"" << e.checks[j].name
                << "\", \"pass\": " << (e.checks[j].pass ? "true" : "false") << "}";
        out << "]}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

inline std::string summary_text(const Summary& s) {
    std::ostringstream out;
    out << "experiment            peak_R      at\n";
    for (const auto& e : s.entries) {
        out << e.experiment;
        for (size_t i = e.experiment.size(); i < 22; ++i) out << ' ';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%-11.5g", e.peak_ratio);
        out << buf << " (";
        for (size_t i = 0; i < e.peak_location.size(); ++i)
            out << (i ? ", " : "") << format_g17(e.peak_location[i]);
        out << ")  [" << e.config_hash << "]\n";
        for (const auto& c : e.checks)
            out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
                << (c.detail.empty() ? "" : "  " + c.detail) << '\n';
    }
    if (s.entries.empty()) out << "(no results)\n";
    return out.str();
}

/// Write summary.txt and summary.json into `dir`.
inline void write_summary(const Summary& s, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "summary.txt", std::ios::binary);
        out << summary_text(s);
    }
    {
        std::ofstream out(dir / "summary.json", std::ios::binary);
        out << summary_json(s);
    }
}

} // namespace tgho
