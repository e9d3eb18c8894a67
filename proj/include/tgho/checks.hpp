#pragma once

// Acceptance checks: the properties this library promises. Each check is
// deterministic (fixed seeds) and returns pass/fail plus a short detail
// string; tolerances are part of the contract and are pinned here.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tgho/experiments.hpp"
#include "tgho/greens.hpp"
#include "tgho/landauer.hpp"
#include "tgho/md.hpp"

namespace tgho {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace checks_detail {

struct RandomModel {
    ChainSpec chain;
    BathSpec baths;
    double t_hot = 0.0, t_cold = 0.0;
};

/// Random stable chain with a random thermostat partition under a single
/// affinity (uniform T_hot on the hot set, T_cold on the cold set).
inline RandomModel random_single_affinity(std::mt19937_64& rng, int n_max = 12) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RandomModel m;
    const int n = 2 + static_cast<int>(uni(rng) * (n_max - 2 + 1) * 0.999999);
    m.chain.n = n;
    m.chain.spacing = 1.0;
    for (int i = 0; i < n; ++i) m.chain.masses.push_back(0.5 + 1.5 * uni(rng));
    m.chain.springs.push_back(uni(rng) < 0.25 ? 0.0 : 0.1 + 1.9 * uni(rng));   // wall k_0
    for (int i = 1; i < n; ++i) m.chain.springs.push_back(0.1 + 1.9 * uni(rng));
    m.chain.springs.push_back(uni(rng) < 0.25 ? 0.0 : 0.1 + 1.9 * uni(rng));   // wall k_N
    const bool pinned = uni(rng) < 0.5;
    for (int i = 0; i < n; ++i) m.chain.pinning.push_back(pinned ? uni(rng) : 0.0);

    const int nbath = 2 + static_cast<int>(uni(rng) * std::min(n, 6) * 0.999999);
    std::vector<int> beads(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) beads[static_cast<size_t>(i)] = i + 1;
    std::shuffle(beads.begin(), beads.end(), rng);
    beads.resize(static_cast<size_t>(std::min(nbath, n)));
    const int nhot = 1 + static_cast<int>(uni(rng) * (beads.size() - 1) * 0.999999);

    m.t_hot = 0.5 + 1.5 * uni(rng);
    m.t_cold = 0.05 + 0.4 * uni(rng);
    m.baths.frictions.assign(static_cast<size_t>(n), 0.0);
    m.baths.temperatures.assign(static_cast<size_t>(n), 0.0);
    for (size_t i = 0; i < beads.size(); ++i) {
        const int b = beads[i];
        m.baths.frictions[static_cast<size_t>(b - 1)] = 0.2 + 1.8 * uni(rng);
        const bool hot = static_cast<int>(i) < nhot;
        m.baths.temperatures[static_cast<size_t>(b - 1)] = hot ? m.t_hot : m.t_cold;
        (hot ? m.baths.hot_set : m.baths.cold_set).push_back(b);
    }
    std::sort(m.baths.hot_set.begin(), m.baths.hot_set.end());
    std::sort(m.baths.cold_set.begin(), m.baths.cold_set.end());
    return m;
}

/// Swap the two affinity temperatures on the sets (source <-> drain).
inline BathSpec exchange_affinities(const BathSpec& baths, double t_hot, double t_cold) {
    BathSpec out = baths;
    for (int b : baths.hot_set) out.temperatures[static_cast<size_t>(b - 1)] = t_cold;
    for (int b : baths.cold_set) out.temperatures[static_cast<size_t>(b - 1)] = t_hot;
    return out;
}

/// Random mirror-zone (TGHO) model: hot zone {1..nb}, cold {n-nb+1..n},
/// independent temperatures everywhere.
inline RandomModel random_tgho(std::mt19937_64& rng, int n, int nb) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RandomModel m;
    m.chain.n = n;
    for (int i = 0; i < n; ++i) m.chain.masses.push_back(0.5 + 1.5 * uni(rng));
    for (int i = 0; i <= n; ++i) m.chain.springs.push_back(0.1 + 1.9 * uni(rng));
    m.chain.pinning.assign(static_cast<size_t>(n), 0.0);
    std::vector<double> hot, cold;
    for (int i = 0; i < nb; ++i) {
        hot.push_back(0.05 + 1.95 * uni(rng));
        cold.push_back(0.05 + 1.95 * uni(rng));
    }
    m.baths = zone_baths(n, nb, 1.0, hot, cold);
    for (int b : m.baths.hot_set)
        m.baths.frictions[static_cast<size_t>(b - 1)] = 0.2 + 1.8 * uni(rng);
    for (int b : m.baths.cold_set)
        m.baths.frictions[static_cast<size_t>(b - 1)] = 0.2 + 1.8 * uni(rng);
    return m;
}

inline std::string fmt(double x) { return format_g17(x); }

} // namespace checks_detail

// ---------------------------------------------------------------------------

/// 1. Single-affinity no-rectification theorem, classical and quantum.
inline CheckResult check_no_rectification(int workers = 0) {
    using namespace checks_detail;
    std::mt19937_64 rng(0x1001);
    QuadratureSpec quad;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const RandomModel m = random_single_affinity(rng);
        quad = default_quadrature(m.chain, 20001);
        const BathSpec swapped = exchange_affinities(m.baths, m.t_hot, m.t_cold);

        const TransmissionMatrix tm = compute_M(m.chain, m.baths, quad, workers);
        const double jc = classical_currents(tm, m.baths).total_forward;
        const double jc_rev = classical_currents(tm, swapped).total_forward;
        worst = std::max(worst, std::abs(jc + jc_rev) / std::abs(jc));

        const double jq = quantum_currents(m.chain, m.baths, quad, workers).total_forward;
        const double jq_rev =
            quantum_currents(m.chain, swapped, quad, workers).total_forward;
        worst = std::max(worst, std::abs(jq + jq_rev) / std::abs(jq));
    }
    return {1, "single-affinity no-rectification (200 random chains)", worst < 1e-8,
            "max |J+Jrev|/|J| = " + fmt(worst) + " (tol 1e-8)"};
}

/// 2. Closed-form delta J equals the two-direction computation.
inline CheckResult check_closed_form_delta(int workers = 0) {
    using namespace checks_detail;
    std::mt19937_64 rng(0x1002);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    auto one = [&](const RandomModel& m) {
        const QuadratureSpec quad = default_quadrature(m.chain, 20001);
        const TransmissionMatrix tm = compute_M(m.chain, m.baths, quad, workers);
        const double closed = delta_j_closed_form(tm, m.baths);
        const CurrentReport r =
            rectification(m.chain, m.baths, quad, Regime::classical, workers);
        const double two = r.delta.value();
        worst = std::max(worst, std::abs(closed - two) / std::abs(two));
    };
    for (int trial = 0; trial < 100; ++trial) one(random_tgho(rng, 5, 2));
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 5 + static_cast<int>(uni(rng) * 7.999);
        const int nb_max = (n - 1) / 2;
        const int nb = 2 + static_cast<int>(uni(rng) * (nb_max - 2 + 1) * 0.999999);
        one(random_tgho(rng, n, nb));
    }
    return {2, "Eq.-level closed form for delta J (150 random configurations)",
            worst < 1e-8, "max rel deviation = " + fmt(worst) + " (tol 1e-8)"};
}

/// 3. Analytic minor determinants match numerical cofactors.
inline CheckResult check_minor_oracles() {
    using namespace checks_detail;
    std::mt19937_64 rng(0x1003);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    auto sample_case = [&](const ChainSpec& chain, const BathSpec& baths, int samples) {
        const double wmax = 10.0 * max_chain_frequency(chain);
        const int n = chain.n;
        for (int s = 0; s < samples; ++s) {
            const double omega = wmax * (s + 0.5) / samples;
            const auto a = build_inverse_green(chain, baths, omega);
            const cplx det = dense_determinant(a);
            const GreenElements g = green_elements(chain, baths, omega);
            for (auto [r, c] : {std::pair{1, n}, {1, n - 1}, {2, n}, {2, n - 1}}) {
                const double analytic = std::abs(analytic_minor(chain, baths, omega, r, c));
                const double numeric = std::abs(g.at(r, c)) * std::abs(det);
                worst = std::max(worst, std::abs(analytic - numeric) / analytic);
            }
        }
    };
    {   // asymmetric couplings, N = 5
        ChainSpec c = uniform_chain(5);
        c.springs = {2.0, 1.7, 1.0, 1.3, 0.6, 0.9};
        sample_case(c, zone_baths(5, 2, 0.8, {1, 1}, {1, 1}), 334);
    }
    {   // asymmetric couplings, N = 8
        ChainSpec c = uniform_chain(8);
        for (auto& k : c.springs) k = 0.1 + 1.9 * uni(rng);
        sample_case(c, zone_baths(8, 2, 1.3, {1, 1}, {1, 1}), 333);
    }
    {   // pinned uniform chain, N = 5
        ChainSpec c = uniform_chain(5, 1.2);
        c.pinning = {0.5, 0.5, 0.2, 0.1, 0.9};
        sample_case(c, zone_baths(5, 2, 1.0, {1, 1}, {1, 1}), 333);
    }
    return {3, "appendix minor determinants vs dense cofactors (1000 frequencies)",
            worst < 1e-10, "max rel deviation = " + fmt(worst) + " (tol 1e-10)"};
}

/// 4. Five-bead diode sweep peaks near R = 1.4.
inline CheckResult check_diode_peak(int workers = 0) {
    ExperimentSpec spec;
    spec.name = ExperimentName::fig3_contour;
    spec.regime = Regime::classical;
    spec.axis1 = AxisRange{0.1, 2.0, 21};
    spec.axis2 = AxisRange{0.1, 2.0, 21};
    spec.workers = workers;
    const SweepResult r = run_experiment(spec);
    double peak = 0.0;
    for (size_t i = 0; i < r.grid_size(); ++i)
        peak = std::max(peak, r.value("ratio_sym", i));
    return {4, "classical diode sweep peak max(R,1/R) = 1.4 +/- 0.1",
            peak > 1.3 && peak < 1.5, "peak = " + checks_detail::fmt(peak)};
}

/// 5. Purely-quantum diode at equal gradients.
inline CheckResult check_quantum_diode(int workers = 0) {
    using namespace checks_detail;
    const ChainSpec chain = diode5_chain(2.0, 0.1);
    const QuadratureSpec quad = default_quadrature(chain);
    std::ostringstream detail;
    bool pass = true;

    for (double dt : {2.0, 5.0, 8.0}) {
        const BathSpec baths = diode5_baths(10.0, 10.0 - dt, dt, 0.0);
        const CurrentReport rc = rectification(chain, baths, quad, Regime::classical, workers);
        const double rel = std::abs(rc.delta.value()) / std::abs(rc.total_forward);
        pass = pass && rel < 1e-8;

        const CurrentReport rq = rectification(chain, baths, quad, Regime::quantum, workers);
        const double ratio = rq.ratio.value();
        const double tol = ratio * (rq.total_forward_error / std::abs(rq.total_forward) +
                                    rq.total_reverse_error / std::abs(*rq.total_reverse));
        if (dt == 5.0)
            detail << "R(dT=5) = " << fmt(ratio) << ", quad tol = " << fmt(tol);
        pass = pass && std::abs(ratio - 1.0) > 10.0 * tol;
    }

    // R -> 1 at dT = 0 and a jump-free diagonal
    ExperimentSpec spec;
    spec.name = ExperimentName::fig6_quantum_diagonal;
    spec.axis1 = AxisRange{0.0, 10.0, 21};
    spec.workers = workers;
    const SweepResult sweep = run_experiment(spec);
    const double r0 = sweep.value("ratio", 0);
    pass = pass && std::abs(r0 - 1.0) < 1e-8;
    double lo = r0, hi = r0, jump = 0.0;
    for (size_t i = 0; i < sweep.grid_size(); ++i) {
        const double v = sweep.value("ratio", i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (i) jump = std::max(jump, std::abs(v - sweep.value("ratio", i - 1)));
    }
    pass = pass && jump <= 0.35 * (hi - lo) + 1e-6;
    return {5, "purely-quantum diode at equal gradients", pass, detail.str()};
}

/// 6. Rectification decays with zone size and saturates with interior size.
inline CheckResult check_length_trends(int workers = 0) {
    bool pass = true;
    std::ostringstream detail;
    {
        ExperimentSpec spec;
        spec.name = ExperimentName::lengthdep_NB;
        spec.axis1 = AxisRange{2.0, 8.0, 7};
        spec.workers = workers;
        const SweepResult r = run_experiment(spec);
        for (size_t i = 0; i + 1 < r.grid_size(); ++i)
            pass = pass && r.value("ratio_sym", i + 1) <= r.value("ratio_sym", i) + 1e-9;
        for (size_t i = 0; i < r.grid_size(); ++i)
            pass = pass && r.value("ratio_sym", i) >= 1.0 - 1e-9;
        detail << "R(N_B=2) = " << checks_detail::fmt(r.value("ratio_sym", 0))
               << ", R(N_B=8) = "
               << checks_detail::fmt(r.value("ratio_sym", r.grid_size() - 1));
    }
    {
        ExperimentSpec spec;
        spec.name = ExperimentName::lengthdep_NI;
        spec.axis1 = AxisRange{1.0, 30.0, 30};
        spec.workers = workers;
        const SweepResult r = run_experiment(spec);
        for (size_t i = 19; i + 1 < r.grid_size(); ++i) {
            const double a = r.value("ratio_sym", i), b = r.value("ratio_sym", i + 1);
            pass = pass && std::abs(b - a) < 0.01 * std::abs(a);
        }
    }
    return {6, "rectification decays with N_B and saturates with N_I", pass, detail.str()};
}

/// 7. Classical limit of the quantum currents at scaled temperatures.
inline CheckResult check_classical_limit(int workers = 0) {
    using namespace checks_detail;
    const double s = 1e3;
    const ChainSpec chain = diode5_chain(2.0, 0.1);
    const QuadratureSpec quad = default_quadrature(chain);
    const BathSpec cold = diode5_baths(1.0, 0.5, 0.2, 0.1);
    BathSpec scaled = cold;
    for (auto& t : scaled.temperatures) t *= s;
    const TransmissionMatrix tm = compute_M(chain, cold, quad, workers);
    const CurrentReport rc = classical_currents(tm, cold);
    const CurrentReport rq = quantum_currents(chain, scaled, quad, workers);
    double worst = 0.0;
    for (const auto& [l, jc] : rc.per_bath)
        worst = std::max(worst, std::abs(rq.per_bath.at(l) / s - jc) / std::abs(jc));
    return {7, "quantum currents reach the classical limit (x1000 temperatures)",
            worst < 0.01, "max per-bath rel deviation = " + fmt(worst) + " (tol 1%)"};
}

/// 8. Current conservation across every produced report.
inline CheckResult check_conservation(int workers = 0) {
    using namespace checks_detail;
    std::mt19937_64 rng(0x1008);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const RandomModel m = random_single_affinity(rng);
        BathSpec baths = m.baths;
        // independent temperatures per bath, beyond the single affinity
        std::uniform_real_distribution<double> uni(0.05, 2.0);
        for (int b : baths.hot_set) baths.temperatures[static_cast<size_t>(b - 1)] = uni(rng);
        for (int b : baths.cold_set) baths.temperatures[static_cast<size_t>(b - 1)] = uni(rng);
        const QuadratureSpec quad = default_quadrature(m.chain, 20001);
        worst = std::max(worst, classical_currents(compute_M(m.chain, baths, quad, workers),
                                                   baths)
                                    .conservation_residual);
        worst = std::max(worst,
                         quantum_currents(m.chain, baths, quad, workers).conservation_residual);
    }
    const ChainSpec chain = diode5_chain(2.0, 0.1);
    const QuadratureSpec quad = default_quadrature(chain);
    const BathSpec baths = diode5_baths(10.0, 7.0, 3.0, 0.0);
    worst = std::max(worst,
                     rectification(chain, baths, quad, Regime::quantum, workers)
                         .conservation_residual);
    return {8, "per-bath currents sum to zero (80+ reports)", worst < 1e-8,
            "max residual = " + fmt(worst) + " (tol 1e-8)"};
}

/// 9. Langevin MD reproduces the classical Landauer current.
inline CheckResult check_md_landauer(int workers = 0) {
    using namespace checks_detail;
    const ChainSpec chain = diode5_chain(2.0, 0.1);
    const BathSpec baths = diode5_baths(1.0, 0.5, 0.2, 0.1);
    const double j_landauer =
        classical_currents(compute_M(chain, baths, default_quadrature(chain), workers), baths)
            .total_forward;
    MDConfig md;   // library defaults
    md.base_seed = 0x1009;
    md.measure_bond = {2, 3};
    const MDResult r = run_steady_current(chain, nullptr, baths, md, workers);
    const double dev = std::abs(r.mean_current - j_landauer);
    const double tol = std::max(0.05 * std::abs(j_landauer), 2.0 * r.stderr_mean);
    return {9, "MD steady current matches Landauer within max(5%, 2 stderr)", dev < tol,
            "J_md = " + fmt(r.mean_current) + " +/- " + fmt(r.stderr_mean) +
                ", J_landauer = " + fmt(j_landauer)};
}

/// 10. Frenkel-Kontorova diode: effect present, symmetric control silent.
inline CheckResult check_fk_diode(int workers = 0) {
    using namespace checks_detail;
    MDConfig md;
    md.base_seed = 0x100A;
    md.measure_bond = {2, 3};
    bool pass = true;
    std::ostringstream detail;
    for (double vl : {0.0, 2.0, 4.0}) {
        const auto r = run_fk_rectification(fk5_chain(), fk5_potential(vl), 1.0, 0.1, md,
                                            workers);
        pass = pass && std::abs(r.ratio - 1.0) > 2.0 * r.ratio_error;
        detail << "R(V_L=" << vl << ") = " << fmt(r.ratio) << " +/- " << fmt(r.ratio_error)
               << "; ";
    }
    {   // mirror-symmetric control: uniform springs, V_L = V_R
        const auto r = run_fk_rectification(uniform_chain(5, 1.0), fk5_potential(1.0, 1.0),
                                            1.0, 0.1, md, workers);
        pass = pass && std::abs(r.ratio - 1.0) <= 2.0 * r.ratio_error;
        detail << "control R = " << fmt(r.ratio) << " +/- " << fmt(r.ratio_error);
    }
    return {10, "FK diode beyond 2 stderr; symmetric control at R = 1", pass, detail.str()};
}

/// 11. Effective diode scales quadratically with the bias.
inline CheckResult check_effective_diode(int workers = 0) {
    using namespace checks_detail;
    const ChainSpec chain = uniform_chain(5, 1.0);
    EffectiveFrictionSpec eff;
    eff.base = end_baths(5, 0.5, 2.0, 1.0, 0.5);
    eff.slope = 0.2;
    const QuadratureSpec quad = default_quadrature(chain, 50001);
    const double t_cold = 0.5;
    std::vector<double> lx, ly;
    for (int i = 0; i < 8; ++i) {
        const double dt = 0.02 * std::pow(10.0, i / 7.0);   // one decade
        const auto r = effective_diode(chain, eff, t_cold + dt, t_cold, quad, workers);
        lx.push_back(std::log(dt));
        ly.push_back(std::log(std::abs(r.delta.value())));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    EffectiveFrictionSpec flat = eff;
    flat.slope = 0.0;
    const auto r0 = effective_diode(chain, flat, t_cold + 0.2, t_cold, quad, workers);
    const double rel0 = std::abs(r0.delta.value()) / std::abs(r0.total_forward);
    const bool pass = slope > 1.9 && slope < 2.1 && rel0 < 1e-10;
    return {11, "effective diode: |delta J| ~ (T_h - T_c)^2, lambda = 0 silent", pass,
            "fitted exponent = " + fmt(slope) + ", lambda=0 residual = " + fmt(rel0)};
}

/// Run the whole suite (MD checks optional; they dominate the runtime).
inline std::vector<CheckResult> run_acceptance_checks(bool include_md = true,
                                                      int workers = 0) {
    std::vector<CheckResult> out;
    out.push_back(check_no_rectification(workers));
    out.push_back(check_closed_form_delta(workers));
    out.push_back(check_minor_oracles());
    out.push_back(check_diode_peak(workers));
    out.push_back(check_quantum_diode(workers));
    out.push_back(check_length_trends(workers));
    out.push_back(check_classical_limit(workers));
    out.push_back(check_conservation(workers));
    if (include_md) {
        out.push_back(check_md_landauer(workers));
        out.push_back(check_fk_diode(workers));
    } else {
        out.push_back({9, "MD steady current matches Landauer within max(5%, 2 stderr)",
                       false, "skipped (--skip-md)"});
        out.push_back({10, "FK diode beyond 2 stderr; symmetric control at R = 1", false,
                       "skipped (--skip-md)"});
    }
    out.push_back(check_effective_diode(workers));
    std::sort(out.begin(), out.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
    return out;
}

} // namespace tgho
