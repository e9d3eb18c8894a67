#pragma once

// Classical Langevin molecular dynamics for harmonic and Frenkel-Kontorova
// chains, BBK discretization. Dynamics run in displacement coordinates
// u_i = x_i - i*a with u_0 = u_{N+1} = 0 at the walls, so the onsite FK
// potential V_i cos(2 pi x_i / a) reads V_i cos(2 pi u_i / a + phase).
//
// One BBK step (per bead, c_i = gamma_i dt / 2 m_i):
//   v <- (1 - c_i) v + (dt/2m_i) F(u) + xi_1 / m_i
//   u <- u + dt v
//   v <- [v + (dt/2m_i) F(u) + xi_2 / m_i] / (1 + c_i)
// with independent Gaussian impulses xi of variance gamma_i T_i dt in each
// half kick (their sum carries the fluctuation-dissipation variance
// 2 gamma_i T_i dt per step). Unthermostated beads reduce to velocity
// Verlet. Noise is drawn in ascending bead order, first kick then second,
// so a trajectory is a pure function of its seed.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "tgho/chain.hpp"
#include "tgho/quadrature.hpp"

namespace tgho {

/// Onsite Frenkel-Kontorova potential amplitudes, one per bead.
struct FKPotentialSpec {
    std::vector<double> amplitudes;   ///< V_i >= 0 typically; finite
    double period = 1.0;              ///< equals the chain spacing a
    double phase = 0.0;               ///< optional phase of the cosine
};

struct MDConfig {
    double dt = 0.005;
    long long equilibration_steps = 2'000'000;
    long long production_steps = 10'000'000;
    int realizations = 16;
    std::uint64_t base_seed = 0x5eed5eedULL;
    std::pair<int, int> measure_bond{0, 0};   ///< (i, i+1); 0 = central bond
    int stationarity_windows = 8;             ///< running-mean diagnostic
};

struct MDResult {
    double mean_current = 0.0;
    double stderr_mean = 0.0;                     ///< standard error over realizations
    std::vector<double> per_realization;
    std::vector<double> per_bond;                 ///< production mean per bond, averaged
    std::vector<std::vector<double>> window_means;///< [realization][window]
    // trajectory meta
    long long equilibration_steps = 0;
    long long production_steps = 0;
    double dt = 0.0;
    std::uint64_t base_seed = 0;
    std::pair<int, int> bond{0, 0};
};

// ---------------------------------------------------------------------------
// Forces and energy

/// Harmonic + wall + pinning + optional FK forces on displacements u.
inline void chain_forces(const ChainSpec& chain, const FKPotentialSpec* fk,
                         const std::vector<double>& u, std::vector<double>& f) {
    const int n = chain.n;
    f.resize(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const double ui = u[static_cast<size_t>(i - 1)];
        const double ul = (i > 1) ? u[static_cast<size_t>(i - 2)] : 0.0;
        const double ur = (i < n) ? u[static_cast<size_t>(i)] : 0.0;
        double fi = -chain.spring(i - 1) * (ui - ul) + chain.spring(i) * (ur - ui) -
                    chain.pin(i) * ui;
        if (fk) {
            const double twopi_a = 2.0 * std::numbers::pi / fk->period;
            fi += fk->amplitudes[static_cast<size_t>(i - 1)] * twopi_a *
                  std::sin(twopi_a * ui + fk->phase);
        }
        f[static_cast<size_t>(i - 1)] = fi;
    }
}

inline double total_energy(const ChainSpec& chain, const FKPotentialSpec* fk,
                           const std::vector<double>& u, const std::vector<double>& v) {
    const int n = chain.n;
    double e = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double ui = u[static_cast<size_t>(i - 1)];
        e += 0.5 * chain.mass(i) * v[static_cast<size_t>(i - 1)] * v[static_cast<size_t>(i - 1)];
        e += 0.5 * chain.pin(i) * ui * ui;
        const double ul = (i > 1) ? u[static_cast<size_t>(i - 2)] : 0.0;
        e += 0.5 * chain.spring(i - 1) * (ui - ul) * (ui - ul);
        if (fk) {
            const double twopi_a = 2.0 * std::numbers::pi / fk->period;
            e += fk->amplitudes[static_cast<size_t>(i - 1)] *
                 std::cos(twopi_a * ui + fk->phase);
        }
    }
    e += 0.5 * chain.spring(n) * u[static_cast<size_t>(n - 1)] * u[static_cast<size_t>(n - 1)];
    return e;
}

// ---------------------------------------------------------------------------
// Integrator

struct MDState {
    std::vector<double> u, v, f;
    long long step = 0;
};

/// Gaussian noise source owned by one realization. The distribution caches
/// half of each Box-Muller pair, so it must travel with its engine for
/// trajectories to be pure functions of the seed.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : rng_(seed) {}
    double gaussian() { return gauss_(rng_); }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

inline MDState init_state(const ChainSpec& chain, const FKPotentialSpec* fk) {
    MDState s;
    s.u.assign(static_cast<size_t>(chain.n), 0.0);
    s.v.assign(static_cast<size_t>(chain.n), 0.0);
    chain_forces(chain, fk, s.u, s.f);
    return s;
}

/// One BBK step. Only size consistency is required of `baths`; the hot/cold
/// partition plays no role here, so fully undamped runs are legal.
inline void bbk_step(MDState& s, const ChainSpec& chain, const FKPotentialSpec* fk,
                     const BathSpec& baths, double dt, NoiseStream& noise) {
    const int n = chain.n;
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<size_t>(i);
        const double m = chain.masses[ui];
        const double g = baths.frictions[ui];
        const double c = g * dt / (2.0 * m);
        double dv = (0.5 * dt / m) * s.f[ui];
        if (g > 0.0) {
            const double sigma = std::sqrt(g * baths.temperatures[ui] * dt);
            if (sigma > 0.0) dv += sigma * noise.gaussian() / m;
            s.v[ui] = (1.0 - c) * s.v[ui] + dv;
        } else {
            s.v[ui] += dv;
        }
        s.u[ui] += dt * s.v[ui];
    }
    chain_forces(chain, fk, s.u, s.f);
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<size_t>(i);
        const double m = chain.masses[ui];
        const double g = baths.frictions[ui];
        const double c = g * dt / (2.0 * m);
        double dv = (0.5 * dt / m) * s.f[ui];
        if (g > 0.0) {
            const double sigma = std::sqrt(g * baths.temperatures[ui] * dt);
            if (sigma > 0.0) dv += sigma * noise.gaussian() / m;
            s.v[ui] = (s.v[ui] + dv) / (1.0 + c);
        } else {
            s.v[ui] += dv;
        }
    }
    ++s.step;
}

/// Instantaneous bond current through bond (i, i+1), positive toward
/// higher bead indices: j = (k_i/2)(v_i + v_{i+1})(u_i - u_{i+1}).
inline double bond_current(const ChainSpec& chain, const std::vector<double>& u,
                           const std::vector<double>& v, int bond) {
    const auto bi = static_cast<size_t>(bond - 1);
    return 0.5 * chain.spring(bond) * (v[bi] + v[bi + 1]) * (u[bi] - u[bi + 1]);
}

/// Time average of the bond-current estimator over a stored window.
inline double measure_current(std::span<const std::vector<double>> positions,
                              std::span<const std::vector<double>> velocities,
                              const ChainSpec& chain, int bond) {
    if (positions.empty() || positions.size() != velocities.size())
        throw std::invalid_argument("measure_current needs a nonempty matched window");
    detail::CompensatedSum s;
    for (size_t t = 0; t < positions.size(); ++t)
        s.add(bond_current(chain, positions[t], velocities[t], bond));
    return s.value() / static_cast<double>(positions.size());
}

// ---------------------------------------------------------------------------
// Steady-state runner

/// Deterministic per-realization stream seeds (splitmix64 of base ^ index).
inline std::uint64_t stream_seed(std::uint64_t base_seed, int realization) {
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(realization) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Optional per-step hook for trajectory dumps: called every `every` steps
/// of production with the current state.
struct TrajectoryTap {
    long long every = 0;
    std::function<void(int realization, const MDState&)> sink;
};

/// Run equilibration + production for every realization and average the
/// bond-current estimator. Realizations are independent (own seed, own
/// state) and may run concurrently; aggregation is index ordered.
inline MDResult run_steady_current(const ChainSpec& chain, const FKPotentialSpec* fk,
                                   const BathSpec& baths, const MDConfig& md,
                                   int workers = 0, const TrajectoryTap* tap = nullptr) {
    validate(chain, baths);
    if (!(md.dt > 0.0) || md.production_steps < 1 || md.realizations < 1)
        throw ValidationError({"MD config needs dt > 0, production_steps >= 1, realizations >= 1"});
    if (fk && fk->amplitudes.size() != static_cast<size_t>(chain.n))
        throw ValidationError({"FK amplitude list length does not match bead count"});
    if (fk && !(fk->period > 0.0)) throw ValidationError({"FK period must be positive"});

    const int n = chain.n;
    int bond = md.measure_bond.first;
    if (bond == 0) bond = n / 2;   // central bond by default
    if (bond < 1 || bond >= n)
        throw ValidationError({"measured bond must satisfy 1 <= i < N"});

    MDResult out;
    out.per_realization.assign(static_cast<size_t>(md.realizations), 0.0);
    out.per_bond.assign(static_cast<size_t>(n - 1), 0.0);
    out.window_means.assign(static_cast<size_t>(md.realizations), {});
    out.equilibration_steps = md.equilibration_steps;
    out.production_steps = md.production_steps;
    out.dt = md.dt;
    out.base_seed = md.base_seed;
    out.bond = {bond, bond + 1};

    std::vector<std::vector<double>> bond_acc(static_cast<size_t>(md.realizations));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run_one = [&](int r) {
        NoiseStream rng(stream_seed(md.base_seed, r));
        MDState s = init_state(chain, fk);
        const long long check_every = 1000;
        auto check_finite = [&]() {
            for (double x : s.u)
                if (!std::isfinite(x))
                    throw IntegrationBlowupError(s.step, "non-finite state at step " +
                                                             std::to_string(s.step) +
                                                             " (realization " +
                                                             std::to_string(r) + ")");
        };
        for (long long t = 0; t < md.equilibration_steps; ++t) {
            bbk_step(s, chain, fk, baths, md.dt, rng);
            if (s.step % check_every == 0) check_finite();
        }
        std::vector<detail::CompensatedSum> bonds(static_cast<size_t>(n - 1));
        const int nwin = std::max(1, md.stationarity_windows);
        std::vector<double> wmeans;
        detail::CompensatedSum win_acc;
        const long long win_len = std::max<long long>(1, md.production_steps / nwin);
        for (long long t = 0; t < md.production_steps; ++t) {
            bbk_step(s, chain, fk, baths, md.dt, rng);
            if (s.step % check_every == 0) check_finite();
            for (int b = 1; b < n; ++b)
                bonds[static_cast<size_t>(b - 1)].add(bond_current(chain, s.u, s.v, b));
            win_acc.add(bond_current(chain, s.u, s.v, bond));
            if ((t + 1) % win_len == 0 && static_cast<int>(wmeans.size()) < nwin) {
                wmeans.push_back(win_acc.value() / static_cast<double>(win_len));
                win_acc = {};
            }
            if (tap && tap->every > 0 && t % tap->every == 0) tap->sink(r, s);
        }
        auto& acc = bond_acc[static_cast<size_t>(r)];
        acc.resize(static_cast<size_t>(n - 1));
        for (int b = 0; b < n - 1; ++b)
            acc[static_cast<size_t>(b)] =
                bonds[static_cast<size_t>(b)].value() / static_cast<double>(md.production_steps);
        out.per_realization[static_cast<size_t>(r)] = acc[static_cast<size_t>(bond - 1)];
        out.window_means[static_cast<size_t>(r)] = std::move(wmeans);
    };

    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= md.realizations) break;
            try {
                run_one(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    int nw = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    nw = std::max(1, std::min(nw, md.realizations));
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    detail::CompensatedSum mean;
    for (double j : out.per_realization) mean.add(j);
    out.mean_current = mean.value() / static_cast<double>(md.realizations);
    if (md.realizations > 1) {
        detail::CompensatedSum ss;
        for (double j : out.per_realization) {
            const double d = j - out.mean_current;
            ss.add(d * d);
        }
        out.stderr_mean = std::sqrt(ss.value() / (md.realizations - 1.0) /
                                    static_cast<double>(md.realizations));
    }
    for (int b = 0; b < n - 1; ++b) {
        detail::CompensatedSum s;
        for (const auto& acc : bond_acc) s.add(acc[static_cast<size_t>(b)]);
        out.per_bond[static_cast<size_t>(b)] = s.value() / static_cast<double>(md.realizations);
    }
    return out;
}

// ---------------------------------------------------------------------------
// FK rectification

struct FKRectification {
    MDResult forward;    ///< T_hot at bead 1, T_cold at bead N
    MDResult reverse;    ///< temperatures swapped
    double ratio = 0.0;       ///< |J / Jtilde|
    double ratio_error = 0.0; ///< propagated from the two standard errors
    double delta = 0.0;       ///< J + Jtilde
    double delta_error = 0.0;
};

/// Forward and temperature-swapped runs for a chain whose outermost beads
/// are the only thermostated ones.
inline FKRectification run_fk_rectification(const ChainSpec& chain, const FKPotentialSpec& fk,
                                            double t_hot, double t_cold, const MDConfig& md,
                                            int workers = 0, double gamma = 1.0,
                                            const TrajectoryTap* tap = nullptr) {
    const int n = chain.n;
    FKRectification out;
    out.forward = run_steady_current(chain, &fk, end_baths(n, gamma, gamma, t_hot, t_cold), md,
                                     workers, tap);
    MDConfig md_rev = md;
    md_rev.base_seed = md.base_seed ^ 0xD1DEULL;   // decorrelate the two directions
    out.reverse = run_steady_current(chain, &fk, end_baths(n, gamma, gamma, t_cold, t_hot),
                                     md_rev, workers);

    const double jf = out.forward.mean_current;
    const double jr = out.reverse.mean_current;
    const double sf = out.forward.stderr_mean;
    const double sr = out.reverse.stderr_mean;
    out.delta = jf + jr;
    out.delta_error = std::sqrt(sf * sf + sr * sr);
    if (jr != 0.0) {
        out.ratio = std::abs(jf / jr);
        out.ratio_error =
            out.ratio * std::sqrt((sf / jf) * (sf / jf) + (sr / jr) * (sr / jr));
    }
    return out;
}

} // namespace tgho
