#pragma once

// Steady-state heat currents between Langevin baths attached to a harmonic
// chain. Classical per-bath currents are J_l = sum_m M_lm (T_l - T_m) with
// the transmission coefficients
//   M_lm = (gamma_l gamma_m / pi) Int dw w^2 |G_lm(w)|^2
// taken over the whole real line; the integrands are even so everything is
// evaluated as twice the integral over [0, omega_max]. The quantum currents
// replace w^2 (T_l - T_m) by w^3 [n_l(w) - n_m(w)] with Bose factors.
// Each unordered bead pair is integrated exactly once, which makes M
// symmetric to the bit and current conservation exact up to rounding.
//
// Units: hbar = k_B = 1; all quantities dimensionless.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tgho/chain.hpp"
#include "tgho/greens.hpp"
#include "tgho/quadrature.hpp"

namespace tgho {

enum class Regime { classical, quantum };

inline const char* regime_name(Regime r) {
    return r == Regime::classical ? "classical" : "quantum";
}

/// Bose-Einstein occupation, stable near w = 0 via expm1. Callers must
/// pass omega > 0; T == 0 maps to an empty bath and large w/T underflows
/// to zero instead of overflowing.
inline double bose_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    const double x = omega / temperature;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

// ---------------------------------------------------------------------------
// Spectral integrals shared by the classical and quantum paths

namespace detail {

struct SpectralRequest {
    bool quantum = false;
    std::vector<double> temps_forward;   // per bead, 1-based offset by 1
    std::vector<double> temps_reverse;   // empty = no reverse slots
};

struct SpectralResult {
    std::vector<int> beads;                    // thermostated beads, ascending
    std::vector<std::pair<int, int>> pairs;    // (l, m) with l <= m
    // Integrals over [0, omega_max]; *_half on the coarsened grid.
    std::vector<double> m_int, m_int_half;     // w^2 |G_lm|^2
    std::vector<double> qf_int, qf_int_half;   // w^3 |G_lm|^2 (n_l - n_m), forward temps
    std::vector<double> qr_int, qr_int_half;   // same, reverse temps

    size_t pair_index(int l, int m) const {
        for (size_t p = 0; p < pairs.size(); ++p)
            if (pairs[p] == std::pair{std::min(l, m), std::max(l, m)}) return p;
        throw std::invalid_argument("bead pair not thermostated");
    }
};

inline SpectralResult spectral_pass(const Model& model, const QuadratureSpec& quad,
                                    const SpectralRequest& req, int points, int workers) {
    SpectralResult res;
    res.beads = model.thermostated;
    const size_t nb = res.beads.size();
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = i; j < nb; ++j) res.pairs.emplace_back(res.beads[i], res.beads[j]);
    const size_t np = res.pairs.size();
    const int groups = req.quantum ? (req.temps_reverse.empty() ? 2 : 3) : 1;
    const int slots = static_cast<int>(np) * groups;

    const double h = quad.omega_max / static_cast<double>(points - 1);
    const double nudge = model.zero_frequency_singular ? 1e-6 * h : 0.0;
    const ChainSpec& chain = model.chain;
    const BathSpec& baths = model.baths;

    auto make_sampler = [&, nudge]() -> GridSampler {
        // Per-worker scratch.
        auto lu = std::make_shared<TridiagFactor>();
        auto col = std::make_shared<std::vector<cplx>>();
        auto g2 = std::make_shared<std::vector<double>>(np);
        auto nf = std::make_shared<std::vector<double>>(nb);
        auto nr = std::make_shared<std::vector<double>>(nb);
        return [&, lu, col, g2, nf, nr](size_t j, double omega, double* out) {
            if (j == 0) {
                if (nudge == 0.0) {
                    // Anchored chain: G(0) is finite and the w^2 prefactor
                    // kills the node exactly.
                    for (int s = 0; s < static_cast<int>(np) * groups; ++s) out[s] = 0.0;
                    return;
                }
                omega = nudge;
            }
            if (!lu->factor_model(chain, baths, omega))
                throw SingularMatrixError("inverse Green matrix singular at omega = " +
                                          std::to_string(omega));
            for (size_t mi = 0; mi < nb; ++mi) {
                lu->solve_unit(res.beads[mi] - 1, *col);
                for (size_t li = 0; li <= mi; ++li) {
                    const cplx v = (*col)[static_cast<size_t>(res.beads[li] - 1)];
                    (*g2)[li * nb - li * (li + 1) / 2 + mi] = std::norm(v);
                }
            }
            const double w2 = omega * omega;
            for (size_t p = 0; p < np; ++p) out[p] = w2 * (*g2)[p];
            if (groups >= 2) {
                for (size_t i = 0; i < nb; ++i) {
                    (*nf)[i] = bose_occupation(
                        omega, req.temps_forward[static_cast<size_t>(res.beads[i] - 1)]);
                    if (groups == 3)
                        (*nr)[i] = bose_occupation(
                            omega, req.temps_reverse[static_cast<size_t>(res.beads[i] - 1)]);
                }
                const double w3 = w2 * omega;
                size_t p = 0;
                for (size_t li = 0; li < nb; ++li) {
                    for (size_t mi = li; mi < nb; ++mi, ++p) {
                        const double t = w3 * (*g2)[p];
                        out[np + p] = t * ((*nf)[li] - (*nf)[mi]);
                        if (groups == 3) out[2 * np + p] = t * ((*nr)[li] - (*nr)[mi]);
                    }
                }
            }
        };
    };

    const GridSums sums =
        integrate_grid(quad.omega_max, points, slots, workers, make_sampler);
    auto slice = [&](const std::vector<double>& v, int group) {
        return std::vector<double>(v.begin() + static_cast<long>(np) * group,
                                   v.begin() + static_cast<long>(np) * (group + 1));
    };
    res.m_int = slice(sums.full, 0);
    res.m_int_half = slice(sums.half, 0);
    if (groups >= 2) {
        res.qf_int = slice(sums.full, 1);
        res.qf_int_half = slice(sums.half, 1);
    }
    if (groups == 3) {
        res.qr_int = slice(sums.full, 2);
        res.qr_int_half = slice(sums.half, 2);
    }
    return res;
}

/// Trapezoid or grid-doubling adaptive evaluation per the quadrature spec.
inline SpectralResult spectral_integrals(const Model& model, const QuadratureSpec& quad,
                                         const SpectralRequest& req, int workers) {
    require_quadrature_valid(quad, model.chain);
    if (quad.scheme == QuadratureSpec::Scheme::trapezoid)
        return spectral_pass(model, quad, req, quad.points, workers);

    // Adaptive: double the grid until every integral settles.
    constexpr int kMaxDoublings = 10;
    constexpr double kRelTol = 1e-9;
    int points = std::max(quad.points, 1025);
    SpectralResult prev = spectral_pass(model, quad, req, points, workers);
    for (int it = 0; it < kMaxDoublings; ++it) {
        points = 2 * (points - 1) + 1;
        SpectralResult cur = spectral_pass(model, quad, req, points, workers);
        auto settled = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double scale = 1e-300;
            for (double x : b) scale = std::max(scale, std::abs(x));
            for (size_t i = 0; i < a.size(); ++i)
                if (std::abs(a[i] - b[i]) > kRelTol * scale) return false;
            return true;
        };
        if (settled(prev.m_int, cur.m_int) && settled(prev.qf_int, cur.qf_int) &&
            settled(prev.qr_int, cur.qr_int))
            return cur;
        prev = std::move(cur);
    }
    throw QuadratureError("adaptive quadrature exceeded its refinement budget");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Transmission matrix

/// Bath-to-bath transmission coefficients M_lm over thermostated pairs.
struct TransmissionMatrix {
    int n = 0;
    std::vector<int> beads;            ///< thermostated beads, ascending
    QuadratureSpec quad;
    double quad_rel_error = 0.0;       ///< Richardson estimate, relative to max entry

    double at(int l, int m) const {
        return values_.at({std::min(l, m), std::max(l, m)});
    }
    const std::map<std::pair<int, int>, double>& values() const { return values_; }
    void set(int l, int m, double v) { values_[{std::min(l, m), std::max(l, m)}] = v; }

private:
    std::map<std::pair<int, int>, double> values_;
};

/// M_lm = (gamma_l gamma_m / pi) Int_-inf^inf dw w^2 |G_lm(w)|^2, evaluated
/// as twice the [0, omega_max] integral. Symmetric by construction.
inline TransmissionMatrix compute_M(const ChainSpec& chain, const BathSpec& baths,
                                    const QuadratureSpec& quad, int workers = 0) {
    const Model model = validate(chain, baths);
    detail::SpectralRequest req;
    const auto res = detail::spectral_integrals(model, quad, req, workers);
    TransmissionMatrix m;
    m.n = chain.n;
    m.beads = res.beads;
    m.quad = quad;
    double max_val = 1e-300, max_err = 0.0;
    for (size_t p = 0; p < res.pairs.size(); ++p) {
        const auto [l, mm] = res.pairs[p];
        const double pref = 2.0 * baths.friction(l) * baths.friction(mm) / std::numbers::pi;
        m.set(l, mm, pref * res.m_int[p]);
        max_val = std::max(max_val, pref * std::abs(res.m_int[p]));
        max_err = std::max(max_err, pref * std::abs(res.m_int[p] - res.m_int_half[p]) / 3.0);
    }
    m.quad_rel_error = max_err / max_val;
    return m;
}

// ---------------------------------------------------------------------------
// Current reports

/// Per-bath and total currents. Sign convention: J_l > 0 means the bath at
/// bead l pumps energy into the chain. total_forward sums the hot set;
/// total_reverse is the same sum after the temperature profile has been
/// mirrored, so a perfectly symmetric junction gives delta = J + Jrev = 0.
struct CurrentReport {
    Regime regime = Regime::classical;
    std::map<int, double> per_bath;            ///< forward J_l, all thermostated beads
    double total_forward = 0.0;                ///< J, summed over hot_set
    std::optional<double> total_reverse;       ///< Jtilde
    std::optional<double> delta;               ///< J + Jtilde
    std::optional<double> ratio;               ///< |J / Jtilde|
    bool ratio_unbounded = false;              ///< |Jtilde| under the numeric floor
    std::map<int, double> per_bath_reverse;

    double conservation_residual = 0.0;   ///< |sum_l J_l| / sum_l |J_l|
    double hot_cold_mismatch = 0.0;       ///< |sum_hot + sum_cold| / scale
    double total_forward_error = 0.0;     ///< quadrature estimate (abs), quantum path
    double total_reverse_error = 0.0;
};

namespace detail {

inline void finalize_report(CurrentReport& r, const BathSpec& baths) {
    CompensatedSum all, abs_all, hot, cold;
    for (const auto& [l, j] : r.per_bath) {
        all.add(j);
        abs_all.add(std::abs(j));
    }
    for (int l : baths.hot_set) hot.add(r.per_bath.at(l));
    for (int l : baths.cold_set) cold.add(r.per_bath.at(l));
    const double scale = std::max(abs_all.value(), 1e-300);
    r.total_forward = hot.value();
    r.conservation_residual = std::abs(all.value()) / scale;
    r.hot_cold_mismatch = std::abs(hot.value() + cold.value()) / scale;
}

inline void fill_reversal(CurrentReport& r) {
    const double scale = [&] {
        double s = 0.0;
        for (const auto& [l, j] : r.per_bath) s += std::abs(j);
        return std::max(s, 1e-300);
    }();
    const double jf = r.total_forward;
    const double jr = *r.total_reverse;
    r.delta = jf + jr;
    if (std::abs(jr) < 1e-14 * scale) {
        r.ratio_unbounded = true;
        r.ratio.reset();
    } else {
        r.ratio = std::abs(jf / jr);
    }
}

} // namespace detail

/// Classical forward currents J_l = sum_m M_lm (T_l - T_m).
inline CurrentReport classical_currents(const TransmissionMatrix& m, const BathSpec& baths) {
    CurrentReport r;
    r.regime = Regime::classical;
    for (int l : m.beads) {
        detail::CompensatedSum s;
        for (int mm : m.beads)
            if (mm != l) s.add(m.at(l, mm) * (baths.temperature(l) - baths.temperature(mm)));
        r.per_bath[l] = s.value();
    }
    detail::finalize_report(r, baths);
    return r;
}

/// Quantum forward currents from Eq.-level Bose factors; the w -> 0 limit
/// of the integrand is finite and handled by the grid (the w^3 prefactor
/// vanishes faster than the occupations diverge).
inline CurrentReport quantum_currents(const ChainSpec& chain, const BathSpec& baths,
                                      const QuadratureSpec& quad, int workers = 0) {
    const Model model = validate(chain, baths);
    detail::SpectralRequest req;
    req.quantum = true;
    req.temps_forward = baths.temperatures;
    const auto res = detail::spectral_integrals(model, quad, req, workers);
    CurrentReport r;
    r.regime = Regime::quantum;
    std::map<int, detail::CompensatedSum> acc, acc_half;
    for (int l : res.beads) acc[l] = {}, acc_half[l] = {};
    for (size_t p = 0; p < res.pairs.size(); ++p) {
        const auto [l, mm] = res.pairs[p];
        if (l == mm) continue;
        const double pref = 2.0 * baths.friction(l) * baths.friction(mm) / std::numbers::pi;
        acc[l].add(pref * res.qf_int[p]);
        acc[mm].add(-pref * res.qf_int[p]);
        acc_half[l].add(pref * res.qf_int_half[p]);
        acc_half[mm].add(-pref * res.qf_int_half[p]);
    }
    for (int l : res.beads) r.per_bath[l] = acc[l].value();
    detail::finalize_report(r, baths);
    detail::CompensatedSum hot_half;
    for (int l : baths.hot_set) hot_half.add(acc_half[l].value());
    r.total_forward_error = std::abs(r.total_forward - hot_half.value()) / 3.0;
    return r;
}

/// Forward and temperature-reversed currents, delta and rectification
/// ratio. The classical path reuses M across directions (it is
/// temperature independent); the quantum path folds both directions into a
/// single spectral pass.
inline CurrentReport rectification(const ChainSpec& chain, const BathSpec& baths,
                                   const QuadratureSpec& quad, Regime regime,
                                   int workers = 0) {
    const Model model = validate(chain, baths);
    const BathSpec reversed = reverse_temperatures(baths, chain.n);
    if (regime == Regime::classical) {
        const TransmissionMatrix m = compute_M(chain, baths, quad, workers);
        CurrentReport fwd = classical_currents(m, baths);
        const CurrentReport rev = classical_currents(m, reversed);
        fwd.per_bath_reverse = rev.per_bath;
        fwd.total_reverse = rev.total_forward;   // same hot set, mirrored profile
        detail::fill_reversal(fwd);
        return fwd;
    }

    detail::SpectralRequest req;
    req.quantum = true;
    req.temps_forward = baths.temperatures;
    req.temps_reverse = reversed.temperatures;
    const auto res = detail::spectral_integrals(model, quad, req, workers);
    CurrentReport r;
    r.regime = Regime::quantum;
    std::map<int, detail::CompensatedSum> f, fr, fh, frh;
    for (int l : res.beads) f[l] = {}, fr[l] = {}, fh[l] = {}, frh[l] = {};
    for (size_t p = 0; p < res.pairs.size(); ++p) {
        const auto [l, mm] = res.pairs[p];
        if (l == mm) continue;
        const double pref = 2.0 * baths.friction(l) * baths.friction(mm) / std::numbers::pi;
        f[l].add(pref * res.qf_int[p]);
        f[mm].add(-pref * res.qf_int[p]);
        fr[l].add(pref * res.qr_int[p]);
        fr[mm].add(-pref * res.qr_int[p]);
        fh[l].add(pref * res.qf_int_half[p]);
        fh[mm].add(-pref * res.qf_int_half[p]);
        frh[l].add(pref * res.qr_int_half[p]);
        frh[mm].add(-pref * res.qr_int_half[p]);
    }
    for (int l : res.beads) {
        r.per_bath[l] = f[l].value();
        r.per_bath_reverse[l] = fr[l].value();
    }
    detail::finalize_report(r, baths);
    detail::CompensatedSum rev, rev_half, fwd_half;
    for (int l : baths.hot_set) {
        rev.add(fr[l].value());
        rev_half.add(frh[l].value());
        fwd_half.add(fh[l].value());
    }
    r.total_reverse = rev.value();
    r.total_forward_error = std::abs(r.total_forward - fwd_half.value()) / 3.0;
    r.total_reverse_error = std::abs(rev.value() - rev_half.value()) / 3.0;
    detail::fill_reversal(r);
    return r;
}

// ---------------------------------------------------------------------------
// Closed-form delta J for mirror-zone layouts

/// delta J = sum_i sum_{j != i} [(T_i - T_j) + (T_{N+1-i} - T_{N+1-j})]
/// M_{i, N+1-j} for a chain with N_B-bead thermostated zones at both ends.
/// Classical regime only; must agree with rectification().delta.
inline double delta_j_closed_form(const TransmissionMatrix& m, const BathSpec& baths) {
    const int n = m.n;
    const int nb = static_cast<int>(baths.hot_set.size());
    auto is_iota = [](const std::vector<int>& v, int start) {
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != start + static_cast<int>(i)) return false;
        return true;
    };
    std::vector<int> hot = baths.hot_set, cold = baths.cold_set;
    std::sort(hot.begin(), hot.end());
    std::sort(cold.begin(), cold.end());
    if (static_cast<int>(cold.size()) != nb || !is_iota(hot, 1) || !is_iota(cold, n - nb + 1) ||
        static_cast<int>(m.beads.size()) != 2 * nb)
        throw std::invalid_argument(
            "closed form needs mirror zones: hot = {1..N_B}, cold = {N-N_B+1..N}");
    detail::CompensatedSum s;
    for (int i = 1; i <= nb; ++i)
        for (int j = 1; j <= nb; ++j) {
            if (j == i) continue;
            const double bracket = (baths.temperature(i) - baths.temperature(j)) +
                                   (baths.temperature(n + 1 - i) - baths.temperature(n + 1 - j));
            s.add(bracket * m.at(i, n + 1 - j));
        }
    return s.value();
}

// ---------------------------------------------------------------------------
// Effective temperature-dependent-friction diode

/// Two-bath junction whose end frictions track the attached bath
/// temperature, gamma(T_hot) = gamma + lambda (T_hot - T_cold) and
/// gamma(T_cold) = gamma - lambda (T_hot - T_cold). Classical regime.
inline CurrentReport effective_diode(const ChainSpec& chain, const EffectiveFrictionSpec& eff,
                                     double t_hot, double t_cold, const QuadratureSpec& quad,
                                     int workers = 0) {
    const int n = chain.n;
    {
        const Model base = validate(chain, eff.base);
        if (base.thermostated != std::vector<int>{1, n} ||
            eff.base.hot_set != std::vector<int>{1} || eff.base.cold_set != std::vector<int>{n})
            throw std::invalid_argument(
                "effective diode needs bead 1 hot and bead N cold, nothing else thermostated");
    }
    const double dt = t_hot - t_cold;
    const double g1 = eff.base.friction(1), gn = eff.base.friction(n);
    auto with = [&](double gamma1, double gamman, double temp1, double tempn) {
        if (gamma1 <= 0.0 || gamman <= 0.0)
            throw ValidationError({"temperature-dependent friction became nonpositive"});
        BathSpec b = eff.base;
        b.frictions.front() = gamma1;
        b.frictions.back() = gamman;
        b.temperatures.front() = temp1;
        b.temperatures.back() = tempn;
        return b;
    };
    const double shift = eff.slope * dt;
    const BathSpec fwd_baths = with(g1 + shift, gn - shift, t_hot, t_cold);
    const BathSpec rev_baths = with(g1 - shift, gn + shift, t_cold, t_hot);

    const TransmissionMatrix mf = compute_M(chain, fwd_baths, quad, workers);
    const TransmissionMatrix mr = compute_M(chain, rev_baths, quad, workers);
    CurrentReport r = classical_currents(mf, fwd_baths);
    const CurrentReport rev = classical_currents(mr, rev_baths);
    r.per_bath_reverse = rev.per_bath;
    r.total_reverse = rev.total_forward;   // input at bead 1, now the cold side
    detail::fill_reversal(r);
    return r;
}

} // namespace tgho
