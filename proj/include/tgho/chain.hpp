#pragma once

// Chain, bath and quadrature specifications shared by every solver in the
// library. Beads are numbered 1..N as is conventional for finite chains;
// springs are numbered 0..N with k_0 and k_N tying beads 1 and N to rigid
// walls. A zero friction marks an interior (unthermostated) bead.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tgho {

/// Geometry and force field of an N-bead harmonic chain.
struct ChainSpec {
    int n = 0;                      ///< bead count N
    std::vector<double> masses;     ///< m_1..m_N, strictly positive
    std::vector<double> springs;    ///< k_0..k_N, nonnegative (walls at 0 and N)
    std::vector<double> pinning;    ///< onsite trap constants, nonnegative
    double spacing = 1.0;           ///< equilibrium nearest-neighbor distance a

    double mass(int bead) const { return masses[static_cast<size_t>(bead - 1)]; }
    double pin(int bead) const { return pinning[static_cast<size_t>(bead - 1)]; }
    /// Spring constant k_i, i in [0, n].
    double spring(int i) const { return springs[static_cast<size_t>(i)]; }
};

/// Per-bead Langevin couplings with a hot/cold partition of the
/// thermostated beads.
struct BathSpec {
    std::vector<double> frictions;      ///< gamma_i >= 0; zero marks interior beads
    std::vector<double> temperatures;   ///< T_i >= 0; meaningful where gamma_i > 0
    std::vector<int> hot_set;           ///< 1-based bead indices counted as sources
    std::vector<int> cold_set;          ///< 1-based bead indices counted as sinks

    double friction(int bead) const { return frictions[static_cast<size_t>(bead - 1)]; }
    double temperature(int bead) const { return temperatures[static_cast<size_t>(bead - 1)]; }
};

/// Frequency grid controlling all spectral integrals.
struct QuadratureSpec {
    enum class Scheme { trapezoid, adaptive };
    double omega_max = 0.0;   ///< integration cutoff (0 = derive from the chain)
    int points = 200001;      ///< grid nodes on [0, omega_max]
    Scheme scheme = Scheme::trapezoid;
};

/// Base frictions plus a linear temperature coefficient; the friction seen
/// by a bath at temperature T becomes gamma +/- slope * (T_hot - T_cold).
struct EffectiveFrictionSpec {
    BathSpec base;
    double slope = 0.0;   ///< lambda
};

// ---------------------------------------------------------------------------
// Errors

/// Model or configuration rejected; carries every violation found.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "model validation failed:";
        for (const auto& m : v) {
            s += "\n  - ";
            s += m;
        }
        return s;
    }
    std::vector<std::string> violations_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationBlowupError : public std::runtime_error {
public:
    IntegrationBlowupError(long long step, const std::string& what)
        : std::runtime_error(what), step_(step) {}
    long long step() const { return step_; }

private:
    long long step_;
};

// ---------------------------------------------------------------------------
// Stiffness matrix and stability

/// LDL^T pivots of the (real, tridiagonal) stiffness matrix. The chain is
/// mechanically stable iff every pivot stays positive.
inline bool stiffness_positive_definite(const ChainSpec& chain) {
    const int n = chain.n;
    if (n <= 0) return false;
    double max_diag = 0.0;
    for (int i = 1; i <= n; ++i)
        max_diag = std::max(max_diag, chain.spring(i - 1) + chain.spring(i) + chain.pin(i));
    const double floor = 1e-12 * std::max(max_diag, 1.0);
    double prev = 0.0;       // pivot d_{i-1}
    double off_prev = 0.0;   // -k_{i-1}
    for (int i = 1; i <= n; ++i) {
        double d = chain.spring(i - 1) + chain.spring(i) + chain.pin(i);
        if (i > 1) d -= off_prev * off_prev / prev;
        if (!(d > floor)) return false;
        prev = d;
        off_prev = -chain.spring(i);
    }
    return true;
}

/// True when some wall spring or pinning anchors the chain. An unanchored
/// chain has a zero-frequency translation mode and G^{-1}(0) is singular.
inline bool chain_is_anchored(const ChainSpec& chain) {
    if (chain.spring(0) > 0.0 || chain.spring(chain.n) > 0.0) return true;
    return std::any_of(chain.pinning.begin(), chain.pinning.end(),
                       [](double k) { return k > 0.0; });
}

/// Largest single-bead frequency scale sqrt((k_{i-1}+k_i+pin_i)/m_i).
inline double max_chain_frequency(const ChainSpec& chain) {
    double w2 = 0.0;
    for (int i = 1; i <= chain.n; ++i) {
        const double k = chain.spring(i - 1) + chain.spring(i) + chain.pin(i);
        w2 = std::max(w2, k / chain.mass(i));
    }
    return std::sqrt(w2);
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline bool finite_nonneg(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x) && x >= 0.0; });
}

} // namespace detail

/// Enumerates every violated invariant; empty result means the model is valid.
inline std::vector<std::string> validation_violations(const ChainSpec& chain,
                                                      const BathSpec& baths) {
    std::vector<std::string> out;
    const int n = chain.n;
    if (n < 1) {
        out.push_back("bead count must be positive");
        return out;
    }
    const auto sz = static_cast<size_t>(n);
    if (chain.masses.size() != sz)
        out.push_back("mass list has length " + std::to_string(chain.masses.size()) +
                      ", expected " + std::to_string(n));
    if (chain.springs.size() != sz + 1)
        out.push_back("spring list has length " + std::to_string(chain.springs.size()) +
                      ", expected " + std::to_string(n + 1));
    if (chain.pinning.size() != sz)
        out.push_back("pinning list has length " + std::to_string(chain.pinning.size()) +
                      ", expected " + std::to_string(n));
    if (baths.frictions.size() != sz)
        out.push_back("friction list has length " + std::to_string(baths.frictions.size()) +
                      ", expected " + std::to_string(n));
    if (baths.temperatures.size() != sz)
        out.push_back("temperature list has length " +
                      std::to_string(baths.temperatures.size()) + ", expected " +
                      std::to_string(n));
    if (!out.empty()) return out;   // index checks below need consistent lengths

    for (int i = 1; i <= n; ++i)
        if (!(std::isfinite(chain.mass(i)) && chain.mass(i) > 0.0))
            out.push_back("mass of bead " + std::to_string(i) + " must be strictly positive");
    if (!detail::finite_nonneg(chain.springs))
        out.push_back("spring constants must be finite and nonnegative");
    if (!detail::finite_nonneg(chain.pinning))
        out.push_back("pinning constants must be finite and nonnegative");
    if (!(std::isfinite(chain.spacing) && chain.spacing > 0.0))
        out.push_back("spacing must be strictly positive");
    if (!detail::finite_nonneg(baths.frictions))
        out.push_back("friction constants must be finite and nonnegative");
    if (!detail::finite_nonneg(baths.temperatures))
        out.push_back("bath temperatures must be finite and nonnegative");

    auto check_set = [&](const std::vector<int>& set, const char* name) {
        for (int b : set) {
            if (b < 1 || b > n) {
                out.push_back(std::string(name) + " set contains bead index " +
                              std::to_string(b) + " outside 1.." + std::to_string(n));
                continue;
            }
            if (!(baths.friction(b) > 0.0))
                out.push_back("bead " + std::to_string(b) + " in " + name +
                              " set has zero friction");
        }
        auto sorted = set;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            out.push_back(std::string(name) + " set contains duplicate indices");
    };
    if (baths.hot_set.empty()) out.push_back("hot set is empty");
    if (baths.cold_set.empty()) out.push_back("cold set is empty");
    check_set(baths.hot_set, "hot");
    check_set(baths.cold_set, "cold");

    for (int b : baths.hot_set)
        if (std::find(baths.cold_set.begin(), baths.cold_set.end(), b) != baths.cold_set.end())
            out.push_back("bead " + std::to_string(b) + " appears in both hot and cold sets");

    for (int i = 1; i <= n; ++i) {
        if (baths.friction(i) > 0.0) {
            const bool in_hot =
                std::find(baths.hot_set.begin(), baths.hot_set.end(), i) != baths.hot_set.end();
            const bool in_cold =
                std::find(baths.cold_set.begin(), baths.cold_set.end(), i) != baths.cold_set.end();
            if (!in_hot && !in_cold)
                out.push_back("bead " + std::to_string(i) +
                              " has positive friction but belongs to neither set");
        }
    }

    // Stability: once anything anchors the chain the stiffness matrix must be
    // positive definite (a dangling unanchored fragment fails here).
    if (chain_is_anchored(chain) && !stiffness_positive_definite(chain))
        out.push_back("chain is not mechanically stable (stiffness matrix not positive definite)");

    return out;
}

/// A chain/bath pair that passed validation.
struct Model {
    ChainSpec chain;
    BathSpec baths;
    std::vector<int> thermostated;   ///< ascending 1-based indices with gamma > 0
    bool zero_frequency_singular = false;
};

inline Model validate(const ChainSpec& chain, const BathSpec& baths) {
    auto violations = validation_violations(chain, baths);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    Model m{chain, baths, {}, !chain_is_anchored(chain)};
    for (int i = 1; i <= chain.n; ++i)
        if (baths.friction(i) > 0.0) m.thermostated.push_back(i);
    return m;
}

// ---------------------------------------------------------------------------
// Temperature profiles

/// Mirror the temperature profile, T_i <-> T_{N+1-i}. Frictions and the
/// hot/cold partition stay untouched; applying twice restores the input.
inline BathSpec reverse_temperatures(const BathSpec& baths, int n) {
    if (baths.temperatures.size() != static_cast<size_t>(n))
        throw ValidationError({"temperature list length does not match bead count"});
    BathSpec out = baths;
    std::reverse(out.temperatures.begin(), out.temperatures.end());
    return out;
}

/// n_b equally spaced temperatures from t_top down to t_bottom (inclusive);
/// a single bead gets the midpoint.
inline std::vector<double> linear_gradient_profile(double t_top, double t_bottom, int n_b) {
    if (n_b < 1) throw std::invalid_argument("gradient profile needs at least one bead");
    if (n_b == 1) return {0.5 * (t_top + t_bottom)};
    std::vector<double> out(static_cast<size_t>(n_b));
    for (int j = 0; j < n_b; ++j)
        out[static_cast<size_t>(j)] =
            t_top + (t_bottom - t_top) * static_cast<double>(j) / static_cast<double>(n_b - 1);
    return out;
}

// ---------------------------------------------------------------------------
// Convenience builders used by experiments and tests

/// Uniform chain: unit masses, all springs k (including walls), no pinning.
inline ChainSpec uniform_chain(int n, double k = 1.0) {
    ChainSpec c;
    c.n = n;
    c.masses.assign(static_cast<size_t>(n), 1.0);
    c.springs.assign(static_cast<size_t>(n) + 1, k);
    c.pinning.assign(static_cast<size_t>(n), 0.0);
    return c;
}

/// Mirror-zone layout: beads 1..n_b hot, beads n-n_b+1..n cold, uniform
/// friction gamma on the thermostated beads, given zone temperatures.
inline BathSpec zone_baths(int n, int n_b, double gamma,
                           const std::vector<double>& hot_temps,
                           const std::vector<double>& cold_temps) {
    if (2 * n_b >= n + 1)
        throw std::invalid_argument("thermostated zones overlap");
    if (hot_temps.size() != static_cast<size_t>(n_b) ||
        cold_temps.size() != static_cast<size_t>(n_b))
        throw std::invalid_argument("zone temperature list does not match zone size");
    BathSpec b;
    b.frictions.assign(static_cast<size_t>(n), 0.0);
    b.temperatures.assign(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n_b; ++j) {
        b.frictions[static_cast<size_t>(j)] = gamma;
        b.temperatures[static_cast<size_t>(j)] = hot_temps[static_cast<size_t>(j)];
        b.hot_set.push_back(j + 1);
        b.frictions[static_cast<size_t>(n - n_b + j)] = gamma;
        b.temperatures[static_cast<size_t>(n - n_b + j)] = cold_temps[static_cast<size_t>(j)];
        b.cold_set.push_back(n - n_b + j + 1);
    }
    return b;
}

/// Two-bath layout: only beads 1 and n thermostated.
inline BathSpec end_baths(int n, double gamma_left, double gamma_right, double t_left,
                          double t_right) {
    BathSpec b;
    b.frictions.assign(static_cast<size_t>(n), 0.0);
    b.temperatures.assign(static_cast<size_t>(n), 0.0);
    b.frictions.front() = gamma_left;
    b.frictions.back() = gamma_right;
    b.temperatures.front() = t_left;
    b.temperatures.back() = t_right;
    b.hot_set = {1};
    b.cold_set = {n};
    return b;
}

/// Quadrature spec with the cutoff derived from the chain: ten times the
/// largest single-bead frequency.
inline QuadratureSpec default_quadrature(const ChainSpec& chain, int points = 200001) {
    QuadratureSpec q;
    q.omega_max = 10.0 * max_chain_frequency(chain);
    q.points = points;
    return q;
}

/// Enforces the cutoff invariant omega_max >= 10 x largest chain frequency.
inline void require_quadrature_valid(const QuadratureSpec& quad, const ChainSpec& chain) {
    std::vector<std::string> v;
    if (!(quad.omega_max > 0.0) || !std::isfinite(quad.omega_max))
        v.push_back("quadrature cutoff must be positive");
    if (quad.points < 2) v.push_back("quadrature grid needs at least two points");
    const double wmin = 10.0 * max_chain_frequency(chain);
    if (quad.omega_max > 0.0 && quad.omega_max < wmin * (1.0 - 1e-12))
        v.push_back("quadrature cutoff " + std::to_string(quad.omega_max) +
                    " is below ten times the largest chain frequency (" +
                    std::to_string(wmin) + ")");
    if (!v.empty()) throw ValidationError(std::move(v));
}

} // namespace tgho
