#pragma once

// Frequency-domain Green's functions of the damped harmonic chain.
//
// The inverse Green's matrix is complex-symmetric tridiagonal,
//   A_ii = -m_i w^2 + i gamma_i w + k_{i-1} + k_i + pin_i,  A_{i,i+1} = -k_i,
// and transport needs only a handful of its inverse's elements. The
// production path factors A once per frequency (tridiagonal LU with partial
// pivoting) and back-solves the required columns in O(N) each. Dense LU
// routines live here too but only as determinant/cofactor oracles for tests
// and the minor-identity report.

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "tgho/chain.hpp"

namespace tgho {

using cplx = std::complex<double>;

/// G^{-1}(omega) for one frequency, stored by bands.
struct InverseGreenMatrix {
    double omega = 0.0;
    int n = 0;
    std::vector<cplx> diag;   ///< A_ii, i = 1..n
    std::vector<cplx> off;    ///< A_{i,i+1} = -k_i, i = 1..n-1

    /// Dense copy (row-major), for oracles and debugging only.
    std::vector<cplx> dense() const {
        std::vector<cplx> a(static_cast<size_t>(n) * static_cast<size_t>(n), cplx(0.0));
        for (int i = 0; i < n; ++i) {
            a[static_cast<size_t>(i) * n + i] = diag[static_cast<size_t>(i)];
            if (i + 1 < n) {
                a[static_cast<size_t>(i) * n + i + 1] = off[static_cast<size_t>(i)];
                a[static_cast<size_t>(i + 1) * n + i] = off[static_cast<size_t>(i)];
            }
        }
        return a;
    }
};

inline InverseGreenMatrix build_inverse_green(const ChainSpec& chain, const BathSpec& baths,
                                              double omega) {
    InverseGreenMatrix a;
    a.omega = omega;
    a.n = chain.n;
    a.diag.resize(static_cast<size_t>(chain.n));
    a.off.resize(chain.n > 0 ? static_cast<size_t>(chain.n - 1) : 0);
    for (int i = 1; i <= chain.n; ++i) {
        const double re = -chain.mass(i) * omega * omega + chain.spring(i - 1) +
                          chain.spring(i) + chain.pin(i);
        a.diag[static_cast<size_t>(i - 1)] = cplx(re, baths.friction(i) * omega);
        if (i < chain.n) a.off[static_cast<size_t>(i - 1)] = cplx(-chain.spring(i), 0.0);
    }
    return a;
}

// ---------------------------------------------------------------------------
// Tridiagonal LU with partial pivoting (gttrf/gtts2 style)

/// Reusable factorization of a symmetric tridiagonal complex matrix.
/// Partial pivoting keeps the elimination stable when leading interior
/// blocks pass through a real resonance.
class TridiagFactor {
public:
    TridiagFactor() = default;

    /// Factor; returns false when a pivot underflows (singular matrix).
    bool factor(const InverseGreenMatrix& a) {
        n_ = a.n;
        d_.assign(a.diag.begin(), a.diag.end());
        dl_.assign(a.off.begin(), a.off.end());
        du_.assign(a.off.begin(), a.off.end());
        return eliminate();
    }

    /// Build G^{-1}(omega) bands in place and factor; reuses buffers so the
    /// per-frequency loop stays allocation free.
    bool factor_model(const ChainSpec& chain, const BathSpec& baths, double omega) {
        n_ = chain.n;
        d_.resize(static_cast<size_t>(n_));
        dl_.resize(n_ > 1 ? static_cast<size_t>(n_ - 1) : 0);
        du_.resize(dl_.size());
        for (int i = 1; i <= n_; ++i) {
            const double re = -chain.mass(i) * omega * omega + chain.spring(i - 1) +
                              chain.spring(i) + chain.pin(i);
            d_[static_cast<size_t>(i - 1)] = cplx(re, baths.friction(i) * omega);
            if (i < n_) {
                dl_[static_cast<size_t>(i - 1)] = cplx(-chain.spring(i), 0.0);
                du_[static_cast<size_t>(i - 1)] = dl_[static_cast<size_t>(i - 1)];
            }
        }
        return eliminate();
    }

    /// Solve A x = e_col (col is 0-based); x overwritten into rhs scratch.
    void solve_unit(int col, std::vector<cplx>& x) const {
        x.assign(static_cast<size_t>(n_), cplx(0.0));
        x[static_cast<size_t>(col)] = cplx(1.0);
        solve_in_place(x);
    }

    void solve_in_place(std::vector<cplx>& b) const {
        for (int i = 0; i + 1 < n_; ++i) {
            const auto ui = static_cast<size_t>(i);
            if (!swap_[ui]) {
                b[ui + 1] -= dl_[ui] * b[ui];
            } else {
                const cplx temp = b[ui];
                b[ui] = b[ui + 1];
                b[ui + 1] = temp - dl_[ui] * b[ui];
            }
        }
        const auto last = static_cast<size_t>(n_ - 1);
        b[last] /= d_[last];
        if (n_ > 1) b[last - 1] = (b[last - 1] - du_[last - 1] * b[last]) / d_[last - 1];
        for (int i = n_ - 3; i >= 0; --i) {
            const auto ui = static_cast<size_t>(i);
            b[ui] = (b[ui] - du_[ui] * b[ui + 1] - du2_[ui] * b[ui + 2]) / d_[ui];
        }
    }

    int size() const { return n_; }

private:
    bool eliminate() {
        du2_.assign(n_ > 2 ? static_cast<size_t>(n_ - 2) : 0, cplx(0.0));
        swap_.assign(n_ > 1 ? static_cast<size_t>(n_ - 1) : 0, 0);
        for (int i = 0; i + 1 < n_; ++i) {
            const auto ui = static_cast<size_t>(i);
            if (std::abs(d_[ui]) >= std::abs(dl_[ui])) {
                if (std::abs(d_[ui]) < kPivotFloor) return false;
                const cplx fact = dl_[ui] / d_[ui];
                dl_[ui] = fact;
                d_[ui + 1] -= fact * du_[ui];
            } else {
                const cplx fact = d_[ui] / dl_[ui];
                d_[ui] = dl_[ui];
                dl_[ui] = fact;
                const cplx temp = d_[ui + 1];
                d_[ui + 1] = du_[ui] - fact * temp;
                if (i + 2 < n_) {
                    du2_[ui] = du_[ui + 1];
                    du_[ui + 1] = -fact * du2_[ui];
                }
                du_[ui] = temp;
                swap_[ui] = 1;
            }
        }
        return std::abs(d_[static_cast<size_t>(n_ - 1)]) >= kPivotFloor;
    }

    static constexpr double kPivotFloor = 1e-300;
    int n_ = 0;
    std::vector<cplx> d_, dl_, du_, du2_;
    std::vector<char> swap_;
};

// ---------------------------------------------------------------------------
// Green's elements

/// Selected inverse elements G_lm at one frequency, keyed by 1-based bead
/// pairs. Holds every ordered pair of thermostated beads.
struct GreenElements {
    double omega = 0.0;
    std::map<std::pair<int, int>, cplx> values;

    cplx at(int l, int m) const { return values.at({l, m}); }
};

/// Solve for the columns of G needed by transport: all pairs of
/// thermostated beads. Throws SingularMatrixError when the factorization
/// breaks down (possible only at omega = 0 for an unanchored chain).
inline GreenElements green_elements(const ChainSpec& chain, const BathSpec& baths,
                                    double omega) {
    const Model model = validate(chain, baths);
    const auto a = build_inverse_green(chain, baths, omega);
    TridiagFactor lu;
    if (!lu.factor(a))
        throw SingularMatrixError("inverse Green matrix is singular at omega = " +
                                  std::to_string(omega));
    GreenElements g;
    g.omega = omega;
    std::vector<cplx> col;
    for (int m : model.thermostated) {
        lu.solve_unit(m - 1, col);
        for (int l : model.thermostated) {
            const cplx v = col[static_cast<size_t>(l - 1)];
            g.values[{l, m}] = v;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Dense LU oracle (determinants and cofactors; never on the production path)

namespace detail {

/// In-place LU with partial pivoting on a dense row-major complex matrix.
/// Returns the determinant (0 when singular).
inline cplx dense_lu_determinant(std::vector<cplx>& a, int n) {
    cplx det(1.0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a[static_cast<size_t>(k) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const double v = std::abs(a[static_cast<size_t>(r) * n + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return cplx(0.0);
        if (piv != k) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<size_t>(piv) * n + c], a[static_cast<size_t>(k) * n + c]);
            det = -det;
        }
        const cplx pivot = a[static_cast<size_t>(k) * n + k];
        det *= pivot;
        for (int r = k + 1; r < n; ++r) {
            const cplx f = a[static_cast<size_t>(r) * n + k] / pivot;
            a[static_cast<size_t>(r) * n + k] = f;
            for (int c = k + 1; c < n; ++c)
                a[static_cast<size_t>(r) * n + c] -= f * a[static_cast<size_t>(k) * n + c];
        }
    }
    return det;
}

} // namespace detail

/// det G^{-1}(omega) via dense LU. Test/debug oracle.
inline cplx dense_determinant(const InverseGreenMatrix& a) {
    auto m = a.dense();
    return detail::dense_lu_determinant(m, a.n);
}

/// det of the minor of G^{-1} with row `row` and column `col` removed
/// (1-based), via dense LU on the submatrix. Test/debug oracle.
inline cplx numeric_minor(const ChainSpec& chain, const BathSpec& baths, double omega,
                          int row, int col) {
    const auto a = build_inverse_green(chain, baths, omega);
    const int n = a.n;
    if (row < 1 || row > n || col < 1 || col > n)
        throw std::invalid_argument("minor indices out of range");
    const auto full = a.dense();
    std::vector<cplx> sub;
    sub.reserve(static_cast<size_t>(n - 1) * static_cast<size_t>(n - 1));
    for (int r = 0; r < n; ++r) {
        if (r == row - 1) continue;
        for (int c = 0; c < n; ++c) {
            if (c == col - 1) continue;
            sub.push_back(full[static_cast<size_t>(r) * n + c]);
        }
    }
    return detail::dense_lu_determinant(sub, n - 1);
}

// ---------------------------------------------------------------------------
// Analytic minor determinants
//
// For a tridiagonal matrix, removing row l and column m (l < m) leaves a
// block-triangular matrix whose determinant factorizes into the leading
// principal determinant up to l-1, the off-diagonal run -(k_l..k_{m-1}),
// and the trailing principal determinant from m+1 on. The closed forms for
// the boundary-thermostated pairs need at most 1x1 principal blocks.

/// Closed-form det of the minor C_{row,col} for the supported pairs:
/// row in {1,2} and col in {N-1,N} (either order). Covers both the
/// asymmetric-coupling and the pinned-chain families.
inline cplx analytic_minor(const ChainSpec& chain, const BathSpec& baths, double omega,
                           int row, int col) {
    const int n = chain.n;
    int l = row, m = col;
    if (l > m) std::swap(l, m);   // det C_lm = det C_ml for a symmetric matrix
    if (!(l >= 1 && m <= n && l < m && l <= 2 && m >= n - 1))
        throw std::invalid_argument("no closed form for minor (" + std::to_string(row) +
                                    "," + std::to_string(col) + ") of an N=" +
                                    std::to_string(n) + " chain");
    auto diag_entry = [&](int bead) {
        return cplx(-chain.mass(bead) * omega * omega + chain.spring(bead - 1) +
                        chain.spring(bead) + chain.pin(bead),
                    baths.friction(bead) * omega);
    };
    cplx det(1.0);
    if (l == 2) det *= diag_entry(1);
    for (int i = l; i <= m - 1; ++i) det *= cplx(-chain.spring(i), 0.0);
    if (m == n - 1) det *= diag_entry(n);
    return det;
}

/// One row of the minor-identity report.
struct MinorCheck {
    int row = 0, col = 0;
    cplx analytic;
    cplx numeric;
    double rel_error = 0.0;   ///< | |analytic| - |numeric| | / max(|analytic|, tiny)
};

/// Compare the four boundary minors against dense cofactor determinants for
/// an N_H = N_C = 2 layout. Magnitudes are compared; transport consumes
/// only |G_lm|^2.
inline std::vector<MinorCheck> general_minor_check(const ChainSpec& chain,
                                                   const BathSpec& baths, double omega) {
    const int n = chain.n;
    if (n < 5) throw std::invalid_argument("minor check needs N >= 5");
    const std::vector<int> expected = {1, 2, n - 1, n};
    Model model = validate(chain, baths);
    if (model.thermostated != expected)
        throw std::invalid_argument("minor check needs exactly beads 1,2,N-1,N thermostated");
    std::vector<MinorCheck> out;
    for (auto [r, c] : {std::pair{1, n}, {1, n - 1}, {2, n}, {2, n - 1}}) {
        MinorCheck mc;
        mc.row = r;
        mc.col = c;
        mc.analytic = analytic_minor(chain, baths, omega, r, c);
        mc.numeric = numeric_minor(chain, baths, omega, r, c);
        const double ref = std::max(std::abs(mc.analytic), 1e-300);
        mc.rel_error = std::abs(std::abs(mc.analytic) - std::abs(mc.numeric)) / ref;
        out.push_back(mc);
    }
    return out;
}

} // namespace tgho
