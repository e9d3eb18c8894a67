#pragma once

// Deterministic frequency-grid evaluation. The grid is split into
// fixed-size blocks; workers claim blocks, sum samples in index order with
// compensated accumulation, and block partials are combined by an ordered
// pairwise reduction. Results are therefore bit-identical for any worker
// count.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "tgho/chain.hpp"

namespace tgho {

namespace detail {

/// Neumaier compensated accumulator; deterministic for a fixed visit order.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline double pairwise_reduce(const std::vector<double>& v, size_t lo, size_t hi) {
    if (hi - lo == 1) return v[lo];
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_reduce(v, lo, mid) + pairwise_reduce(v, mid, hi);
}

inline double pairwise_reduce(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return pairwise_reduce(v, 0, v.size());
}

} // namespace detail

/// Trapezoid sums of several integrands sampled on the uniform grid
/// omega_j = j*h, accumulated (a) over all nodes and (b) over even nodes
/// only. The even-node sum gives the half-resolution integral used for the
/// Richardson error estimate.
struct GridSums {
    std::vector<double> full;   ///< h * sum of weighted samples
    std::vector<double> half;   ///< 2h * sum over even nodes (valid when points is odd)
};

using GridSampler = std::function<void(size_t, double, double*)>;

/// Evaluate a sampler at every grid node and trapezoid-sum each slot.
/// `make_sampler` is invoked once per worker so each sampler owns its own
/// scratch space; sampler(j, omega, out) fills out[0..slots). Determinism
/// comes from the fixed block decomposition (4096 nodes per block).
inline GridSums integrate_grid(double omega_max, int points, int slots, int workers,
                               const std::function<GridSampler()>& make_sampler) {
    if (points < 2) throw QuadratureError("frequency grid needs at least two points");
    const size_t np = static_cast<size_t>(points);
    const double h = omega_max / static_cast<double>(points - 1);
    constexpr size_t kBlock = 4096;
    const size_t nblocks = (np + kBlock - 1) / kBlock;
    const size_t last_even = (np - 1) - ((np - 1) % 2);

    std::vector<std::vector<double>> block_full(nblocks), block_half(nblocks);
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&]() {
        try {
        GridSampler sample = make_sampler();
        std::vector<double> vals(static_cast<size_t>(slots));
        std::vector<detail::CompensatedSum> acc_full(static_cast<size_t>(slots));
        std::vector<detail::CompensatedSum> acc_half(static_cast<size_t>(slots));
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) break;
            const size_t b = next.fetch_add(1);
            if (b >= nblocks) break;
            for (auto& a : acc_full) a = {};
            for (auto& a : acc_half) a = {};
            const size_t lo = b * kBlock;
            const size_t hi = std::min(lo + kBlock, np);
            for (size_t j = lo; j < hi; ++j) {
                const double omega = h * static_cast<double>(j);
                sample(j, omega, vals.data());
                const double w_full = (j == 0 || j == np - 1) ? 0.5 : 1.0;
                const bool even = (j % 2 == 0);
                const double w_half = !even ? 0.0 : (j == 0 || j == last_even) ? 0.5 : 1.0;
                for (int s = 0; s < slots; ++s) {
                    acc_full[static_cast<size_t>(s)].add(w_full * vals[static_cast<size_t>(s)]);
                    if (w_half != 0.0)
                        acc_half[static_cast<size_t>(s)].add(w_half *
                                                             vals[static_cast<size_t>(s)]);
                }
            }
            block_full[b].resize(static_cast<size_t>(slots));
            block_half[b].resize(static_cast<size_t>(slots));
            for (int s = 0; s < slots; ++s) {
                block_full[b][static_cast<size_t>(s)] = acc_full[static_cast<size_t>(s)].value();
                block_half[b][static_cast<size_t>(s)] = acc_half[static_cast<size_t>(s)].value();
            }
        }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    };

    int nw = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    nw = std::max(1, std::min<int>(nw, static_cast<int>(nblocks)));
    if (nw == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    GridSums out;
    out.full.resize(static_cast<size_t>(slots));
    out.half.resize(static_cast<size_t>(slots));
    std::vector<double> scratch(nblocks);
    for (int s = 0; s < slots; ++s) {
        for (size_t b = 0; b < nblocks; ++b) scratch[b] = block_full[b][static_cast<size_t>(s)];
        out.full[static_cast<size_t>(s)] = h * detail::pairwise_reduce(scratch);
        for (size_t b = 0; b < nblocks; ++b) scratch[b] = block_half[b][static_cast<size_t>(s)];
        out.half[static_cast<size_t>(s)] = 2.0 * h * detail::pairwise_reduce(scratch);
    }
    return out;
}

} // namespace tgho
