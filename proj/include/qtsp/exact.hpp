#pragma once

/// @file exact.hpp
/// @brief Held-Karp dynamic program: provably optimal tours for small N.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <qtsp/tsplib.hpp>

namespace qtsp {

struct ExactResult {
    double optimal_length = 0.0;
    Tour optimal_tour;
};

/// Exact TSP solution by Held-Karp over subsets of cities 1..N-1, with city 0
/// fixed as the tour anchor. Memory is O(2^N * N), so N is capped by `limit`
/// (default 18, ~50 MB).
///
/// Deterministic: ties between equal-length completions are broken toward the
/// lowest last-city index, and internal ties toward the lowest predecessor.
inline ExactResult held_karp(const SquareMatrix& dmat, int limit = 18) {
    const int n = static_cast<int>(dmat.size());
    if (n < 3)
        throw std::invalid_argument("held_karp requires at least 3 cities");
    if (n > limit)
        throw std::invalid_argument("held_karp: " + std::to_string(n) +
                                    " cities exceeds limit " + std::to_string(limit));

    const int m = n - 1; // cities 1..n-1
    const std::size_t n_masks = std::size_t(1) << m;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // cost[mask * m + j]: cheapest path 0 -> ... -> (j+1) visiting exactly the
    // cities of `mask` (bit k == city k+1), with j in mask.
    std::vector<double> cost(n_masks * m, kInf);
    std::vector<std::int8_t> parent(n_masks * m, -1);

    for (int j = 0; j < m; ++j)
        cost[(std::size_t(1) << j) * m + j] = dmat(0, j + 1);

    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        for (int j = 0; j < m; ++j) {
            if (!(mask & (std::size_t(1) << j)))
                continue;
            const double base = cost[mask * m + j];
            if (base == kInf)
                continue;
            for (int k = 0; k < m; ++k) {
                if (mask & (std::size_t(1) << k))
                    continue;
                const std::size_t next = mask | (std::size_t(1) << k);
                const double cand = base + dmat(j + 1, k + 1);
                if (cand < cost[next * m + k]) {
                    cost[next * m + k] = cand;
                    parent[next * m + k] = static_cast<std::int8_t>(j);
                }
            }
        }
    }

    const std::size_t full = n_masks - 1;
    double best = kInf;
    int best_end = -1;
    for (int j = 0; j < m; ++j) {
        const double total = cost[full * m + j] + dmat(j + 1, 0);
        if (total < best) {
            best = total;
            best_end = j;
        }
    }

    Tour tour(n);
    std::size_t mask = full;
    int j = best_end;
    for (int pos = n - 1; pos >= 1; --pos) {
        tour[pos] = j + 1;
        const int p = parent[mask * m + j];
        mask &= ~(std::size_t(1) << j);
        j = p;
    }
    tour[0] = 0;
    return ExactResult{best, tour};
}

/// Convenience overload on a parsed instance.
inline ExactResult held_karp(const TspInstance& inst,
                             DistanceMetric metric = DistanceMetric::EuclidRaw, int limit = 18) {
    return held_karp(distance_matrix(inst, metric), limit);
}

} // namespace qtsp
