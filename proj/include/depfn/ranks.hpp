#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "depfn/core.hpp"
#include "depfn/kdtree.hpp"
#include "depfn/rng.hpp"

namespace depfn {

// Ranks of y in {1,...,n}. Strictly smaller values get strictly smaller
// ranks; ties are ordered by index (ByIndex) or by a seeded shuffle of each
// tied block (Random).
inline std::vector<int> compute_ranks(std::span<const double> y, TieRule rule = TieRule::by_index()) {
    const std::size_t n = y.size();
    if (n < 2) throw input_error("compute_ranks: need at least 2 values");
    for (double v : y)
        if (!std::isfinite(v)) throw input_error("compute_ranks: non-finite value");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });

    if (rule.kind == TieRule::Kind::Random) {
        Rng rng(rule.seed);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && y[order[j]] == y[order[i]]) ++j;
            for (std::size_t k = j - 1; k > i; --k)  // Fisher-Yates within the tied block
                std::swap(order[i + rng.below(k - i + 1)], order[k]);
            i = j;
        }
    }

    std::vector<int> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = static_cast<int>(pos) + 1;
    return ranks;
}

enum class NnAlgorithm { Auto, BruteForce, KdTree };

// Index of the nearest neighbor of each point under the Euclidean norm,
// excluding the point itself; exact distance ties go to the smallest index.
// Brute force is the reference path; the k-d tree implements the identical
// contract and is cross-validated against it in the tests.
inline std::vector<std::size_t> nearest_neighbors(const double* pts, std::size_t n, std::size_t d,
                                                  NnAlgorithm algo = NnAlgorithm::Auto) {
    if (n < 2) throw input_error("nearest_neighbors: need at least 2 points");
    if (d < 1) throw input_error("nearest_neighbors: dimension must be >= 1");
    for (std::size_t i = 0; i < n * d; ++i)
        if (!std::isfinite(pts[i])) throw input_error("nearest_neighbors: non-finite coordinate");

    if (algo == NnAlgorithm::Auto)
        algo = (n >= 256 && d <= 16) ? NnAlgorithm::KdTree : NnAlgorithm::BruteForce;

    std::vector<std::size_t> nn(n);
    if (algo == NnAlgorithm::KdTree) {
        KdTree tree(pts, n, d);
        for (std::size_t i = 0; i < n; ++i) nn[i] = tree.nearest_excluding_self(i);
        return nn;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> pi{pts + i * d, d};
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d2 = squared_distance({pts + j * d, d}, pi);
            if (d2 < best) {  // scan order makes the first minimum the smallest index
                best = d2;
                best_j = j;
            }
        }
        nn[i] = best_j;
    }
    return nn;
}

inline std::vector<std::size_t> nearest_neighbors(const Dataset& data,
                                                  NnAlgorithm algo = NnAlgorithm::Auto) {
    data.validate();
    return nearest_neighbors(data.x.data(), data.n(), data.d, algo);
}

inline RankPairs make_rank_pairs(const Dataset& data, TieRule rule = TieRule::by_index(),
                                 NnAlgorithm algo = NnAlgorithm::Auto) {
    data.validate();
    const auto ranks = compute_ranks(data.y, rule);
    const auto nn = nearest_neighbors(data, algo);
    RankPairs rp;
    rp.n = data.n();
    rp.pairs.reserve(rp.n);
    for (std::size_t i = 0; i < rp.n; ++i) rp.pairs.emplace_back(ranks[i], ranks[nn[i]]);
    return rp;
}

}  // namespace depfn
