#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "depfn/core.hpp"

namespace depfn {

// Shared by the brute-force scan and the k-d tree so both produce bit-equal
// distances (coordinates accumulated in the same order).
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

// Exact nearest-neighbor k-d tree over points stored row-major. Distance
// ties resolve to the smallest point index, matching the brute-force scan:
// a candidate replaces the incumbent only if (dist2, index) is lexicographically
// smaller, and subtrees are pruned only when strictly farther than the
// incumbent so equal-distance points are still visited.
class KdTree {
public:
    KdTree(const double* pts, std::size_t n, std::size_t d) : pts_(pts), n_(n), d_(d) {
        if (n < 1 || d < 1) throw input_error("kdtree: empty input");
        index_.resize(n);
        std::iota(index_.begin(), index_.end(), std::size_t{0});
        nodes_.reserve(2 * n / LEAF_SIZE + 4);
        root_ = build(0, n);
    }

    // Nearest point to point(query), excluding the query index itself.
    std::size_t nearest_excluding_self(std::size_t query) const {
        Best best{std::numeric_limits<double>::infinity(), n_};
        search(root_, query, best);
        return best.index;
    }

private:
    static constexpr std::size_t LEAF_SIZE = 16;

    struct Node {
        double split = 0.0;
        std::size_t dim = 0;
        int left = -1, right = -1;
        std::size_t begin = 0, end = 0;  // leaf range into index_
        bool leaf = false;
    };

    struct Best {
        double dist2;
        std::size_t index;
    };

    std::span<const double> point(std::size_t i) const { return {pts_ + i * d_, d_}; }

    int build(std::size_t begin, std::size_t end) {
        Node node;
        if (end - begin <= LEAF_SIZE) {
            node.leaf = true;
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size() - 1);
        }
        // split along the widest dimension at the median
        std::size_t dim = 0;
        double widest = -1.0;
        for (std::size_t k = 0; k < d_; ++k) {
            double lo = point(index_[begin])[k], hi = lo;
            for (std::size_t i = begin + 1; i < end; ++i) {
                const double v = point(index_[i])[k];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > widest) {
                widest = hi - lo;
                dim = k;
            }
        }
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                         [&](std::size_t a, std::size_t b) { return point(a)[dim] < point(b)[dim]; });
        node.dim = dim;
        node.split = point(index_[mid])[dim];
        nodes_.push_back(node);
        const int id = static_cast<int>(nodes_.size() - 1);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(int id, std::size_t query, Best& best) const {
        const Node& node = nodes_[id];
        if (node.leaf) {
            const auto q = point(query);
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t j = index_[i];
                if (j == query) continue;
                const double d2 = squared_distance(point(j), q);
                if (d2 < best.dist2 || (d2 == best.dist2 && j < best.index)) best = {d2, j};
            }
            return;
        }
        const double diff = point(query)[node.dim] - node.split;
        const int near = diff < 0.0 ? node.left : node.right;
        const int far = diff < 0.0 ? node.right : node.left;
        search(near, query, best);
        if (diff * diff <= best.dist2) search(far, query, best);
    }

    const double* pts_;
    std::size_t n_, d_;
    std::vector<std::size_t> index_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace depfn
