// Test-only oracles, kept independent of the library implementation paths
// they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "depfn/core.hpp"

namespace testutil {

// Plain O(n^2) nearest-neighbor scan, written independently of
// depfn::nearest_neighbors (iterates coordinates directly, keeps best via
// explicit tie comparison).
inline std::vector<std::size_t> naive_nn(const std::vector<double>& pts, std::size_t n,
                                         std::size_t d) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = pts[j * d + k] - pts[i * d + k];
                acc += diff * diff;
            }
            if (acc < best || (acc == best && j < arg)) {
                best = acc;
                arg = j;
            }
        }
        out[i] = arg;
    }
    return out;
}

// Exact integral int_0^t phi_hat(s) ds of the step function
// phi_hat(s) = (1/n) #|{gaps <= s}|, accumulated step by step over the sorted
// gap values; the oracle route for the hinge formula.
inline double step_integral_kappa(const std::vector<double>& gaps, double t) {
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double integral = 0.0;
    double prev = 0.0;
    std::size_t count = 0;
    for (double g : sorted) {
        if (g > t) break;
        integral += static_cast<double>(count) / n * (g - prev);
        prev = g;
        ++count;
    }
    integral += static_cast<double>(count) / n * (t - prev);
    return 1.0 - 3.0 * t + 3.0 * integral;
}

// One-sample Kolmogorov-Smirnov statistic against Uniform(0,1).
inline double ks_uniform(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - sample[i];
        const double lo = sample[i] - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

// Sup over a lattice of |empirical joint CDF - cdf(u, v)|.
template <typename Cdf>
double joint_cdf_sup(const std::vector<std::pair<double, double>>& pts, Cdf&& cdf,
                     std::size_t lattice = 21) {
    double worst = 0.0;
    for (std::size_t a = 1; a <= lattice; ++a) {
        const double u = static_cast<double>(a) / static_cast<double>(lattice);
        for (std::size_t b = 1; b <= lattice; ++b) {
            const double v = static_cast<double>(b) / static_cast<double>(lattice);
            std::size_t count = 0;
            for (const auto& [pu, pv] : pts) count += pu <= u && pv <= v;
            const double emp = static_cast<double>(count) / static_cast<double>(pts.size());
            worst = std::max(worst, std::abs(emp - cdf(u, v)));
        }
    }
    return worst;
}

// Pearson correlation.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Two handy valid LSL diagonals used across tests and acceptance.
inline std::vector<std::pair<double, double>> diagonal_a() {
    return {{0.0, 0.0}, {0.5, 0.35}, {1.0, 1.0}};
}
inline std::vector<std::pair<double, double>> diagonal_b() {
    return {{0.0, 0.0}, {0.25, 0.15}, {0.75, 0.65}, {1.0, 1.0}};
}

}  // namespace testutil
