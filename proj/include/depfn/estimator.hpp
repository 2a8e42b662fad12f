#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "depfn/core.hpp"

namespace depfn {

// ---------------------------------------------------------------------------
// Normalized nearest-neighbor rank gaps g_i = |R_i - R_{N(i)}| / (n+1)
// ---------------------------------------------------------------------------

struct NormalizedGaps {
    std::size_t n = 0;
    std::vector<double> gaps;
};

inline NormalizedGaps normalized_gaps(const RankPairs& rp) {
    if (rp.n < 2 || rp.pairs.size() != rp.n) throw input_error("normalized_gaps: invalid rank pairs");
    NormalizedGaps g;
    g.n = rp.n;
    g.gaps.reserve(rp.n);
    const double denom = static_cast<double>(rp.n + 1);
    for (const auto& [ri, rj] : rp.pairs) g.gaps.push_back(std::abs(ri - rj) / denom);
    return g;
}

// ---------------------------------------------------------------------------
// Plug-in estimators
// ---------------------------------------------------------------------------

// phi_hat(t): fraction of gaps <= t. Right-continuous non-decreasing step
// function with steps at multiples of 1/(n+1); phi_hat(1) = 1 since every
// gap is at most (n-1)/(n+1).
inline double phi_hat(const NormalizedGaps& g, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("phi_hat: t outside [0,1]");
    std::size_t count = 0;
    for (double gap : g.gaps) count += gap <= t;
    return static_cast<double>(count) / static_cast<double>(g.n);
}

// kappa_hat(t) = 1 - 3t + (3/n) * sum (t - g_i)_+, the exact hinge form of
// 1 - 3*int_0^t (1 - phi_hat). Piecewise linear, convex, non-increasing,
// 3-Lipschitz, kappa_hat(0) = 1.
inline double kappa_hat(const NormalizedGaps& g, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("kappa_hat: t outside [0,1]");
    double hinge = 0.0;
    for (double gap : g.gaps)
        if (t > gap) hinge += t - gap;
    return 1.0 - 3.0 * t + 3.0 * hinge / static_cast<double>(g.n);
}

// xi_hat = kappa_hat(1), algebraically 1 - 3*mean(gaps). Not clamped: the
// population value lies in [0,1] but the estimator may go slightly negative.
inline double xi_hat(const NormalizedGaps& g) { return kappa_hat(g, 1.0); }

// Deterministic near-zero evaluation threshold, default b_n = 1/n. Satisfies
// b_n >= 1/(n+1), the minimal spacing of normalized ranks.
inline double near_zero_threshold(std::size_t n) {
    if (n < 2) throw input_error("near_zero_threshold: n must be >= 2");
    return 1.0 / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Dependence curves
// ---------------------------------------------------------------------------

enum class CurveKind { Phi, Kappa };

inline const char* curve_kind_name(CurveKind k) { return k == CurveKind::Phi ? "phi" : "kappa"; }

namespace source {
struct Estimated {
    std::size_t n;
};
struct Analytic {};
struct Quadrature {
    double tolerance;
};
struct MonteCarlo {
    std::size_t samples;
    std::uint64_t seed;
};
}  // namespace source

using CurveSource =
    std::variant<source::Estimated, source::Analytic, source::Quadrature, source::MonteCarlo>;

struct DependenceCurve {
    std::vector<double> grid;
    std::vector<double> values;
    CurveKind kind = CurveKind::Phi;
    CurveSource source = source::Analytic{};
};

// {0, 1/(k-1), ..., 1}
inline std::vector<double> uniform_grid(std::size_t points = 101) {
    if (points < 2) throw input_error("uniform_grid: need at least 2 points");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    g.back() = 1.0;
    return g;
}

inline void require_valid_grid(std::span<const double> grid) {
    if (grid.empty()) throw input_error("grid: empty");
    if (!(grid.front() >= 0.0 && grid.back() <= 1.0)) throw input_error("grid: outside [0,1]");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] >= grid[i - 1])) throw input_error("grid: not sorted");
}

inline DependenceCurve phi_curve(const NormalizedGaps& g, std::span<const double> grid) {
    require_valid_grid(grid);
    DependenceCurve c;
    c.kind = CurveKind::Phi;
    c.source = source::Estimated{g.n};
    c.grid.assign(grid.begin(), grid.end());
    c.values.reserve(grid.size());
    for (double t : grid) c.values.push_back(phi_hat(g, t));
    return c;
}

inline DependenceCurve kappa_curve(const NormalizedGaps& g, std::span<const double> grid) {
    require_valid_grid(grid);
    DependenceCurve c;
    c.kind = CurveKind::Kappa;
    c.source = source::Estimated{g.n};
    c.grid.assign(grid.begin(), grid.end());
    c.values.reserve(grid.size());
    for (double t : grid) c.values.push_back(kappa_hat(g, t));
    return c;
}

// Shape checks from the curve invariants: phi in [0,1] and non-decreasing
// with phi(1) = 1 when the grid reaches 1; kappa at most 1, kappa(0) = 1,
// non-increasing, 3-Lipschitz and convex. Kappa has no lower-bound check:
// the population curve lies in [0,1] but the estimator is not clamped and
// may go negative in finite samples. Returns human-readable violations;
// empty means valid.
inline std::vector<std::string> curve_violations(const DependenceCurve& c, double eps = 1e-9) {
    std::vector<std::string> out;
    if (c.grid.size() != c.values.size()) {
        out.push_back("grid/values size mismatch");
        return out;
    }
    const double lower = c.kind == CurveKind::Phi ? 0.0 : -3.0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (!(c.values[i] >= lower - eps && c.values[i] <= 1.0 + eps)) {
            out.push_back("value out of range at t = " + std::to_string(c.grid[i]));
            break;
        }
    if (c.kind == CurveKind::Phi) {
        for (std::size_t i = 1; i < c.values.size(); ++i)
            if (c.values[i] < c.values[i - 1] - eps) {
                out.push_back("phi decreases at t = " + std::to_string(c.grid[i]));
                break;
            }
        if (!c.grid.empty() && c.grid.back() == 1.0 && std::abs(c.values.back() - 1.0) > eps)
            out.push_back("phi(1) != 1");
    } else {
        if (!c.grid.empty() && c.grid.front() == 0.0 && std::abs(c.values.front() - 1.0) > eps)
            out.push_back("kappa(0) != 1");
        for (std::size_t i = 1; i < c.values.size(); ++i) {
            const double dv = c.values[i] - c.values[i - 1];
            const double dt = c.grid[i] - c.grid[i - 1];
            if (dv > eps) {
                out.push_back("kappa increases at t = " + std::to_string(c.grid[i]));
                break;
            }
            if (std::abs(dv) > 3.0 * dt + eps) {
                out.push_back("kappa violates 3-Lipschitz at t = " + std::to_string(c.grid[i]));
                break;
            }
        }
        for (std::size_t i = 2; i < c.values.size(); ++i) {
            const double dt1 = c.grid[i - 1] - c.grid[i - 2];
            const double dt2 = c.grid[i] - c.grid[i - 1];
            if (dt1 <= 0.0 || dt2 <= 0.0) continue;
            const double slope1 = (c.values[i - 1] - c.values[i - 2]) / dt1;
            const double slope2 = (c.values[i] - c.values[i - 1]) / dt2;
            if (slope2 < slope1 - eps) {
                out.push_back("kappa not convex at t = " + std::to_string(c.grid[i]));
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Identity cross-check: both scalar representations of xi from Markov-product
// samples. For exchangeable input the two sides agree up to margin noise.
// ---------------------------------------------------------------------------

struct IdentityCheck {
    double lhs = 0.0;  // 6*mean(min(v, v')) - 2
    double rhs = 0.0;  // 3*mean(1 - |v - v'|) - 2
    double diff = 0.0;
};

inline IdentityCheck identity_check(std::span<const std::pair<double, double>> samples) {
    if (samples.empty()) throw input_error("identity_check: empty sample");
    double sum_min = 0.0, sum_one_minus_abs = 0.0;
    for (const auto& [v, w] : samples) {
        if (!(v >= 0.0 && v <= 1.0 && w >= 0.0 && w <= 1.0))
            throw input_error("identity_check: sample outside the unit square");
        sum_min += std::min(v, w);
        sum_one_minus_abs += 1.0 - std::abs(v - w);
    }
    const double m = static_cast<double>(samples.size());
    IdentityCheck r;
    r.lhs = 6.0 * sum_min / m - 2.0;
    r.rhs = 3.0 * sum_one_minus_abs / m - 2.0;
    r.diff = r.lhs - r.rhs;
    return r;
}

}  // namespace depfn
