#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "depfn/copulas.hpp"
#include "depfn/estimator.hpp"
#include "depfn/normal.hpp"
#include "depfn/quadrature.hpp"
#include "depfn/rng.hpp"

namespace depfn {

struct ReferenceValue {
    double value = 0.0;
    CurveSource method = source::Analytic{};
};

// ---------------------------------------------------------------------------
// Independence and Frechet: exact closed forms
// ---------------------------------------------------------------------------

inline double phi_indep(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("phi_indep: t outside [0,1]");
    return 2.0 * t - t * t;
}

inline double kappa_indep(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("kappa_indep: t outside [0,1]");
    const double s = 1.0 - t;
    return s * s * s;
}

inline double frechet_phi(double alpha, double beta, double t) {
    validate_spec(FrechetSpec{alpha, beta});
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("frechet_phi: t outside [0,1]");
    const double a2b2 = alpha * alpha + beta * beta;
    const double ab = alpha * beta;
    const double sum = alpha + beta;
    return a2b2 + 2.0 * (1.0 - a2b2 - ab) * t - (1.0 - sum * sum) * t * t;
}

inline double frechet_kappa(double alpha, double beta, double t) {
    validate_spec(FrechetSpec{alpha, beta});
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("frechet_kappa: t outside [0,1]");
    const double a2b2 = alpha * alpha + beta * beta;
    const double ab = alpha * beta;
    const double sum = alpha + beta;
    return 1.0 + 3.0 * (a2b2 - 1.0) * t + 3.0 * (1.0 - a2b2 - ab) * t * t -
           (1.0 - sum * sum) * t * t * t;
}

inline double frechet_xi(double alpha, double beta) {
    validate_spec(FrechetSpec{alpha, beta});
    return alpha * alpha - alpha * beta + beta * beta;
}

// ---------------------------------------------------------------------------
// Gaussian: correlation of the product copula, arcsine form of xi, and the
// band probability by adaptive quadrature (no meaningful closed form).
// ---------------------------------------------------------------------------

inline double gaussian_rho_star(double rho, std::size_t d) {
    if (d < 1) throw input_error("gaussian_rho_star: d must be >= 1");
    const double dd = static_cast<double>(d);
    if (!(rho > -1.0 / dd && rho < 1.0))
        throw input_error("gaussian_rho_star: rho outside (-1/d, 1)");
    return dd * rho * rho / (1.0 + (dd - 1.0) * rho);
}

inline double gaussian_xi(double rho, std::size_t d) {
    const double rs = gaussian_rho_star(rho, d);
    return 3.0 / M_PI * std::asin(0.5 * (1.0 + rs)) - 0.5;
}

// P(|Phi(Z1) - Phi(Z2)| <= t) for a bivariate normal pair with correlation
// rho*(d), as a single adaptive quadrature over the conditioning variable.
inline ReferenceValue gaussian_phi(double rho, std::size_t d, double t, double tol = 1e-8) {
    const double r = gaussian_rho_star(rho, d);
    if (!(t >= 0.0 && t <= 1.0)) throw input_error("gaussian_phi: t outside [0,1]");
    if (t == 0.0) return {0.0, source::Quadrature{tol}};
    if (t == 1.0) return {1.0, source::Quadrature{tol}};
    const double s = std::sqrt(1.0 - r * r);
    auto band = [&](double z) {
        const double p = normal_cdf(z);
        const double hi = p + t, lo = p - t;
        const double upper = hi >= 1.0 ? 1.0 : normal_cdf((normal_quantile(hi) - r * z) / s);
        const double lower = lo <= 0.0 ? 0.0 : normal_cdf((normal_quantile(lo) - r * z) / s);
        return normal_pdf(z) * (upper - lower);
    };
    const double value = integrate(band, -8.5, 8.5, tol);
    return {std::clamp(value, 0.0, 1.0), source::Quadrature{tol}};
}

// ---------------------------------------------------------------------------
// Marshall-Olkin (alpha = 1 branch) and Jump endpoints
// ---------------------------------------------------------------------------

inline double mo_phi0(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw input_error("mo_phi0: beta outside [0,1]");
    return beta / (2.0 - beta);
}

inline double mo_xi(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw input_error("mo_xi: beta outside [0,1]");
    return 2.0 * beta / (3.0 - beta);
}

inline double jump_phi0(int m) {
    if (m < 0) throw input_error("jump_phi0: m must be >= 0");
    return std::ldexp(1.0, -m);
}

inline double jump_xi(int m) {
    if (m < 0) throw input_error("jump_xi: m must be >= 0");
    return std::ldexp(1.0, -2 * m);
}

// ---------------------------------------------------------------------------
// Lower semilinear copula references. Kendall's tau comes from a seeded
// Monte Carlo concordance estimate; the shortcut formulas for kappa(1), phi(0)
// and sing(C_delta) are evaluated exactly as stated with the piecewise-linear delta
// (closed form on each knot interval; integrands near u = 0 are finite since
// the first segment has delta(u) = s*u).
// ---------------------------------------------------------------------------

inline double kendall_tau_mc(const CopulaSpec& spec, std::size_t pairs = 1000000,
                             std::uint64_t seed = 0x7a5u) {
    const Dataset ds = sample_joint(spec, 2 * pairs, seed);
    double sum = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double du = ds.x[2 * i] - ds.x[2 * i + 1];
        const double dv = ds.y[2 * i] - ds.y[2 * i + 1];
        const double prod = du * dv;
        sum += prod > 0.0 ? 1.0 : (prod < 0.0 ? -1.0 : 0.0);
    }
    return sum / static_cast<double>(pairs);
}

inline ReferenceValue lsl_xi(const DiagonalSpec& diagonal, std::size_t tau_pairs = 1000000,
                             std::uint64_t seed = 0x7a5u) {
    diagonal.validate();
    const double tau = kendall_tau_mc(CopulaSpec{LslSpec{diagonal}}, tau_pairs, seed);
    return {2.0 * tau * tau / (1.0 + tau), source::MonteCarlo{tau_pairs, seed}};
}

namespace detail {

// int_a^b (c + s*u)^2 / u^2 du
inline double segment_sq_over_sq(double c, double s, double a, double b) {
    if (c == 0.0) return s * s * (b - a);
    return c * c * (1.0 / a - 1.0 / b) + 2.0 * c * s * std::log(b / a) + s * s * (b - a);
}

// int_a^b (c + s*u) / u du
inline double segment_over_u(double c, double s, double a, double b) {
    if (c == 0.0) return s * (b - a);
    return c * std::log(b / a) + s * (b - a);
}

template <typename SegFn>
double sum_over_segments(const DiagonalSpec& diagonal, SegFn&& f) {
    double total = 0.0;
    for (std::size_t seg = 0; seg + 1 < diagonal.knots.size(); ++seg) {
        const double a = diagonal.knots[seg].first;
        const double b = diagonal.knots[seg + 1].first;
        const double s = diagonal.slope(seg);
        const double c = diagonal.knots[seg].second - s * a;
        total += f(c, s, a, b);
    }
    return total;
}

}  // namespace detail

// phi(0) shortcut formula: -1 + 2 int delta(u)^2/u^2 du + int delta'(u)^2 du.
// Known to disagree with the sampled Markov product (see
// lsl_consistency_report); reported, never used as an acceptance oracle.
inline ReferenceValue lsl_phi0(const DiagonalSpec& diagonal) {
    diagonal.validate();
    const double sq = detail::sum_over_segments(diagonal, [](double c, double s, double a, double b) {
        return detail::segment_sq_over_sq(c, s, a, b);
    });
    const double dsq = detail::sum_over_segments(diagonal, [](double, double s, double a, double b) {
        return s * s * (b - a);
    });
    return {-1.0 + 2.0 * sq + dsq, source::Analytic{}};
}

// Mass of the singular part of C_delta: 2 int delta(u)/u du - 1.
inline ReferenceValue lsl_sing(const DiagonalSpec& diagonal) {
    diagonal.validate();
    const double integral = detail::sum_over_segments(
        diagonal,
        [](double c, double s, double a, double b) { return detail::segment_over_u(c, s, a, b); });
    return {2.0 * integral - 1.0, source::Analytic{}};
}

// ---------------------------------------------------------------------------
// Curves built straight from a Markov-product sample: the empirical CDF of
// |v - v'| and its hinge integral. Both inherit the exact shape properties
// (phi non-decreasing with phi(1) = 1, kappa convex non-increasing).
// ---------------------------------------------------------------------------

inline DependenceCurve markov_phi_curve(const MarkovSample& ms, std::span<const double> grid,
                                        CurveSource src) {
    require_valid_grid(grid);
    std::vector<double> diffs;
    diffs.reserve(ms.pairs.size());
    for (const auto& [v, w] : ms.pairs) diffs.push_back(std::abs(v - w));
    std::sort(diffs.begin(), diffs.end());
    DependenceCurve c;
    c.kind = CurveKind::Phi;
    c.source = src;
    c.grid.assign(grid.begin(), grid.end());
    c.values.reserve(grid.size());
    const double n = static_cast<double>(diffs.size());
    for (double t : grid) {
        const auto it = std::upper_bound(diffs.begin(), diffs.end(), t);
        c.values.push_back(static_cast<double>(it - diffs.begin()) / n);
    }
    return c;
}

inline DependenceCurve markov_kappa_curve(const MarkovSample& ms, std::span<const double> grid,
                                          CurveSource src) {
    require_valid_grid(grid);
    std::vector<double> diffs;
    diffs.reserve(ms.pairs.size());
    for (const auto& [v, w] : ms.pairs) diffs.push_back(std::abs(v - w));
    std::sort(diffs.begin(), diffs.end());
    std::vector<double> prefix(diffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < diffs.size(); ++i) prefix[i + 1] = prefix[i] + diffs[i];
    DependenceCurve c;
    c.kind = CurveKind::Kappa;
    c.source = src;
    c.grid.assign(grid.begin(), grid.end());
    c.values.reserve(grid.size());
    const double n = static_cast<double>(diffs.size());
    for (double t : grid) {
        const std::size_t k = std::upper_bound(diffs.begin(), diffs.end(), t) - diffs.begin();
        const double hinge = static_cast<double>(k) * t - prefix[k];
        c.values.push_back(1.0 - 3.0 * t + 3.0 * hinge / n);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Reference curve dispatch: closed form where one exists, quadrature for the
// Gaussian family, Monte Carlo over the Markov-product sampler otherwise.
// ---------------------------------------------------------------------------

struct ReferenceOptions {
    std::size_t mc_samples = 200000;
    std::uint64_t mc_seed = 0x9e2026u;
    double quad_tol = 1e-8;
};

inline DependenceCurve reference_curve(const CopulaSpec& spec, CurveKind kind,
                                       std::span<const double> grid,
                                       const ReferenceOptions& opts = {}) {
    validate_spec(spec);
    require_valid_grid(grid);

    auto analytic = [&](auto&& f) {
        DependenceCurve c;
        c.kind = kind;
        c.source = source::Analytic{};
        c.grid.assign(grid.begin(), grid.end());
        c.values.reserve(grid.size());
        for (double t : grid) c.values.push_back(f(t));
        return c;
    };

    if (std::holds_alternative<IndependenceSpec>(spec))
        return analytic([&](double t) { return kind == CurveKind::Phi ? phi_indep(t) : kappa_indep(t); });
    if (std::holds_alternative<ComonotoneSpec>(spec)) return analytic([](double) { return 1.0; });
    if (const auto* f = std::get_if<FrechetSpec>(&spec))
        return analytic([&](double t) {
            return kind == CurveKind::Phi ? frechet_phi(f->alpha, f->beta, t)
                                          : frechet_kappa(f->alpha, f->beta, t);
        });

    if (const auto* g = std::get_if<GaussianEquiSpec>(&spec)) {
        DependenceCurve c;
        c.kind = kind;
        c.source = source::Quadrature{opts.quad_tol};
        c.grid.assign(grid.begin(), grid.end());
        c.values.reserve(grid.size());
        auto phi_at = [&](double t) { return gaussian_phi(g->rho, g->d, t, opts.quad_tol * 0.1).value; };
        if (kind == CurveKind::Phi) {
            for (double t : grid) c.values.push_back(phi_at(t));
        } else {
            // kappa(t) = 1 - 3t + 3 int_0^t phi; accumulate panel by panel
            double cum = 0.0, prev = 0.0;
            for (double t : grid) {
                if (t > prev)
                    cum += integrate(phi_at, prev, t, opts.quad_tol * std::max(t - prev, 0.01));
                prev = t;
                c.values.push_back(std::clamp(1.0 - 3.0 * t + 3.0 * cum, 0.0, 1.0));
            }
        }
        return c;
    }

    // Marshall-Olkin, Jump, LSL: Monte Carlo over the Markov product
    const MarkovSample ms = sample_markov_product(spec, opts.mc_samples, opts.mc_seed);
    const CurveSource src = source::MonteCarlo{opts.mc_samples, opts.mc_seed};
    return kind == CurveKind::Phi ? markov_phi_curve(ms, grid, src) : markov_kappa_curve(ms, grid, src);
}

// ---------------------------------------------------------------------------
// LSL consistency report: validates the conditional sampler against the
// closed-form C_delta, then cross-checks the delta*, phi(0) and
// kappa(1) formulas against the sampled Markov product and flags each
// disagreement instead of guessing a correction.
// ---------------------------------------------------------------------------

struct LslReportOptions {
    std::size_t joint_samples = 100000;
    std::size_t product_samples = 100000;
    std::size_t tau_pairs = 1000000;
    std::uint64_t seed = 0x15e1u;
    std::size_t grid_points = 101;
    double cdf_tolerance = 0.02;
    double dstar_tolerance = 0.02;
    double phi0_tolerance = 0.02;
    double xi_tolerance = 0.02;
};

struct LslConsistencyReport {
    double joint_cdf_sup = 0.0;  // empirical joint CDF vs C_delta, grid sup
    bool sampler_ok = false;

    double dstar_max_dev = 0.0;  // formula delta* vs MC diagonal of psi(C_delta)
    bool dstar_flagged = false;
    bool dstar_valid_diagonal = false;  // does formula delta* satisfy diagonal constraints?

    double phi0_formula = 0.0;
    double phi0_mc = 0.0;  // exact-collision frequency in the Markov product
    bool phi0_flagged = false;

    double tau_mc = 0.0;
    double xi_formula = 0.0;  // 2 tau^2 / (1 + tau)
    double xi_mc = 0.0;       // 3 mean(1 - |v - v'|) - 2
    bool xi_flagged = false;
};

inline LslConsistencyReport lsl_consistency_report(const DiagonalSpec& diagonal,
                                                   const LslReportOptions& opts = {}) {
    diagonal.validate();
    const CopulaSpec spec{LslSpec{diagonal}};
    LslConsistencyReport rep;
    const std::vector<double> grid = uniform_grid(opts.grid_points);

    {  // empirical joint CDF of the conditional sampler vs closed-form C_delta
        const Dataset ds = sample_joint(spec, opts.joint_samples, derive_seed(opts.seed, 1));
        std::vector<std::pair<double, double>> pts(ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i) pts[i] = {ds.x[i], ds.y[i]};
        std::sort(pts.begin(), pts.end());
        std::vector<std::size_t> vcount(grid.size(), 0);
        std::size_t taken = 0;
        const double inv_n = 1.0 / static_cast<double>(pts.size());
        for (double u : grid) {
            while (taken < pts.size() && pts[taken].first <= u) {
                const std::size_t bin =
                    std::lower_bound(grid.begin(), grid.end(), pts[taken].second) - grid.begin();
                for (std::size_t b = bin; b < grid.size(); ++b) ++vcount[b];
                ++taken;
            }
            for (std::size_t b = 0; b < grid.size(); ++b) {
                const double emp = static_cast<double>(vcount[b]) * inv_n;
                rep.joint_cdf_sup =
                    std::max(rep.joint_cdf_sup, std::abs(emp - bivariate_cdf(spec, u, grid[b])));
            }
        }
        rep.sampler_ok = rep.joint_cdf_sup <= opts.cdf_tolerance;
    }

    const MarkovSample ms = sample_markov_product(spec, opts.product_samples, derive_seed(opts.seed, 2));
    const double inv_m = 1.0 / static_cast<double>(ms.pairs.size());

    {  // delta* formula vs the MC diagonal P(v <= x, v' <= x)
        for (double x : grid) {
            if (x == 0.0) continue;
            std::size_t count = 0;
            for (const auto& [v, w] : ms.pairs) count += (v <= x) && (w <= x);
            const double formula = diagonal(x) * diagonal(x) / x + x * x * detail::dstar_tail(diagonal, x);
            rep.dstar_max_dev =
                std::max(rep.dstar_max_dev, std::abs(formula - static_cast<double>(count) * inv_m));
        }
        rep.dstar_flagged = rep.dstar_max_dev > opts.dstar_tolerance;
        try {
            delta_star(diagonal).validate();
            rep.dstar_valid_diagonal = true;
        } catch (const config_error&) {
            rep.dstar_valid_diagonal = false;
        }
    }

    {  // phi(0): shortcut formula vs exact conditional collisions
        rep.phi0_formula = lsl_phi0(diagonal).value;
        std::size_t collisions = 0;
        for (const auto& [v, w] : ms.pairs) collisions += v == w;
        rep.phi0_mc = static_cast<double>(collisions) * inv_m;
        rep.phi0_flagged = std::abs(rep.phi0_formula - rep.phi0_mc) > opts.phi0_tolerance;
    }

    {  // kappa(1): 2 tau^2/(1+tau) vs the sampled Markov product
        rep.tau_mc = kendall_tau_mc(spec, opts.tau_pairs, derive_seed(opts.seed, 3));
        rep.xi_formula = 2.0 * rep.tau_mc * rep.tau_mc / (1.0 + rep.tau_mc);
        double sum = 0.0;
        for (const auto& [v, w] : ms.pairs) sum += 1.0 - std::abs(v - w);
        rep.xi_mc = 3.0 * sum * inv_m - 2.0;
        rep.xi_flagged = std::abs(rep.xi_formula - rep.xi_mc) > opts.xi_tolerance;
    }

    return rep;
}

}  // namespace depfn
