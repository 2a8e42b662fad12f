#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "depfn/core.hpp"
#include "depfn/normal.hpp"
#include "depfn/rng.hpp"

namespace depfn {

// ---------------------------------------------------------------------------
// Diagonal sections for lower semilinear copulas: piecewise-linear delta with
// delta(0) = 0, delta(1) = 1, non-decreasing, 2-Lipschitz, delta(t) <= t,
// delta(t)/t non-decreasing and delta(t)/t^2 non-increasing.
// ---------------------------------------------------------------------------

struct DiagonalSpec {
    std::vector<std::pair<double, double>> knots;  // (t, delta(t)), t strictly increasing

    double operator()(double t) const {
        const std::size_t s = segment(t);
        const auto& [t0, d0] = knots[s];
        return d0 + slope(s) * (t - t0);
    }

    // a.e. derivative: the slope of the segment containing t (right
    // derivative at interior knots, left at t = 1)
    double derivative(double t) const { return slope(segment(t)); }

    double slope(std::size_t seg) const {
        return (knots[seg + 1].second - knots[seg].second) /
               (knots[seg + 1].first - knots[seg].first);
    }

    std::size_t segment(double t) const {
        std::size_t lo = 0, hi = knots.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (knots[mid].first <= t ? lo : hi) = mid;
        }
        return lo;
    }

    void validate() const {
        if (knots.size() < 2) throw config_error("diagonal: need at least 2 knots");
        if (knots.front() != std::pair<double, double>{0.0, 0.0})
            throw config_error("diagonal: first knot must be (0, 0)");
        if (knots.back() != std::pair<double, double>{1.0, 1.0})
            throw config_error("diagonal: last knot must be (1, 1)");
        const double eps = 1e-12;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (!(knots[i].first > knots[i - 1].first))
                throw config_error("diagonal: knot abscissae must be strictly increasing");
            const double s = slope(i - 1);
            if (s < -eps) throw config_error("diagonal: not non-decreasing");
            if (s > 2.0 + eps) throw config_error("diagonal: not 2-Lipschitz");
        }
        // delta(t) <= t at knots (hence everywhere, by linearity)
        for (std::size_t i = 1; i < knots.size(); ++i) {
            const auto& [t, dt] = knots[i];
            if (dt > t + eps) throw config_error("diagonal: delta(t) > t at t = " + std::to_string(t));
        }
        // For piecewise-linear delta the two ratio monotonicity conditions
        // reduce to exact per-segment inequalities at the left knot:
        //   delta/t   non-decreasing  <=>  s*t_l >= delta_l   (s*t - delta constant on the segment)
        //   delta/t^2 non-increasing  <=>  s*t_l <= 2*delta_l (s*t - 2*delta maximal at the left)
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double s = slope(i);
            const double tl = knots[i].first;
            const double dl = knots[i].second;
            if (s * tl < dl - 1e-9)
                throw config_error("diagonal: delta(t)/t not non-decreasing on segment at t = " +
                                   std::to_string(tl));
            if (s * tl > 2.0 * dl + 1e-9)
                throw config_error("diagonal: delta(t)/t^2 not non-increasing on segment at t = " +
                                   std::to_string(tl));
        }
    }

    static DiagonalSpec identity() { return {{{0.0, 0.0}, {1.0, 1.0}}}; }

    // Piecewise-linear member of the LSL class converging to the
    // independence diagonal t^2: delta_j = t_j * t_{j+1} sits on the class
    // boundary (s*t_l = 2*delta_l per segment), unlike a plain interpolation
    // of t^2 whose chords overshoot the delta/t^2 condition.
    static DiagonalSpec independence(std::size_t segments = 64) {
        DiagonalSpec d;
        d.knots.reserve(segments + 1);
        for (std::size_t i = 0; i <= segments; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(segments);
            const double next = static_cast<double>(i + 1) / static_cast<double>(segments);
            d.knots.emplace_back(t, i == segments ? 1.0 : t * next);
        }
        return d;
    }

    // delta sampled from an arbitrary function on a uniform knot grid; the
    // result is not necessarily in the LSL class (validate() decides)
    template <typename F>
    static DiagonalSpec from_function(F&& f, std::size_t segments) {
        DiagonalSpec d;
        d.knots.reserve(segments + 1);
        for (std::size_t i = 0; i <= segments; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(segments);
            d.knots.emplace_back(t, f(t));
        }
        d.knots.front() = {0.0, 0.0};
        d.knots.back() = {1.0, 1.0};
        return d;
    }
};

// ---------------------------------------------------------------------------
// Copula family specs
// ---------------------------------------------------------------------------

struct FrechetSpec {
    double alpha = 0.0, beta = 0.0;  // alpha*M + (1-alpha-beta)*Pi + beta*W
};

struct GaussianEquiSpec {
    double rho = 0.0;     // common pairwise correlation, in (-1/d, 1)
    std::size_t d = 1;    // predictor dimension; the copula is (d+1)-variate
};

struct MarshallOlkinSpec {
    double alpha = 0.0, beta = 0.0;  // C(u,v) = min(u^{1-alpha} v, u v^{1-beta})
};

struct JumpSpec {
    int m = 0;  // average of 2^m shuffle copulas with shifts i/2^m
};

struct LslSpec {
    DiagonalSpec diagonal;
};

struct IndependenceSpec {};
struct ComonotoneSpec {};

using CopulaSpec = std::variant<FrechetSpec, GaussianEquiSpec, MarshallOlkinSpec, JumpSpec,
                                LslSpec, IndependenceSpec, ComonotoneSpec>;

inline void validate_spec(const CopulaSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FrechetSpec>) {
                if (!(s.alpha >= 0.0 && s.alpha <= 1.0 && s.beta >= 0.0 && s.beta <= 1.0))
                    throw config_error("frechet: alpha and beta must lie in [0,1]");
                if (s.alpha + s.beta > 1.0 + 1e-12)
                    throw config_error("frechet: alpha + beta must be <= 1");
            } else if constexpr (std::is_same_v<T, GaussianEquiSpec>) {
                if (s.d < 1) throw config_error("gaussian: d must be >= 1");
                if (!(s.rho > -1.0 / static_cast<double>(s.d) && s.rho < 1.0))
                    throw config_error("gaussian: rho must lie in (-1/d, 1)");
            } else if constexpr (std::is_same_v<T, MarshallOlkinSpec>) {
                if (!(s.alpha >= 0.0 && s.alpha <= 1.0 && s.beta >= 0.0 && s.beta <= 1.0))
                    throw config_error("marshall_olkin: alpha and beta must lie in [0,1]");
            } else if constexpr (std::is_same_v<T, JumpSpec>) {
                if (s.m < 0) throw config_error("jump: m must be >= 0");
                if (s.m > 40) throw config_error("jump: m > 40 not supported");
            } else if constexpr (std::is_same_v<T, LslSpec>) {
                s.diagonal.validate();
            }
        },
        spec);
}

inline std::size_t spec_dimension(const CopulaSpec& spec) {
    if (const auto* g = std::get_if<GaussianEquiSpec>(&spec)) return g->d;
    return 1;
}

inline std::string family_name(const CopulaSpec& spec) {
    struct Namer {
        std::string operator()(const FrechetSpec&) const { return "frechet"; }
        std::string operator()(const GaussianEquiSpec&) const { return "gaussian"; }
        std::string operator()(const MarshallOlkinSpec&) const { return "marshall_olkin"; }
        std::string operator()(const JumpSpec&) const { return "jump"; }
        std::string operator()(const LslSpec&) const { return "lsl"; }
        std::string operator()(const IndependenceSpec&) const { return "independence"; }
        std::string operator()(const ComonotoneSpec&) const { return "comonotone"; }
    };
    return std::visit(Namer{}, spec);
}

// ---------------------------------------------------------------------------
// Conditional draws of V given the conditioning value, per family. These are
// the building blocks of both sample_joint and the generic two-draw Markov
// product sampler.
// ---------------------------------------------------------------------------

namespace detail {

inline double frechet_conditional(const FrechetSpec& s, double u, Rng& rng) {
    const double w = rng.uniform();
    if (w < s.alpha) return u;
    if (w < s.alpha + s.beta) return 1.0 - u;
    return rng.uniform();
}

inline double jump_conditional(const JumpSpec& s, double u, Rng& rng) {
    const std::uint64_t shifts = 1ULL << s.m;
    const std::uint64_t i = rng.below(shifts) + 1;
    if (i == shifts) return u;  // shift 1 mod 1, exact
    double v = u + static_cast<double>(i) / static_cast<double>(shifts);
    if (v >= 1.0) v -= 1.0;
    return v;
}

// Conditional CDF of V given U = u for Marshall-Olkin: linear of total mass
// (1-alpha) u^{alpha(1-beta)/beta} below the kink v = u^{alpha/beta}, an atom
// of mass alpha u^{alpha(1-beta)/beta} there, and v^{1-beta} above it.
// Requires alpha, beta in (0, 1]; min{alpha,beta} = 0 is handled as
// independence by the callers.
inline double marshall_olkin_conditional(const MarshallOlkinSpec& s, double u, Rng& rng) {
    const double w = rng.uniform();
    const double scale = std::pow(u, s.alpha * (1.0 - s.beta) / s.beta);
    const double below = (1.0 - s.alpha) * scale;
    if (w < below) return w * std::pow(u, s.alpha) / (1.0 - s.alpha);
    if (w < scale || s.beta == 1.0) return std::pow(u, s.alpha / s.beta);
    return std::pow(w, 1.0 / (1.0 - s.beta));
}

// Conditional CDF of V given U = u for the lower semilinear copula:
// v (delta'(u) u - delta(u)) / u^2 for v < u, an atom at v = u, delta(v)/v
// for v > u. The two thresholds are delta'(u) - delta(u)/u and delta(u)/u;
// their order is exactly the delta/t, delta/t^2 monotonicity constraints.
inline double lsl_conditional(const DiagonalSpec& delta, double u, Rng& rng) {
    const double du = delta(u);
    const double su = delta.derivative(u);
    const double below = su - du / u;
    const double at = du / u;
    const double w = rng.uniform();
    if (w < below) return w * u * u / (su * u - du);
    if (w < at) return u;  // atom
    // invert delta(v)/v = w on (u, 1]; per segment delta(t) = c + s t with
    // c <= 0, so the ratio s + c/t is non-decreasing and t = c/(w - s)
    std::size_t seg = delta.segment(u);
    for (;; ++seg) {
        const double b = delta.knots[seg + 1].first;
        const double ratio_b = delta.knots[seg + 1].second / b;
        if (w <= ratio_b || seg + 2 == delta.knots.size()) {
            const double s = delta.slope(seg);
            const double c = delta.knots[seg].second - s * delta.knots[seg].first;
            double v;
            if (w == s || c == 0.0) {
                v = std::max(u, delta.knots[seg].first);  // flat ratio segment
            } else {
                v = c / (w - s);
            }
            return std::clamp(v, std::max(u, delta.knots[seg].first), b);
        }
    }
}

// Equicorrelated normals: shared factor for rho >= 0; for rho < 0 the exact
// spectral square root sqrt(1-rho) (e - mean(e)) + sqrt(1 + (m-1) rho) mean(e).
inline void equicorrelated_normals(double rho, std::size_t m, Rng& rng, std::vector<double>& z) {
    z.resize(m);
    if (rho >= 0.0) {
        const double a = std::sqrt(rho), b = std::sqrt(1.0 - rho);
        const double shared = rng.normal();
        for (std::size_t k = 0; k < m; ++k) z[k] = a * shared + b * rng.normal();
        return;
    }
    double mean = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        z[k] = rng.normal();
        mean += z[k];
    }
    mean /= static_cast<double>(m);
    const double a = std::sqrt(1.0 - rho);
    const double b = std::sqrt(1.0 + (static_cast<double>(m) - 1.0) * rho);
    for (std::size_t k = 0; k < m; ++k) z[k] = a * (z[k] - mean) + b * mean;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Joint sampling: n i.i.d. draws of (V, U) ~ C with uniform margins, returned
// as a Dataset with y = V and x = U.
// ---------------------------------------------------------------------------

inline Dataset sample_joint(const CopulaSpec& spec, std::size_t n, std::uint64_t seed) {
    validate_spec(spec);
    if (n < 2) throw config_error("sample_joint: n must be >= 2");
    Rng rng(seed);
    Dataset ds;
    ds.d = spec_dimension(spec);
    ds.y.reserve(n);
    ds.x.reserve(n * ds.d);

    if (const auto* f = std::get_if<FrechetSpec>(&spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            ds.x.push_back(u);
            ds.y.push_back(detail::frechet_conditional(*f, u, rng));
        }
    } else if (const auto* g = std::get_if<GaussianEquiSpec>(&spec)) {
        std::vector<double> z;
        for (std::size_t i = 0; i < n; ++i) {
            detail::equicorrelated_normals(g->rho, g->d + 1, rng, z);
            for (std::size_t k = 0; k < g->d; ++k) ds.x.push_back(normal_cdf(z[k]));
            ds.y.push_back(normal_cdf(z[g->d]));
        }
    } else if (const auto* mo = std::get_if<MarshallOlkinSpec>(&spec)) {
        if (std::min(mo->alpha, mo->beta) == 0.0) {
            for (std::size_t i = 0; i < n; ++i) {  // boundary case: independence
                ds.x.push_back(rng.uniform());
                ds.y.push_back(rng.uniform());
            }
        } else {
            // min-of-exponentials shock construction with lambda_12 = 1
            const double lam1 = 1.0 / mo->alpha - 1.0;
            const double lam2 = 1.0 / mo->beta - 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double z1 = rng.exponential(lam1);
                const double z2 = rng.exponential(lam2);
                const double z12 = rng.exponential(1.0);
                ds.x.push_back(std::exp(-(lam1 + 1.0) * std::min(z1, z12)));
                ds.y.push_back(std::exp(-(lam2 + 1.0) * std::min(z2, z12)));
            }
        }
    } else if (const auto* j = std::get_if<JumpSpec>(&spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            ds.x.push_back(u);
            ds.y.push_back(detail::jump_conditional(*j, u, rng));
        }
    } else if (const auto* l = std::get_if<LslSpec>(&spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform_pos();
            ds.x.push_back(u);
            ds.y.push_back(detail::lsl_conditional(l->diagonal, u, rng));
        }
    } else if (std::holds_alternative<IndependenceSpec>(spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            ds.x.push_back(rng.uniform());
            ds.y.push_back(rng.uniform());
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            ds.x.push_back(u);
            ds.y.push_back(u);
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Markov product sampling: pairs (v, v') that are conditionally i.i.d. given
// the conditioning value. This two-draw path is the reference implementation
// for every family; analytic product specs below serve as oracles.
// ---------------------------------------------------------------------------

struct MarkovSample {
    std::vector<std::pair<double, double>> pairs;
};

inline MarkovSample sample_markov_product(const CopulaSpec& spec, std::size_t n, std::uint64_t seed) {
    validate_spec(spec);
    if (n < 1) throw config_error("sample_markov_product: n must be >= 1");
    Rng rng(seed);
    MarkovSample ms;
    ms.pairs.reserve(n);

    if (const auto* f = std::get_if<FrechetSpec>(&spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            ms.pairs.emplace_back(detail::frechet_conditional(*f, u, rng),
                                  detail::frechet_conditional(*f, u, rng));
        }
    } else if (const auto* g = std::get_if<GaussianEquiSpec>(&spec)) {
        // given Z_1..Z_d the conditional law of the response coordinate is
        // N(w * sum(Z), 1 - rho*(d)) with w = rho / (1 + (d-1) rho)
        const double dd = static_cast<double>(g->d);
        const double w = g->rho / (1.0 + (dd - 1.0) * g->rho);
        const double rho_star = dd * g->rho * g->rho / (1.0 + (dd - 1.0) * g->rho);
        const double sd = std::sqrt(1.0 - rho_star);
        std::vector<double> z;
        for (std::size_t i = 0; i < n; ++i) {
            detail::equicorrelated_normals(g->rho, g->d, rng, z);
            double sum = 0.0;
            for (double zk : z) sum += zk;
            const double mean = w * sum;
            ms.pairs.emplace_back(normal_cdf(mean + sd * rng.normal()),
                                  normal_cdf(mean + sd * rng.normal()));
        }
    } else if (const auto* mo = std::get_if<MarshallOlkinSpec>(&spec)) {
        if (std::min(mo->alpha, mo->beta) == 0.0) {
            for (std::size_t i = 0; i < n; ++i)
                ms.pairs.emplace_back(rng.uniform(), rng.uniform());
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double u = rng.uniform_pos();
                ms.pairs.emplace_back(detail::marshall_olkin_conditional(*mo, u, rng),
                                      detail::marshall_olkin_conditional(*mo, u, rng));
            }
        }
    } else if (const auto* j = std::get_if<JumpSpec>(&spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            ms.pairs.emplace_back(detail::jump_conditional(*j, u, rng),
                                  detail::jump_conditional(*j, u, rng));
        }
    } else if (const auto* l = std::get_if<LslSpec>(&spec)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform_pos();
            ms.pairs.emplace_back(detail::lsl_conditional(l->diagonal, u, rng),
                                  detail::lsl_conditional(l->diagonal, u, rng));
        }
    } else if (std::holds_alternative<IndependenceSpec>(spec)) {
        for (std::size_t i = 0; i < n; ++i) ms.pairs.emplace_back(rng.uniform(), rng.uniform());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            ms.pairs.emplace_back(u, u);
        }
    }
    return ms;
}

// ---------------------------------------------------------------------------
// Analytic Markov products, where available.
// ---------------------------------------------------------------------------

// Suffix integral T(x) = int_x^1 (delta'(u)/u)^2 du for piecewise-linear
// delta; per segment with slope s, int (s/u)^2 du = s^2 (1/a - 1/b).
namespace detail {
inline double dstar_tail(const DiagonalSpec& delta, double x) {
    double total = 0.0;
    for (std::size_t seg = delta.segment(x); seg + 1 < delta.knots.size(); ++seg) {
        const double a = std::max(x, delta.knots[seg].first);
        const double b = delta.knots[seg + 1].first;
        if (b <= a) continue;
        const double s = delta.slope(seg);
        total += s * s * (1.0 / a - 1.0 / b);
    }
    return total;
}
}  // namespace detail

// Evaluates delta*(x) = delta(x)^2/x + x^2 int_x^1 (delta'(u)/u)^2 du on a
// refined knot grid. The formula is applied as stated; lsl_consistency_report
// in reference.hpp cross-checks it against a Monte Carlo estimate of the
// diagonal of the sampled Markov product and flags disagreement (the two are
// known to differ, e.g. at delta = identity). The output is therefore NOT
// validated as a DiagonalSpec.
inline DiagonalSpec delta_star(const DiagonalSpec& delta, std::size_t refine = 256) {
    std::vector<double> ts;
    ts.reserve(refine + delta.knots.size());
    for (std::size_t i = 0; i <= refine; ++i)
        ts.push_back(static_cast<double>(i) / static_cast<double>(refine));
    for (const auto& [t, d] : delta.knots) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    DiagonalSpec out;
    out.knots.reserve(ts.size());
    for (double x : ts) {
        if (x == 0.0) {
            out.knots.emplace_back(0.0, 0.0);
            continue;
        }
        const double dx = delta(x);
        out.knots.emplace_back(x, dx * dx / x + x * x * detail::dstar_tail(delta, x));
    }
    return out;
}

// The analytic product psi(C) as a bivariate spec, when known:
//   Frechet(a,b)        -> Frechet(a^2 + b^2, 2ab)
//   GaussianEqui(rho,d) -> GaussianEqui(d rho^2 / (1 + (d-1) rho), 1)
//   MarshallOlkin(1,b)  -> MarshallOlkin(b,b); min{a,b} = 0 -> Independence
//   Jump(m)             -> Jump(m)
//   Lsl(delta)          -> Lsl(delta*)   [shortcut formula, see delta_star]
// Everything else (Marshall-Olkin with 0 < alpha < 1) is unavailable.
inline std::optional<CopulaSpec> markov_product_spec(const CopulaSpec& spec) {
    validate_spec(spec);
    if (const auto* f = std::get_if<FrechetSpec>(&spec))
        return CopulaSpec{FrechetSpec{f->alpha * f->alpha + f->beta * f->beta,
                                      2.0 * f->alpha * f->beta}};
    if (const auto* g = std::get_if<GaussianEquiSpec>(&spec)) {
        const double dd = static_cast<double>(g->d);
        return CopulaSpec{GaussianEquiSpec{dd * g->rho * g->rho / (1.0 + (dd - 1.0) * g->rho), 1}};
    }
    if (const auto* mo = std::get_if<MarshallOlkinSpec>(&spec)) {
        if (std::min(mo->alpha, mo->beta) == 0.0) return CopulaSpec{IndependenceSpec{}};
        if (mo->alpha == 1.0) return CopulaSpec{MarshallOlkinSpec{mo->beta, mo->beta}};
        return std::nullopt;
    }
    if (const auto* j = std::get_if<JumpSpec>(&spec)) return CopulaSpec{*j};
    if (const auto* l = std::get_if<LslSpec>(&spec)) return CopulaSpec{LslSpec{delta_star(l->diagonal)}};
    if (std::holds_alternative<IndependenceSpec>(spec)) return CopulaSpec{IndependenceSpec{}};
    return CopulaSpec{ComonotoneSpec{}};
}

// ---------------------------------------------------------------------------
// Closed-form bivariate CDFs (test oracles and the LSL consistency report).
// Not available for the Gaussian family.
// ---------------------------------------------------------------------------

inline double bivariate_cdf(const CopulaSpec& spec, double u, double v) {
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    if (const auto* f = std::get_if<FrechetSpec>(&spec))
        return f->alpha * std::min(u, v) + (1.0 - f->alpha - f->beta) * u * v +
               f->beta * std::max(u + v - 1.0, 0.0);
    if (const auto* mo = std::get_if<MarshallOlkinSpec>(&spec)) {
        if (u == 0.0 || v == 0.0) return 0.0;
        return std::min(std::pow(u, 1.0 - mo->alpha) * v, u * std::pow(v, 1.0 - mo->beta));
    }
    if (const auto* j = std::get_if<JumpSpec>(&spec)) {
        if (j->m > 25) throw config_error("bivariate_cdf: jump closed form is O(2^m), m <= 25 only");
        const std::uint64_t shifts = 1ULL << j->m;
        double total = 0.0;
        for (std::uint64_t i = 1; i <= shifts; ++i) {
            const double h = static_cast<double>(i) / static_cast<double>(shifts);
            total += std::max(0.0, std::min(u, v - h)) +
                     std::max(0.0, std::min(u, 1.0 - h + v) - (1.0 - h));
        }
        return total / static_cast<double>(shifts);
    }
    if (const auto* l = std::get_if<LslSpec>(&spec)) {
        if (u == 0.0 || v == 0.0) return 0.0;
        const double lo = std::min(u, v), hi = std::max(u, v);
        return lo * l->diagonal(hi) / hi;
    }
    if (std::holds_alternative<IndependenceSpec>(spec)) return u * v;
    if (std::holds_alternative<ComonotoneSpec>(spec)) return std::min(u, v);
    throw config_error("bivariate_cdf: no closed form for family " + family_name(spec));
}

}  // namespace depfn
