#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <span>
#include <vector>

#include "depfn/copulas.hpp"
#include "depfn/estimator.hpp"
#include "depfn/ranks.hpp"
#include "depfn/reference.hpp"
#include "depfn/rng.hpp"

namespace depfn {

// max_{t in G} |estimated(t) - reference(t)|; the two curves must share the
// exact same grid.
inline double grid_deviation(const DependenceCurve& estimated, const DependenceCurve& reference) {
    if (estimated.grid.size() != reference.grid.size())
        throw input_error("grid_deviation: grids differ in size");
    for (std::size_t i = 0; i < estimated.grid.size(); ++i)
        if (estimated.grid[i] != reference.grid[i])
            throw input_error("grid_deviation: grids differ at index " + std::to_string(i));
    double dev = 0.0;
    for (std::size_t i = 0; i < estimated.values.size(); ++i)
        dev = std::max(dev, std::abs(estimated.values[i] - reference.values[i]));
    return dev;
}

struct StudySummary {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Quartiles by linear interpolation between order statistics (h = p*(m-1)).
inline double quantile_linear(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw input_error("quantile: empty sample");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline StudySummary summarize(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return {values.front(), quantile_linear(values, 0.25), quantile_linear(values, 0.5),
            quantile_linear(values, 0.75), values.back()};
}

struct StudyConfig {
    CopulaSpec spec = IndependenceSpec{};
    std::vector<std::size_t> sample_sizes;
    std::size_t repetitions = 500;
    std::vector<double> grid = uniform_grid(101);
    std::uint64_t master_seed = 1;
    std::vector<CurveKind> kinds = {CurveKind::Phi, CurveKind::Kappa};
    TieRule tie_rule = TieRule::by_index();
    std::size_t reference_mc_samples = 0;  // 0: 10x the largest sample size
    std::size_t threads = 1;

    void validate() const {
        validate_spec(spec);
        if (sample_sizes.empty()) throw config_error("study: no sample sizes");
        for (std::size_t n : sample_sizes)
            if (n < 2) throw config_error("study: sample sizes must be >= 2");
        if (repetitions < 1) throw config_error("study: repetitions must be >= 1");
        if (kinds.empty()) throw config_error("study: no curve kinds selected");
        try {
            require_valid_grid(grid);
        } catch (const input_error& e) {
            throw config_error(std::string("study: ") + e.what());
        }
    }
};

struct StudyCell {
    CurveKind kind = CurveKind::Phi;
    std::size_t n = 0;
    std::vector<double> deviations;  // indexed by repetition
    StudySummary summary;
};

struct StudyResult {
    std::vector<StudyCell> cells;  // ordered kinds x sample_sizes per config
};

namespace detail {
// stream keys >= 2^40 so they cannot collide with cell keys (n, r)
constexpr std::uint64_t kReferenceStream = 0x52454600000ULL;
constexpr std::uint64_t kTieStream = 0x7165200000ULL;
}  // namespace detail

// The convergence study: for every (n, repetition) draw a joint sample with a
// seed derived from (master_seed, n, r), estimate the curves on the grid, and
// record the grid deviation from the per-kind reference. Deterministic for a
// fixed config regardless of thread count; cell results do not depend on
// which other cells are present.
inline StudyResult run_study(const StudyConfig& config) {
    config.validate();

    const std::size_t max_n = *std::max_element(config.sample_sizes.begin(), config.sample_sizes.end());
    std::vector<DependenceCurve> refs;
    refs.reserve(config.kinds.size());
    for (std::size_t k = 0; k < config.kinds.size(); ++k) {
        ReferenceOptions opts;
        opts.mc_samples =
            config.reference_mc_samples > 0 ? config.reference_mc_samples : 10 * max_n;
        opts.mc_seed = derive_seed(config.master_seed, detail::kReferenceStream + k);
        refs.push_back(reference_curve(config.spec, config.kinds[k], config.grid, opts));
    }

    const std::size_t sizes = config.sample_sizes.size();
    const std::size_t reps = config.repetitions;
    // deviations[kind][size * reps + rep]
    std::vector<std::vector<double>> dev(config.kinds.size(), std::vector<double>(sizes * reps, 0.0));

    auto run_cell = [&](std::size_t size_idx, std::size_t rep) {
        const std::size_t n = config.sample_sizes[size_idx];
        const std::uint64_t seed = derive_seed(config.master_seed, n, rep);
        const Dataset data = sample_joint(config.spec, n, seed);
        TieRule rule = config.tie_rule;
        if (rule.kind == TieRule::Kind::Random) rule.seed = derive_seed(seed, detail::kTieStream);
        const NormalizedGaps gaps = normalized_gaps(make_rank_pairs(data, rule));
        for (std::size_t k = 0; k < config.kinds.size(); ++k) {
            const DependenceCurve est = config.kinds[k] == CurveKind::Phi
                                            ? phi_curve(gaps, config.grid)
                                            : kappa_curve(gaps, config.grid);
            dev[k][size_idx * reps + rep] = grid_deviation(est, refs[k]);
        }
    };

    const std::size_t total = sizes * reps;
    const std::size_t threads = std::max<std::size_t>(1, config.threads);
    if (threads == 1) {
        for (std::size_t c = 0; c < total; ++c) run_cell(c / reps, c % reps);
    } else {
        std::vector<std::future<void>> workers;
        workers.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            workers.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t c = w; c < total; c += threads) run_cell(c / reps, c % reps);
            }));
        }
        for (auto& f : workers) f.get();
    }

    StudyResult result;
    result.cells.reserve(config.kinds.size() * sizes);
    for (std::size_t k = 0; k < config.kinds.size(); ++k) {
        for (std::size_t s = 0; s < sizes; ++s) {
            StudyCell cell;
            cell.kind = config.kinds[k];
            cell.n = config.sample_sizes[s];
            cell.deviations.assign(dev[k].begin() + s * reps, dev[k].begin() + (s + 1) * reps);
            cell.summary = summarize(cell.deviations);
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

}  // namespace depfn
