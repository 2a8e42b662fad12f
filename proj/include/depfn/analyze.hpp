#pragma once

#include <span>

#include "depfn/core.hpp"
#include "depfn/estimator.hpp"
#include "depfn/ranks.hpp"

namespace depfn {

// Full pipeline output for one dataset: xi_hat, the near-zero diagnostic
// phi_hat(b_n) with b_n = 1/n, and both curves on the evaluation grid.
struct AnalysisReport {
    std::size_t n = 0;
    std::size_t d = 0;
    TieRule tie_rule;
    double b_n = 0.0;
    double phi_at_bn = 0.0;
    double xi = 0.0;
    DependenceCurve phi;
    DependenceCurve kappa;
};

inline AnalysisReport analyze(const Dataset& data, TieRule rule = TieRule::by_index(),
                              std::span<const double> grid = {},
                              NnAlgorithm algo = NnAlgorithm::Auto) {
    data.validate();
    std::vector<double> default_grid;
    if (grid.empty()) {
        default_grid = uniform_grid(101);
        grid = default_grid;
    }
    const NormalizedGaps gaps = normalized_gaps(make_rank_pairs(data, rule, algo));
    AnalysisReport rep;
    rep.n = data.n();
    rep.d = data.d;
    rep.tie_rule = rule;
    rep.b_n = near_zero_threshold(data.n());
    rep.phi_at_bn = phi_hat(gaps, rep.b_n);
    rep.xi = xi_hat(gaps);
    rep.phi = phi_curve(gaps, grid);
    rep.kappa = kappa_curve(gaps, grid);
    return rep;
}

}  // namespace depfn
