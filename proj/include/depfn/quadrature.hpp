#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "depfn/core.hpp"

namespace depfn {

// Globally adaptive Gauss-Kronrod 7-15 integration. Panels are split worst
// error first until the summed error estimate drops below abs_tol; exceeding
// max_panels raises numeric_error with diagnostics.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10, std::size_t max_panels = 2000) {
    // QUADPACK dqk15 nodes/weights on [-1, 1]
    static const double xgk[8] = {0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
                                  0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
                                  0.2077849550078985, 0.0};
    static const double wgk[8] = {0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
                                  0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
                                  0.2044329400752989, 0.2094821410847278};
    static const double wg[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                                 0.4179591836734694};

    struct Panel {
        double a, b, value, err;
    };

    auto eval = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        const double fc = f(mid);
        double result_g = wg[3] * fc;
        double result_k = wgk[7] * fc;
        for (int j = 0; j < 7; ++j) {
            const double dx = half * xgk[j];
            const double fsum = f(mid - dx) + f(mid + dx);
            result_k += wgk[j] * fsum;
            if (j % 2 == 1) result_g += wg[j / 2] * fsum;
        }
        return Panel{lo, hi, result_k * half, std::abs(result_k - result_g) * half};
    };

    if (a == b) return 0.0;
    std::vector<Panel> panels{eval(a, b)};
    while (true) {
        double total_err = 0.0, total_val = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_err += panels[i].err;
            total_val += panels[i].value;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (total_err <= abs_tol) return total_val;
        if (panels.size() >= max_panels)
            throw numeric_error("integrate: no convergence after " + std::to_string(panels.size()) +
                                " panels on [" + std::to_string(a) + ", " + std::to_string(b) +
                                "], error estimate " + std::to_string(total_err) + " > tol " +
                                std::to_string(abs_tol));
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b)
            throw numeric_error("integrate: panel underflow at x = " + std::to_string(p.a));
        panels[worst] = eval(p.a, mid);
        panels.push_back(eval(mid, p.b));
    }
}

}  // namespace depfn
