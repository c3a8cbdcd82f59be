#pragma once

// Affine upper envelopes y <= b + s x fitted to point clouds.
//
// The fit is the one-sided Chebyshev line: among all lines lying on or above
// every point, minimise the maximum vertical slack; ties are broken by the
// smaller slope, then the smaller intercept.  The optimal slope is attained
// at a pairwise data slope (or zero), so candidates are enumerated exactly.
// At the optimum the line touches at least two points unless the data is a
// single point or exactly collinear from above.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfc/errors.hpp"

namespace gfc {

struct AffineEnvelope {
    double intercept = 0.0;
    double slope = 0.0;
    double max_slack = 0.0;
    std::vector<double> residuals; // envelope(x_i) - y_i >= 0
};

inline AffineEnvelope affine_upper_envelope(const std::vector<double>& xs,
                                            const std::vector<double>& ys,
                                            bool nonnegative_slope = true) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("affine_upper_envelope: bad input sizes");
    const std::size_t n = xs.size();
    std::vector<double> cand;
    cand.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (xs[i] != xs[j]) cand.push_back((ys[j] - ys[i]) / (xs[j] - xs[i]));
    if (nonnegative_slope)
        cand.erase(std::remove_if(cand.begin(), cand.end(), [](double s) { return s < 0.0; }),
                   cand.end());
    std::sort(cand.begin(), cand.end());

    AffineEnvelope best;
    double best_d = std::numeric_limits<double>::infinity();
    for (double s : cand) {
        double b = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) b = std::max(b, ys[i] - s * xs[i]);
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d = std::max(d, b + s * xs[i] - ys[i]);
        if (d < best_d - 1e-15 ||
            (d <= best_d + 1e-15 && (s < best.slope || (s == best.slope && b < best.intercept)))) {
            best_d = d;
            best.slope = s;
            best.intercept = b;
        }
    }
    best.max_slack = best_d;
    best.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        best.residuals[i] = best.intercept + best.slope * xs[i] - ys[i];
    return best;
}

// Exponential spectral-constant fit: envelope of y = log(lam_min^{-1/2})
// against lambda, reported as lam_min^{-1/2} <= C1 exp(C2 lambda).
struct ExpFit {
    double C1 = 1.0;
    double C2 = 0.0;
    std::vector<double> lambda_grid;
    std::vector<double> residuals;
};

inline ExpFit fit_spectral_constants(const std::vector<double>& lambda_grid,
                                     const std::vector<double>& lam_min) {
    if (lambda_grid.size() != lam_min.size() || lambda_grid.empty())
        throw std::invalid_argument("fit_spectral_constants: bad input sizes");
    std::vector<double> ys(lam_min.size());
    for (std::size_t i = 0; i < lam_min.size(); ++i) {
        if (!(lam_min[i] > 0.0))
            throw NumericalError("fit_spectral_constants: lam_min <= 0 at lambda = " +
                                 std::to_string(lambda_grid[i]));
        ys[i] = -0.5 * std::log(lam_min[i]);
    }
    AffineEnvelope env = affine_upper_envelope(lambda_grid, ys);
    ExpFit fit;
    fit.C1 = std::exp(env.intercept);
    fit.C2 = env.slope;
    fit.lambda_grid = lambda_grid;
    fit.residuals = env.residuals;
    return fit;
}

} // namespace gfc
