#pragma once

// Empirical doubling ratios sup_{B(2R)} |kappa| / sup_{B(R)} |kappa| over a
// spectral subspace.
//
// The exact sup over the coefficient sphere is a nonconvex problem; the
// estimator below is a seeded, reproducible lower bound: random starts are
// refined by projected-gradient ascent on the smooth surrogate ratio of
// L^{2p} node norms (p = 8), and the reported ratio is the plain sup ratio
// over the evaluation grid at the refined coefficients.  Any fitted envelope
// of these ratios must therefore stay below the true doubling constants.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gfc/group.hpp"
#include "gfc/rng.hpp"
#include "gfc/subspace.hpp"

namespace gfc {

struct DoublingResult {
    double ratio_max = 0.0;
    std::vector<double> trial_ratios;
    int discarded = 0;
};

namespace detail {

inline double sup_on_mask(const Eigen::VectorXcd& values, const std::vector<std::uint8_t>& mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) s = std::max(s, std::abs(values[static_cast<Eigen::Index>(i)]));
    return s;
}

} // namespace detail

inline DoublingResult doubling_ratio(const GroupBackend& backend, const SpectralSubspace& sub,
                                     const GroupPoint& center, double R,
                                     const QuadratureGrid& grid, int trials, int ascent_steps,
                                     Rng& rng) {
    if (R <= 0.0) throw std::invalid_argument("doubling_ratio: R must be positive");
    if (2.0 * R >= backend.diameter())
        throw std::invalid_argument("doubling_ratio: B(center, 2R) must fit inside the group");
    const ObservationSet inner = backend.geodesic_ball(center, R, grid);
    const ObservationSet outer = backend.geodesic_ball(center, 2.0 * R, grid);
    const Eigen::Index n = static_cast<Eigen::Index>(sub.modes.size());
    const int p = 8;

    DoublingResult res;
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXcd a(n);
        for (Eigen::Index j = 0; j < n; ++j) a[j] = cplx(rng.normal(), rng.normal());
        a.normalize();

        double step = 0.1;
        auto surrogate = [&](const Eigen::VectorXcd& coef, Eigen::VectorXcd* grad) {
            Eigen::VectorXcd kappa = sub.samples.transpose() * coef;
            double scale = 0.0;
            for (std::size_t i = 0; i < outer.mask.size(); ++i)
                if (outer.mask[i]) scale = std::max(scale, std::abs(kappa[static_cast<Eigen::Index>(i)]));
            if (scale < 1e-300) return -1.0;
            double n_in = 0.0, n_out = 0.0;
            Eigen::VectorXcd g_in = Eigen::VectorXcd::Zero(n), g_out = Eigen::VectorXcd::Zero(n);
            for (std::size_t i = 0; i < outer.mask.size(); ++i) {
                if (!outer.mask[i]) continue;
                const Eigen::Index ii = static_cast<Eigen::Index>(i);
                const cplx u = kappa[ii] / scale;
                const double pw = std::pow(std::norm(u), p - 1); // |u|^{2p-2}
                const double v = pw * std::norm(u);              // |u|^{2p}
                const double w = grid.weights[i];
                n_out += w * v;
                if (grad) g_out += (w * pw) * u * sub.samples.col(ii).conjugate();
                if (inner.mask[i]) {
                    n_in += w * v;
                    if (grad) g_in += (w * pw) * u * sub.samples.col(ii).conjugate();
                }
            }
            if (n_in <= 0.0) return -1.0;
            if (grad) *grad = 0.5 * (g_out / n_out - g_in / n_in);
            return (1.0 / (2.0 * p)) * (std::log(n_out) - std::log(n_in));
        };

        double value = surrogate(a, nullptr);
        if (value < 0.0) {
            ++res.discarded;
            continue;
        }
        for (int it = 0; it < ascent_steps; ++it) {
            Eigen::VectorXcd grad(n);
            if (surrogate(a, &grad) < 0.0) break;
            Eigen::VectorXcd next = (a + step * grad).normalized();
            const double nv = surrogate(next, nullptr);
            if (nv > value) {
                a = next;
                value = nv;
                step *= 1.2;
            } else {
                step *= 0.5;
                if (step < 1e-8) break;
            }
        }

        Eigen::VectorXcd kappa = sub.samples.transpose() * a;
        const double s_in = detail::sup_on_mask(kappa, inner.mask);
        const double s_out = detail::sup_on_mask(kappa, outer.mask);
        if (s_in < 1e-300) {
            ++res.discarded;
            continue;
        }
        const double ratio = s_out / s_in;
        res.trial_ratios.push_back(ratio);
        res.ratio_max = std::max(res.ratio_max, ratio);
    }
    return res;
}

} // namespace gfc
