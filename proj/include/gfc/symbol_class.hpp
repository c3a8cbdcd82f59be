#pragma once

// Numerical (rho,delta) symbol-class estimation for symbols a(x,k) on the
// circle times the integer lattice.
//
// For each order pair (alpha, beta) up to max_order the checker estimates
//
//   C_{alpha,beta} = max over the grid of
//       <k>^{-m + rho alpha - delta beta} |Delta_k^alpha d_x^beta a(x,k)|
//
// with forward differences Delta_k a(x,k) = a(x,k+1) - a(x,k) and 4th-order
// central differences in x on a uniform periodic grid.  The frequency weight
// is the Japanese bracket <k> = (1 + 4 pi^2 k^2)^{1/2} of the torus
// Laplacian, so the multiplier <k>^m itself reports C_{0,0} = 1.  If the
// running maximum still grows by more than 1% when the lattice truncation
// doubles, the entry is flagged divergent instead of raising.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "gfc/errors.hpp"

namespace gfc {

using TorusSymbol = std::function<std::complex<double>(double, long)>;

struct SymbolClassReport {
    int max_order = 0;
    double m = 0.0, rho = 1.0, delta = 0.0;
    // constants[alpha][beta], alpha/beta in [0, max_order]
    std::vector<std::vector<double>> constants;
    std::vector<std::vector<bool>> divergent;
};

namespace detail {

// iterated forward difference in k at fixed x
inline std::complex<double> delta_k(const TorusSymbol& a, double x, long k, int order) {
    std::vector<std::complex<double>> v(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i <= order; ++i) v[static_cast<std::size_t>(i)] = a(x, k + i);
    for (int lvl = 0; lvl < order; ++lvl)
        for (int i = 0; i < order - lvl; ++i)
            v[static_cast<std::size_t>(i)] =
                v[static_cast<std::size_t>(i) + 1] - v[static_cast<std::size_t>(i)];
    return v[0];
}

// central x-derivative of order beta <= 3 on a periodic grid, 4th-order stencils
inline std::complex<double> dx_beta(const std::vector<std::complex<double>>& row, std::size_t i,
                                    double h, int beta) {
    const long n = static_cast<long>(row.size());
    auto at = [&](long off) {
        long idx = (static_cast<long>(i) + off) % n;
        if (idx < 0) idx += n;
        return row[static_cast<std::size_t>(idx)];
    };
    switch (beta) {
        case 0: return at(0);
        case 1: return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
        case 2: return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
        case 3:
            return (-at(3) + 8.0 * at(2) - 13.0 * at(1) + 13.0 * at(-1) - 8.0 * at(-2) + at(-3)) /
                   (8.0 * h * h * h);
        default: throw std::invalid_argument("dx_beta: order > 3 unsupported");
    }
}

} // namespace detail

inline SymbolClassReport check_symbol_class(const TorusSymbol& a, double m, double rho,
                                            double delta, int max_order,
                                            long k_truncation = 256, int x_grid = 256) {
    if (max_order < 0 || max_order > 3)
        throw std::invalid_argument("check_symbol_class: max_order must lie in [0,3]");
    if (rho < 0.0 || rho > 1.0 || delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("check_symbol_class: rho, delta must lie in [0,1]");
    SymbolClassReport rep;
    rep.max_order = max_order;
    rep.m = m;
    rep.rho = rho;
    rep.delta = delta;
    const auto sz = static_cast<std::size_t>(max_order) + 1;
    rep.constants.assign(sz, std::vector<double>(sz, 0.0));
    rep.divergent.assign(sz, std::vector<bool>(sz, false));

    const double h = 1.0 / x_grid;
    auto run = [&](long K, int alpha, int beta) {
        double best = 0.0;
        for (long k = -K; k <= K; ++k) {
            std::vector<std::complex<double>> row(static_cast<std::size_t>(x_grid));
            for (int ix = 0; ix < x_grid; ++ix)
                row[static_cast<std::size_t>(ix)] = detail::delta_k(a, ix * h, k, alpha);
            const double w = std::pow(1.0 + 4.0 * M_PI * M_PI * double(k) * double(k),
                                      0.5 * (-m + rho * alpha - delta * beta));
            for (int ix = 0; ix < x_grid; ++ix)
                best = std::max(best,
                                w * std::abs(detail::dx_beta(row, static_cast<std::size_t>(ix), h, beta)));
        }
        return best;
    };

    for (int alpha = 0; alpha <= max_order; ++alpha)
        for (int beta = 0; beta <= max_order; ++beta) {
            const double cK = run(k_truncation, alpha, beta);
            const double c2K = run(2 * k_truncation, alpha, beta);
            rep.constants[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta)] = c2K;
            rep.divergent[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta)] =
                (c2K > cK * 1.01 + 1e-300);
        }
    return rep;
}

} // namespace gfc
