#pragma once

// Group Fourier transform pair and the l^2(dual) norm.
//
//   fhat(xi)  = sum_nodes w f(x) xi(x)^*          (matrix valued)
//   f(x)      = sum_xi d_xi tr[xi(x) fhat(xi)]
//   ||fhat||^2 = sum_xi d_xi ||fhat(xi)||_HS^2     (Parseval partner of L^2)
//
// Transforms refuse to run past the grid's documented exactness limit.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gfc/errors.hpp"
#include "gfc/group.hpp"

namespace gfc {

struct FourierCoefficients {
    std::vector<DualIndex> duals;
    std::vector<Eigen::MatrixXcd> entries;

    double l2_norm_sq() const {
        double s = 0.0;
        for (std::size_t i = 0; i < duals.size(); ++i)
            s += duals[i].dim * entries[i].squaredNorm();
        return s;
    }
    double l2_norm() const { return std::sqrt(l2_norm_sq()); }

    const Eigen::MatrixXcd* find(const DualIndex& d) const {
        for (std::size_t i = 0; i < duals.size(); ++i)
            if (same_label(duals[i], d)) return &entries[i];
        return nullptr;
    }
};

inline void require_within_band(const GroupBackend& backend, const QuadratureGrid& grid,
                                const std::vector<DualIndex>& duals) {
    for (const auto& d : duals)
        if (!backend.dual_within_band(d, grid))
            throw BandlimitError("dual " + backend.label_string(d) +
                                 " exceeds the exactness limit of the resolution-" +
                                 std::to_string(grid.resolution) + " grid");
}

inline FourierCoefficients fourier_transform(const GroupBackend& backend,
                                             const QuadratureGrid& grid,
                                             const Eigen::VectorXcd& samples,
                                             const std::vector<DualIndex>& duals) {
    if (static_cast<std::size_t>(samples.size()) != grid.nodes.size())
        throw std::invalid_argument("fourier_transform: samples/grid size mismatch");
    require_within_band(backend, grid, duals);
    FourierCoefficients out;
    out.duals = duals;
    out.entries.reserve(duals.size());
    for (const auto& d : duals) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d.dim, d.dim);
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            acc.noalias() += (grid.weights[i] * samples[static_cast<Eigen::Index>(i)]) *
                             backend.rep_matrix(d, grid.nodes[i]).adjoint();
        }
        out.entries.push_back(std::move(acc));
    }
    return out;
}

inline cplx inverse_fourier(const GroupBackend& backend, const FourierCoefficients& coeffs,
                            const GroupPoint& x) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < coeffs.duals.size(); ++i) {
        const auto& d = coeffs.duals[i];
        s += double(d.dim) * (backend.rep_matrix(d, x) * coeffs.entries[i]).trace();
    }
    return s;
}

inline Eigen::VectorXcd synthesize_on_grid(const GroupBackend& backend,
                                           const FourierCoefficients& coeffs,
                                           const QuadratureGrid& grid) {
    Eigen::VectorXcd out(grid.nodes.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = inverse_fourier(backend, coeffs, grid.nodes[i]);
    return out;
}

inline double l2_norm_sq_on_grid(const QuadratureGrid& grid, const Eigen::VectorXcd& samples) {
    CompensatedSum s;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
        s.add(grid.weights[i] * std::norm(samples[static_cast<Eigen::Index>(i)]));
    return s.value();
}

} // namespace gfc
