#pragma once

// Orthonormal eigenmode bases of a spectral operator, observation Gram
// matrices, and observability constants.
//
// Diagonalising the symbol sigma(xi) = U D U^* per representation yields the
// eigenmodes e(x) = sqrt(d_xi) (xi(x) U)_{i,mu} with frequency lambda =
// D_{mu mu}^{1/m}; Peter-Weyl orthonormality survives the unitary column
// mixing.  The Gram matrix over an observation set is
//
//   M[i][j] = sum over masked nodes of w conj(e_i(x)) e_j(x),
//
// conjugating the first index so that a^* M a = ||sum a_j e_j||^2_{L^2(omega)}
// holds as a quadratic form.  Its smallest eigenvalue quantifies the
// observability of the subspace from the set.
//
// Determinism: eigenvalues ascending; each eigenvector is normalised so its
// largest-magnitude entry is real positive; modes sorted by frequency with
// ties broken by enumeration order, then row, then column.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "gfc/errors.hpp"
#include "gfc/fourier.hpp"
#include "gfc/group.hpp"
#include "gfc/operators.hpp"

namespace gfc {

struct Mode {
    DualIndex dual;
    int row = 0;                // i in e(x) = sqrt(d) (xi(x) U)_{i, mu}
    int col = 0;                // mu, the eigenvector column of sigma(xi)
    Eigen::VectorXcd col_mix;   // that eigenvector
    double freq = 0.0;          // lambda_j >= 0 with eigenvalue lambda_j^m
    double eigenvalue = 0.0;    // lambda_j^m, the symbol eigenvalue itself
    double laplace_eig = 0.0;   // Laplacian eigenvalue of the host representation
};

struct SpectralSubspace {
    std::vector<Mode> modes;
    double lambda_cut = 0.0;
    double order = 1.0;
    // samples(j, n) = e_j at grid node n, cached for the grid the subspace
    // was built on
    Eigen::MatrixXcd samples;

    std::size_t size() const { return modes.size(); }
};

namespace detail {

inline void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > best + 1e-15) {
            best = std::abs(v[i]);
            imax = i;
        }
    const cplx ph = v[imax] / std::abs(v[imax]);
    v /= ph;
}

} // namespace detail

inline Eigen::VectorXcd evaluate_mode(const GroupBackend& backend, const Mode& mode,
                                      const QuadratureGrid& grid) {
    Eigen::VectorXcd out(grid.nodes.size());
    const double scale = std::sqrt(double(mode.dual.dim));
    for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
        Eigen::MatrixXcd xi = backend.rep_matrix(mode.dual, grid.nodes[n]);
        out[static_cast<Eigen::Index>(n)] = scale * (xi.row(mode.row) * mode.col_mix)(0);
    }
    return out;
}

// All eigenmodes with frequency lambda_j <= lambda_cut.  The enumeration is
// audited against the ellipticity lower bound: every representation that
// could host such a frequency must lie inside the operator's dual list and
// within the grid's exactness limit.
inline SpectralSubspace build_subspace(const SpectralOperator& op, double lambda_cut,
                                       const GroupBackend& backend, const QuadratureGrid& grid) {
    if (lambda_cut < 0.0) throw std::invalid_argument("build_subspace: lambda_cut must be >= 0");
    // completeness audit: with C1 <xi>^m <= s_min(sigma) over the nonzero
    // part of the symbol, no representation with bracket beyond
    // (lambda_cut^m / C1)^{1/m} can host a frequency <= lambda_cut
    double c1_pos = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < op.duals.size(); ++i) {
        const double smin = detail::min_sym_eig(op.symbol[i]);
        if (smin > 0.0) c1_pos = std::min(c1_pos, smin / std::pow(op.duals[i].bracket, op.order));
    }
    if (std::isfinite(c1_pos) && c1_pos > 0.0 && lambda_cut > 0.0) {
        const double bracket_needed = std::pow(std::pow(lambda_cut, op.order) / c1_pos, 1.0 / op.order);
        auto wider = backend.enumerate_dual(std::max(1.0, bracket_needed));
        if (wider.size() > op.duals.size())
            throw BandlimitError("build_subspace: operator dual list cannot certify completeness "
                                 "up to the requested cut");
    }
    for (const auto& d : op.duals)
        if (!backend.dual_within_band(d, grid))
            throw BandlimitError("build_subspace: enumeration exceeds the grid band limit");

    SpectralSubspace sub;
    sub.lambda_cut = lambda_cut;
    sub.order = op.order;
    for (std::size_t i = 0; i < op.duals.size(); ++i) {
        const auto& d = op.duals[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.symbol[i]);
        for (int mu = 0; mu < d.dim; ++mu) {
            const double eig = es.eigenvalues()[mu];
            if (eig < -1e-12) throw NumericalError("build_subspace: negative symbol eigenvalue");
            const double freq = std::pow(std::max(0.0, eig), 1.0 / op.order);
            if (freq > lambda_cut) continue;
            Eigen::VectorXcd v = es.eigenvectors().col(mu);
            detail::fix_phase(v);
            for (int row = 0; row < d.dim; ++row) {
                Mode m;
                m.dual = d;
                m.row = row;
                m.col = mu;
                m.col_mix = v;
                m.freq = freq;
                m.eigenvalue = std::max(0.0, eig);
                m.laplace_eig = d.laplace_eig;
                sub.modes.push_back(std::move(m));
            }
        }
    }
    std::stable_sort(sub.modes.begin(), sub.modes.end(), [](const Mode& a, const Mode& b) {
        return a.freq < b.freq;
    });
    sub.samples.resize(static_cast<Eigen::Index>(sub.modes.size()),
                       static_cast<Eigen::Index>(grid.nodes.size()));
    for (std::size_t j = 0; j < sub.modes.size(); ++j)
        sub.samples.row(static_cast<Eigen::Index>(j)) =
            evaluate_mode(backend, sub.modes[j], grid).transpose();
    return sub;
}

// Hand-assembled subspace from explicit (dual, row, col) picks; used for
// fixtures whose mode set is not a plain frequency cut.
inline SpectralSubspace subspace_from_modes(const SpectralOperator& op,
                                            const std::vector<std::array<int, 3>>& picks,
                                            const GroupBackend& backend,
                                            const QuadratureGrid& grid) {
    SpectralSubspace sub;
    sub.order = op.order;
    for (const auto& pick : picks) {
        const std::size_t di = static_cast<std::size_t>(pick[0]);
        if (di >= op.duals.size()) throw std::invalid_argument("subspace_from_modes: dual index");
        const auto& d = op.duals[di];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.symbol[di]);
        Mode m;
        m.dual = d;
        m.row = pick[1];
        m.col = pick[2];
        Eigen::VectorXcd v = es.eigenvectors().col(pick[2]);
        detail::fix_phase(v);
        m.col_mix = v;
        m.eigenvalue = std::max(0.0, es.eigenvalues()[pick[2]]);
        m.freq = std::pow(m.eigenvalue, 1.0 / op.order);
        m.laplace_eig = d.laplace_eig;
        sub.lambda_cut = std::max(sub.lambda_cut, m.freq);
        sub.modes.push_back(std::move(m));
    }
    sub.samples.resize(static_cast<Eigen::Index>(sub.modes.size()),
                       static_cast<Eigen::Index>(grid.nodes.size()));
    for (std::size_t j = 0; j < sub.modes.size(); ++j)
        sub.samples.row(static_cast<Eigen::Index>(j)) =
            evaluate_mode(backend, sub.modes[j], grid).transpose();
    return sub;
}

inline Eigen::VectorXcd synthesize(const SpectralSubspace& sub, const Eigen::VectorXcd& a) {
    if (a.size() != static_cast<Eigen::Index>(sub.modes.size()))
        throw std::invalid_argument("synthesize: coefficient/mode count mismatch");
    return sub.samples.transpose() * a;
}

struct GramMatrix {
    Eigen::MatrixXcd matrix;
    double omega_measure = 0.0;
    bool degenerate = false; // empty observation set
};

inline GramMatrix gram_on_set(const SpectralSubspace& sub, const ObservationSet& omega,
                              const QuadratureGrid& grid) {
    if (omega.mask.size() != grid.nodes.size())
        throw std::invalid_argument("gram_on_set: mask/grid mismatch");
    const Eigen::Index n = static_cast<Eigen::Index>(sub.modes.size());
    GramMatrix g;
    g.omega_measure = omega.measure;
    g.matrix = Eigen::MatrixXcd::Zero(n, n);
    bool any = false;
    for (std::size_t node = 0; node < grid.nodes.size(); ++node) {
        if (!omega.mask[node]) continue;
        any = true;
        const auto col = sub.samples.col(static_cast<Eigen::Index>(node));
        g.matrix.noalias() += grid.weights[node] * (col.conjugate() * col.transpose());
    }
    g.degenerate = !any;
    // enforce exact Hermitian symmetry of the accumulated sum
    g.matrix = 0.5 * (g.matrix + g.matrix.adjoint()).eval();
    return g;
}

// Exact Gram of torus character modes over a disjoint union of coordinate
// boxes, by the closed-form arc integrals
//   int_lo^hi e^{2 pi i d x} dx = (e^{2 pi i d hi} - e^{2 pi i d lo})/(2 pi i d).
// This is the analytic oracle the masked-node Gram is checked against.
inline GramMatrix gram_on_arcs_exact(const SpectralSubspace& sub,
                                     const std::vector<std::array<double, 4>>& boxes,
                                     const GroupBackend& backend) {
    const int dim = backend.torus_dim();
    if (dim == 0)
        throw std::invalid_argument("gram_on_arcs_exact: torus backends only");
    const Eigen::Index n = static_cast<Eigen::Index>(sub.modes.size());
    GramMatrix g;
    g.matrix = Eigen::MatrixXcd::Zero(n, n);
    auto arc = [](int d, double lo, double hi) -> cplx {
        if (d == 0) return cplx(hi - lo, 0.0);
        const cplx tp(0.0, 2.0 * M_PI * d);
        return (std::exp(tp * hi) - std::exp(tp * lo)) / tp;
    };
    double measure = 0.0;
    for (const auto& b : boxes) {
        measure += (b[1] - b[0]) * (dim == 2 ? (b[3] - b[2]) : 1.0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                cplx v = arc(sub.modes[j].dual.label[0] - sub.modes[i].dual.label[0], b[0], b[1]);
                if (dim == 2)
                    v *= arc(sub.modes[j].dual.label[1] - sub.modes[i].dual.label[1], b[2], b[3]);
                g.matrix(i, j) += v;
            }
    }
    g.omega_measure = measure;
    g.degenerate = (measure == 0.0);
    return g;
}

struct ObservabilityResult {
    double lam_min = 0.0;
    Eigen::VectorXcd kappa_worst;
    bool degenerate = false;
};

inline ObservabilityResult observability_from_gram(const GramMatrix& g) {
    ObservabilityResult r;
    if (g.degenerate) {
        r.degenerate = true;
        r.kappa_worst = Eigen::VectorXcd::Zero(g.matrix.rows());
        return r;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.matrix);
    r.lam_min = es.eigenvalues()[0];
    Eigen::VectorXcd v = es.eigenvectors().col(0);
    detail::fix_phase(v);
    r.kappa_worst = v;
    return r;
}

inline ObservabilityResult observability_constant(const SpectralSubspace& sub,
                                                  const ObservationSet& omega,
                                                  const QuadratureGrid& grid) {
    return observability_from_gram(gram_on_set(sub, omega, grid));
}

} // namespace gfc
