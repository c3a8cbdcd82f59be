#pragma once

// Null-control synthesis for u_t + A^alpha u = 1_omega g on a truncated
// spectral system.
//
// With modes e_j, decay rates mu_j = (lambda_j^m)^alpha and the observation
// Gram M over omega, the HUM Gramian is
//
//   G[i][j] = M[i][j] (1 - e^{-T(mu_i+mu_j)}) / (mu_i + mu_j)
//
// (the 0/0 entry is M[i][j] T).  Solving G phi = -e^{-T mu} u0 gives the
// minimal-norm control g(t,x) = 1_omega(x) sum_j e^{-(T-t) mu_j} phi_j e_j(x)
// with cost^2 = phi^* G phi; the terminal state is re-simulated through an
// independent Gauss-Legendre Duhamel quadrature.  The observability constant
// C_T is the square root of the largest eigenvalue of the pencil
// (e^{-2T mu}, G) and equals the worst-case control cost by duality.
//
// Everything is certified on the truncated mode set only; residuals on
// modes above a stage cutoff are simulated with the full coupling and
// reported, never hidden.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfc/envelope.hpp"
#include "gfc/errors.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/subspace.hpp"

namespace gfc {

struct ControlProblem {
    double alpha = 1.0;
    double order_m = 2.0;
    double T = 1.0;
    Eigen::VectorXcd u0;
    Eigen::VectorXd mu;       // per-mode decay rates (lambda_j^m)^alpha, nondecreasing
    bool subcritical = false; // alpha m <= 1: the sharp-regime flag, not an error
    double tol = 1e-8;
    double regularization = 0.0; // Tikhonov factor sigma: shift sigma tr(G)/N
};

inline ControlProblem make_control_problem(const SpectralSubspace& sub, double alpha, double T,
                                           const Eigen::VectorXcd& u0) {
    if (T <= 0.0) throw std::invalid_argument("make_control_problem: T must be positive");
    if (u0.size() != static_cast<Eigen::Index>(sub.modes.size()))
        throw std::invalid_argument("make_control_problem: u0/mode count mismatch");
    ControlProblem p;
    p.alpha = alpha;
    p.order_m = sub.order;
    p.T = T;
    p.u0 = u0;
    p.mu.resize(static_cast<Eigen::Index>(sub.modes.size()));
    for (std::size_t j = 0; j < sub.modes.size(); ++j)
        p.mu[static_cast<Eigen::Index>(j)] = std::pow(sub.modes[j].eigenvalue, alpha);
    p.subcritical = (alpha * sub.order <= 1.0);
    return p;
}

inline Eigen::VectorXcd heat_propagate(const Eigen::VectorXcd& coeffs, double t,
                                       const Eigen::VectorXd& mu) {
    if (t < 0.0) throw std::invalid_argument("heat_propagate: t must be >= 0");
    Eigen::VectorXcd out = coeffs;
    for (Eigen::Index j = 0; j < out.size(); ++j) out[j] *= std::exp(-t * mu[j]);
    return out;
}

namespace detail {

inline double decay_pair_weight(double s, double T) {
    if (s == 0.0) return T;
    return (1.0 - std::exp(-T * s)) / s;
}

} // namespace detail

inline Eigen::MatrixXcd control_gramian(const Eigen::MatrixXcd& gram, const Eigen::VectorXd& mu,
                                        double T) {
    if (T <= 0.0) throw std::invalid_argument("control_gramian: T must be positive");
    Eigen::MatrixXcd g = gram;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            g(i, j) *= detail::decay_pair_weight(mu[i] + mu[j], T);
    return g;
}

// Independent 128-node Gauss-Legendre route for the same matrix, used as a
// cross-validation oracle.
inline Eigen::MatrixXcd control_gramian_by_quadrature(const Eigen::MatrixXcd& gram,
                                                      const Eigen::VectorXd& mu, double T,
                                                      int n_nodes = 128) {
    Quad1D q = gauss_legendre(n_nodes, 0.0, T);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(gram.rows(), gram.cols());
    for (int k = 0; k < n_nodes; ++k) {
        const double s = q.nodes[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                g(i, j) += q.weights[static_cast<std::size_t>(k)] * gram(i, j) *
                           std::exp(-s * (mu[i] + mu[j]));
    }
    return g;
}

struct ControlResult {
    Eigen::VectorXcd phi;          // adjoint final datum, G phi = -e^{-T mu} u0
    double cost = 0.0;             // ||g||_{L^2((0,T) x omega)} = sqrt(phi^* G phi)
    double terminal_residual = 0.0;
    double gram_condition = 0.0;
    bool regularized = false;
    Eigen::VectorXcd terminal_coeffs;
};

// g coefficient vector at time t (before the spatial mask): e^{-(T-t)mu} phi
inline Eigen::VectorXcd control_coefficients_at(const ControlResult& r,
                                                const Eigen::VectorXd& mu, double T, double t) {
    Eigen::VectorXcd out = r.phi;
    for (Eigen::Index j = 0; j < out.size(); ++j) out[j] *= std::exp(-(T - t) * mu[j]);
    return out;
}

inline ControlResult hum_control(const GramMatrix& gram, const ControlProblem& p,
                                 int time_nodes = 128) {
    const Eigen::Index n = gram.matrix.rows();
    Eigen::MatrixXcd G = control_gramian(gram.matrix, p.mu, p.T);
    ControlResult r;
    if (p.regularization > 0.0) {
        G += (p.regularization * G.trace().real() / double(n)) *
             Eigen::MatrixXcd::Identity(n, n);
        r.regularized = true;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues().minCoeff(), emax = es.eigenvalues().maxCoeff();
    r.gram_condition = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    if (!(emin > 0.0) || r.gram_condition > 1e14)
        throw NumericalError("hum_control: Gramian condition " + std::to_string(r.gram_condition) +
                             " beyond 1e14; use a smaller subspace or a larger horizon");

    Eigen::VectorXcd rhs = -heat_propagate(p.u0, p.T, p.mu);
    r.phi = G.ldlt().solve(rhs); // Hermitian LDLT (Bunch-Kaufman style pivoting)
    r.cost = std::sqrt(std::max(0.0, (r.phi.adjoint() * G * r.phi)(0, 0).real()));

    // independent terminal simulation: Duhamel with Gauss-Legendre in time
    Quad1D q = gauss_legendre(time_nodes, 0.0, p.T);
    Eigen::VectorXcd uT = heat_propagate(p.u0, p.T, p.mu);
    for (int k = 0; k < time_nodes; ++k) {
        const double s = q.nodes[static_cast<std::size_t>(k)];
        Eigen::VectorXcd gs = r.phi;
        for (Eigen::Index j = 0; j < n; ++j) gs[j] *= std::exp(-(p.T - s) * p.mu[j]);
        Eigen::VectorXcd forced = gram.matrix * gs;
        for (Eigen::Index j = 0; j < n; ++j)
            uT[j] += q.weights[static_cast<std::size_t>(k)] * std::exp(-(p.T - s) * p.mu[j]) * forced[j];
    }
    r.terminal_coeffs = uT;
    const double u0n = p.u0.norm();
    r.terminal_residual = u0n > 0.0 ? uT.norm() / u0n : 0.0;
    if (r.terminal_residual > p.tol && !r.regularized)
        throw NumericalError("hum_control: terminal residual " + std::to_string(r.terminal_residual) +
                             " above tolerance " + std::to_string(p.tol));
    return r;
}

struct ObservabilityCost {
    double C_T = 0.0;
    double gram_condition = 0.0;
    Eigen::VectorXcd worst_v0; // pencil eigenvector: worst state for the observability quotient
    Eigen::VectorXcd worst_u0; // e^{-T mu} worst_v0 normalised: the costliest initial state
};

inline ObservabilityCost observability_cost(const GramMatrix& gram, const Eigen::VectorXd& mu,
                                            double T) {
    Eigen::MatrixXcd G = control_gramian(gram.matrix, mu, T);
    const Eigen::Index n = G.rows();
    Eigen::MatrixXcd E2 = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) E2(j, j) = std::exp(-2.0 * T * mu[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ge(G, Eigen::EigenvaluesOnly);
    const double emin = ge.eigenvalues().minCoeff();
    if (!(emin > 0.0)) throw NumericalError("observability_cost: Gramian not positive definite");
    ObservabilityCost oc;
    oc.gram_condition = ge.eigenvalues().maxCoeff() / emin;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> pencil(E2, G);
    const Eigen::Index last = n - 1;
    oc.C_T = std::sqrt(std::max(0.0, pencil.eigenvalues()[last]));
    oc.worst_v0 = pencil.eigenvectors().col(last).normalized();
    // cost^2(u0) = u0^* E G^{-1} E u0 with E = e^{-T mu}; the top eigenvector
    // of E G^{-1} E is E v with v the pencil vector
    oc.worst_u0 = heat_propagate(oc.worst_v0, T, mu).normalized();
    return oc;
}

// ---------------------------------------------------------------------------
// Dyadic Lebeau-Robbiano scheme
// ---------------------------------------------------------------------------

struct LrStage {
    double cutoff = 0.0;
    int n_controlled = 0;
    double block = 0.0;
    double cost = 0.0;
    double controlled_residual = 0.0; // low-mode norm right after the control half
};

struct LrResult {
    std::vector<LrStage> stages;
    double total_cost = 0.0;
    double final_residual = 0.0;
    bool complete = true; // schedule reached the full cutoff
};

// Stage k controls the modes with lambda_j <= 2^k lambda0 during the first
// half of its block and lets the system decay during the second half; blocks
// T_k = T 2^{-k-1} are renormalised to tile [0, T] exactly.  A single-stage
// schedule degenerates to plain HUM control over the whole horizon.
inline LrResult lr_scheme(const GramMatrix& gram, const ControlProblem& p, double lambda0,
                          double full_lambda_cut, const std::vector<double>& freqs,
                          int max_stages = 24) {
    if (lambda0 <= 0.0) throw std::invalid_argument("lr_scheme: lambda0 must be positive");
    LrResult res;
    int K = 0;
    while (lambda0 * std::pow(2.0, K) < full_lambda_cut && K < max_stages) ++K;
    if (lambda0 * std::pow(2.0, K) < full_lambda_cut) res.complete = false;

    double blocksum = 0.0;
    for (int k = 0; k <= K; ++k) blocksum += std::pow(2.0, -k - 1);
    const Eigen::Index n = gram.matrix.rows();
    Eigen::VectorXcd u = p.u0;
    const double u0n = std::max(p.u0.norm(), 1e-300);
    CompensatedSum cost2;

    for (int k = 0; k <= K; ++k) {
        LrStage st;
        st.cutoff = lambda0 * std::pow(2.0, k);
        st.block = p.T * std::pow(2.0, -k - 1) / blocksum;
        Eigen::Index nlow = 0;
        while (nlow < n && freqs[static_cast<std::size_t>(nlow)] <= st.cutoff) ++nlow;
        st.n_controlled = static_cast<int>(nlow);
        const bool degenerate_single = (K == 0);
        const double tc = degenerate_single ? st.block : 0.5 * st.block; // control window
        const double td = st.block - tc;                                 // decay window
        if (nlow > 0) {
            Eigen::MatrixXcd Mlow = gram.matrix.topLeftCorner(nlow, nlow);
            Eigen::VectorXd mulow = p.mu.head(nlow);
            Eigen::MatrixXcd Glow = control_gramian(Mlow, mulow, tc);
            Eigen::VectorXcd rhs = -heat_propagate(u.head(nlow), tc, mulow);
            Eigen::VectorXcd phi = Glow.ldlt().solve(rhs);
            st.cost = std::sqrt(std::max(0.0, (phi.adjoint() * Glow * phi)(0, 0).real()));
            // full-coupling update over the control window
            Eigen::VectorXcd unew = heat_propagate(u, tc, p.mu);
            for (Eigen::Index i = 0; i < n; ++i) {
                cplx acc(0.0, 0.0);
                for (Eigen::Index j = 0; j < nlow; ++j)
                    acc += gram.matrix(i, j) * phi[j] *
                           detail::decay_pair_weight(p.mu[i] + p.mu[j], tc);
                unew[i] += acc;
            }
            u = unew;
            st.controlled_residual = u.head(nlow).norm() / u0n;
        } else {
            u = heat_propagate(u, tc, p.mu);
        }
        u = heat_propagate(u, td, p.mu);
        cost2.add(st.cost * st.cost);
        res.stages.push_back(st);
    }
    res.total_cost = std::sqrt(std::max(0.0, cost2.value()));
    res.final_residual = u.norm() / u0n;
    return res;
}

// ---------------------------------------------------------------------------
// Cost scaling over short horizons
// ---------------------------------------------------------------------------

struct CostFit {
    std::vector<double> T_grid;
    std::vector<double> costs;
    std::vector<double> conditions;
    std::vector<bool> flagged;  // non-monotone rows, excluded from the fit
    double beta_hat = 0.0;
    double r_squared = 0.0;
    double C1 = 0.0; // envelope log C_T <= log C1 + C2 T^{-beta_hat}
    double C2 = 0.0;
    bool fitted = false;
};

// C_T over a descending T grid, least-squares exponent scan over
// beta in [0.5/(alpha m - 1), 4/(alpha m - 1)], envelope by upward shift.
inline CostFit cost_scan(const GramMatrix& gram, const Eigen::VectorXd& mu,
                         const std::vector<double>& T_grid, double alpha_m) {
    if (alpha_m <= 1.0)
        throw std::invalid_argument("cost_scan: fitted regime requires alpha m > 1");
    CostFit fit;
    fit.T_grid = T_grid;
    for (double T : T_grid) {
        ObservabilityCost oc = observability_cost(gram, mu, T);
        fit.costs.push_back(oc.C_T);
        fit.conditions.push_back(oc.gram_condition);
    }
    // flag non-monotone rows: with T descending, costs must not decrease
    fit.flagged.assign(T_grid.size(), false);
    for (std::size_t i = 1; i < T_grid.size(); ++i)
        if (fit.costs[i] < fit.costs[i - 1]) fit.flagged[i] = true;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < T_grid.size(); ++i)
        if (!fit.flagged[i]) {
            xs.push_back(T_grid[i]);
            ys.push_back(std::log(fit.costs[i]));
        }
    if (xs.size() < 5)
        throw NumericalError("cost_scan: fewer than 5 valid rows after monotonicity filtering");

    const double blo = 0.5 / (alpha_m - 1.0), bhi = 4.0 / (alpha_m - 1.0);
    const int nbeta = 71;
    double mean_y = 0.0;
    for (double y : ys) mean_y += y;
    mean_y /= double(ys.size());
    double ss_tot = 0.0;
    for (double y : ys) ss_tot += (y - mean_y) * (y - mean_y);
    double best_r2 = -std::numeric_limits<double>::infinity();
    for (int ib = 0; ib < nbeta; ++ib) {
        const double beta = blo + (bhi - blo) * ib / (nbeta - 1);
        // least squares y ~ a + b x, x = T^{-beta}
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double nn = double(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double x = std::pow(xs[i], -beta);
            sx += x;
            sy += ys[i];
            sxx += x * x;
            sxy += x * ys[i];
        }
        const double det = nn * sxx - sx * sx;
        if (det <= 0.0) continue;
        const double b = (nn * sxy - sx * sy) / det;
        const double a = (sy - b * sx) / nn;
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double yhat = a + b * std::pow(xs[i], -beta);
            ss_res += (ys[i] - yhat) * (ys[i] - yhat);
        }
        const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
        if (r2 > best_r2) {
            best_r2 = r2;
            fit.beta_hat = beta;
            fit.C2 = std::max(0.0, b);
        }
    }
    fit.r_squared = best_r2;
    // upward shift so the Miller-form envelope holds at every valid row
    double logc1 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
        logc1 = std::max(logc1, ys[i] - fit.C2 * std::pow(xs[i], -fit.beta_hat));
    fit.C1 = std::exp(logc1);
    fit.fitted = true;
    return fit;
}

} // namespace gfc
