#pragma once

// Space-time fields built from eigenmode trajectories, and the executable
// identities of the extension machinery.
//
// The generating field of a subspace element kappa = sum a_j e_j is
//
//   F(x,t) = sum_j  sinh(lambda_j t)/lambda_j  a_j e_j(x)
//
// (the lambda_j = 0 term is its limit t a_j e_j), so F(.,0) = 0 and
// d_t F(.,0) = kappa.  Per mode, (-d_t^2 + lambda_j^2) applied to the sinh
// trajectory vanishes identically; fields may be extended constant past T,
// multiplied by the cut-off psi, and are always odd-extended to negative
// times.  All derivatives are evaluated in closed form, never by finite
// differences, so the cancellation and symmetry identities hold at rounding
// level.
//
// Space-time Sobolev norms follow the convention
//
//   ||f||^2_{H^s} = sum_{j<=s} int ( |d_t^j f|^2_{L^2(G)}
//                                  + ||(1+L_G)^{j/2} f||^2_{L^2(G)} ) dt,
//
// whose j = 0 summand counts the L^2 term twice (both the zeroth time
// derivative and the zeroth Laplacian power appear), so a constant c on a
// unit time interval has H^0 norm |c| sqrt(2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gfc/cutoff.hpp"
#include "gfc/errors.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/subspace.hpp"

namespace gfc {

struct TrajectoryMode {
    cplx a;
    double freq = 0.0;        // lambda_j
    double laplace_eig = 0.0; // Laplacian eigenvalue of the host representation
};

struct SpaceTimeField {
    std::vector<TrajectoryMode> modes;
    double T = 1.0;
    double epsilon = 0.0;                // >0 once extended past T
    bool frozen_after_T = false;         // trajectory constant on [T, T+epsilon]
    std::optional<CutoffSpec> cutoff;    // multiply by psi(t)

    double t_max() const { return T + epsilon; }
};

struct TrajEval {
    cplx c{0.0, 0.0};
    cplx dc{0.0, 0.0};
    cplx d2c{0.0, 0.0};
};

namespace detail {

inline double sinhc(double lam, double t) {
    if (lam == 0.0) return t;
    return std::sinh(lam * t) / lam;
}

} // namespace detail

inline SpaceTimeField sinh_extension(const SpectralSubspace& sub, const Eigen::VectorXcd& a,
                                     double T) {
    if (a.size() != static_cast<Eigen::Index>(sub.modes.size()))
        throw std::invalid_argument("sinh_extension: coefficient/mode count mismatch");
    if (T <= 0.0) throw std::invalid_argument("sinh_extension: T must be positive");
    SpaceTimeField f;
    f.T = T;
    f.modes.reserve(sub.modes.size());
    for (std::size_t j = 0; j < sub.modes.size(); ++j) {
        if (sub.modes[j].freq * T > 700.0)
            throw MagnitudeError("sinh_extension: lambda_j T = " +
                                 std::to_string(sub.modes[j].freq * T) +
                                 " exceeds the representable range");
        f.modes.push_back({a[static_cast<Eigen::Index>(j)], sub.modes[j].freq,
                           sub.modes[j].laplace_eig});
    }
    return f;
}

inline SpaceTimeField extend_frozen(SpaceTimeField f, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("extend_frozen: epsilon must be positive");
    f.epsilon = epsilon;
    f.frozen_after_T = true;
    return f;
}

inline SpaceTimeField with_cutoff(SpaceTimeField f, const CutoffSpec& s) {
    f.cutoff = s;
    f.T = s.T;
    f.epsilon = s.epsilon;
    f.frozen_after_T = true;
    return f;
}

// Trajectory value and exact first/second time derivatives of mode j at t,
// including the frozen extension, the psi multiplier and the odd extension.
inline TrajEval traj_eval(const SpaceTimeField& f, std::size_t j, double t) {
    const auto& m = f.modes[j];
    if (t < 0.0) {
        TrajEval e = traj_eval(f, j, -t);
        return {-e.c, e.dc, -e.d2c};
    }
    TrajEval base;
    if (f.frozen_after_T && t > f.T) {
        if (m.freq * f.T > 700.0)
            throw MagnitudeError("traj_eval: lambda T exceeds the representable range");
        base.c = m.a * detail::sinhc(m.freq, f.T);
    } else {
        if (m.freq * t > 700.0)
            throw MagnitudeError("traj_eval: lambda t exceeds the representable range");
        base.c = m.a * detail::sinhc(m.freq, t);
        base.dc = m.a * std::cosh(m.freq * t);
        base.d2c = m.a * m.freq * std::sinh(m.freq * t);
    }
    if (!f.cutoff) return base;
    const double p0 = cutoff_psi(*f.cutoff, t, 0);
    const double p1 = cutoff_psi(*f.cutoff, t, 1);
    const double p2 = cutoff_psi(*f.cutoff, t, 2);
    TrajEval out;
    out.c = p0 * base.c;
    out.dc = p1 * base.c + p0 * base.dc;
    out.d2c = p2 * base.c + 2.0 * p1 * base.dc + p0 * base.d2c;
    return out;
}

// ---------------------------------------------------------------------------
// Time grids (Gauss-Legendre panels, mirrored for symmetric intervals)
// ---------------------------------------------------------------------------

struct TimeGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    bool mirrored = false;
};

inline TimeGrid time_grid(double t0, double t1, const std::vector<double>& breakpoints = {},
                          int nodes_per_unit = 64) {
    if (!(t1 > t0)) throw std::invalid_argument("time_grid: empty interval");
    std::vector<double> cuts{t0, t1};
    for (double b : breakpoints)
        if (b > t0 && b < t1) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    TimeGrid g;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const int n = std::clamp(static_cast<int>(std::ceil(nodes_per_unit * (b - a))), 8, 96);
        Quad1D q = gauss_legendre(n, a, b);
        g.nodes.insert(g.nodes.end(), q.nodes.begin(), q.nodes.end());
        g.weights.insert(g.weights.end(), q.weights.begin(), q.weights.end());
    }
    return g;
}

// grid on [-t1, t1] whose negative nodes are exact reflections
inline TimeGrid mirrored_time_grid(double t1, const std::vector<double>& breakpoints = {},
                                   int nodes_per_unit = 64) {
    TimeGrid pos = time_grid(0.0, t1, breakpoints, nodes_per_unit);
    TimeGrid g;
    g.mirrored = true;
    for (std::size_t i = pos.nodes.size(); i-- > 0;) {
        g.nodes.push_back(-pos.nodes[i]);
        g.weights.push_back(pos.weights[i]);
    }
    g.nodes.insert(g.nodes.end(), pos.nodes.begin(), pos.nodes.end());
    g.weights.insert(g.weights.end(), pos.weights.begin(), pos.weights.end());
    return g;
}

inline bool is_mirrored(const TimeGrid& g) {
    const std::size_t n = g.nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        if (g.nodes[i] != -g.nodes[n - 1 - i] || g.weights[i] != g.weights[n - 1 - i]) return false;
    return true;
}

inline std::vector<double> field_breakpoints(const SpaceTimeField& f) {
    std::vector<double> b{f.T};
    if (f.cutoff) b.push_back(f.cutoff->T + f.cutoff->a);
    if (f.epsilon > 0.0) b.push_back(f.T + f.epsilon);
    return b;
}

// ---------------------------------------------------------------------------
// Identities
// ---------------------------------------------------------------------------

// Per-mode plateau identity (-d_t^2 + lambda^2) sinh trajectory = 0, with
// second derivatives taken in closed form.  Returns the residual relative to
// the largest trajectory magnitude.
struct CancellationReport {
    double residual_abs = 0.0;
    double scale = 0.0;
    double residual_rel = 0.0;
};

inline CancellationReport check_cancellation(const SpaceTimeField& f, int plateau_samples = 64) {
    CancellationReport rep;
    for (std::size_t j = 0; j < f.modes.size(); ++j) {
        const double lam2 = f.modes[j].freq * f.modes[j].freq;
        for (int i = 0; i < plateau_samples; ++i) {
            const double t = f.T * (i + 0.5) / plateau_samples;
            TrajEval e = traj_eval(f, j, t);
            rep.residual_abs = std::max(rep.residual_abs, std::abs(e.d2c - lam2 * e.c));
            rep.scale = std::max({rep.scale, std::abs(e.d2c), lam2 * std::abs(e.c)});
        }
    }
    rep.residual_rel = rep.scale > 0.0 ? rep.residual_abs / rep.scale : 0.0;
    return rep;
}

// || (-d_t^2 + A^{2/m}) phi ||^2 over the glued circle versus twice the
// positive half; exact node mirroring makes the identity hold at rounding
// level.  A^{2/m} acts per mode as lambda_j^2.
struct SymmetryReport {
    double lhs = 0.0; // full circle
    double rhs = 0.0; // positive half
};

inline SymmetryReport check_symmetry(const SpaceTimeField& f,
                                     const std::optional<TimeGrid>& grid_in = std::nullopt) {
    if (f.epsilon <= 0.0)
        throw std::invalid_argument("check_symmetry: field must be extended past T");
    TimeGrid g = grid_in ? *grid_in : mirrored_time_grid(f.t_max(), field_breakpoints(f));
    if (!is_mirrored(g)) throw NumericalError("check_symmetry: time grid is not mirrored");
    CompensatedSum full, half;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double density = 0.0;
        for (std::size_t j = 0; j < f.modes.size(); ++j) {
            const double lam2 = f.modes[j].freq * f.modes[j].freq;
            TrajEval e = traj_eval(f, j, g.nodes[i]);
            density += std::norm(-e.d2c + lam2 * e.c);
        }
        full.add(g.weights[i] * density);
        if (g.nodes[i] > 0.0) half.add(g.weights[i] * density);
    }
    return {full.value(), half.value()};
}

// Space-time Sobolev norm of the field over [t0, t1], s in {0, 1}.
inline double h_norm(const SpaceTimeField& f, double t0, double t1, int s) {
    if (s != 0 && s != 1)
        throw std::invalid_argument("h_norm: only s in {0,1} is supported here");
    if (t0 < -f.t_max() - 1e-12 || t1 > f.t_max() + 1e-12 || !(t1 > t0))
        throw std::invalid_argument("h_norm: interval outside the field's range");
    TimeGrid g = time_grid(t0, t1, field_breakpoints(f));
    CompensatedSum acc;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double density = 0.0;
        for (std::size_t j = 0; j < f.modes.size(); ++j) {
            TrajEval e = traj_eval(f, j, g.nodes[i]);
            density += 2.0 * std::norm(e.c); // j = 0 term, counted twice by convention
            if (s >= 1) density += std::norm(e.dc) + (1.0 + f.modes[j].laplace_eig) * std::norm(e.c);
        }
        acc.add(g.weights[i] * density);
    }
    return std::sqrt(std::max(0.0, acc.value()));
}

// ---------------------------------------------------------------------------
// Interpolation-inequality estimator
// ---------------------------------------------------------------------------

struct InterpolationRow {
    double lhs = 0.0;      // ||F||_{H^1(G x (alpha, T-alpha))}
    double h1_full = 0.0;  // ||F||_{H^1(G_T)}
    double l2_omega = 0.0; // ||kappa||_{L^2(omega)}
    double kappa_star = 0.0;
    bool flagged = false;
};

// Smallest exponent kappa in (0,1) with lhs <= X^kappa Y^(1-kappa), located
// by bisection.
inline double smallest_interpolation_exponent(double lhs, double X, double Y) {
    if (!(X > 0.0) || !(Y > 0.0)) return 1.0;
    if (lhs <= Y) return 0.0;
    if (X <= Y) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double bound = std::exp(mid * std::log(X) + (1.0 - mid) * std::log(Y));
        if (bound >= lhs)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-14) break;
    }
    return hi;
}

inline InterpolationRow interpolation_check(const SpectralSubspace& sub,
                                            const Eigen::VectorXcd& a,
                                            const ObservationSet& omega,
                                            const QuadratureGrid& grid, double T, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5 * T))
        throw std::invalid_argument("interpolation_check: alpha must lie in (0, T/2)");
    SpaceTimeField f = sinh_extension(sub, a, T);
    InterpolationRow row;
    row.lhs = h_norm(f, alpha, T - alpha, 1);
    row.h1_full = h_norm(f, 0.0, T, 1);
    Eigen::VectorXcd kappa = synthesize(sub, a);
    CompensatedSum s;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
        if (omega.mask[i]) s.add(grid.weights[i] * std::norm(kappa[static_cast<Eigen::Index>(i)]));
    row.l2_omega = std::sqrt(std::max(0.0, s.value()));
    if (row.l2_omega <= 0.0) {
        row.flagged = true;
        return row;
    }
    row.kappa_star = smallest_interpolation_exponent(row.lhs, row.h1_full, row.l2_omega);
    return row;
}

// ---------------------------------------------------------------------------
// Uniform space-time operator-norm bounds
// ---------------------------------------------------------------------------

struct SpaceTimeBoundsReport {
    double sup_inverse = 0.0;        // sup (1 + mu + lambda_j^2) / (mu + lambda_j^2)
    double bound_inverse = 0.0;      // 1 + 1/nu_min
    double sup_quotient = 0.0;       // sup (mu + Lambda_L) / (mu + lambda_j^2)
    double refine_change_inverse = 0.0;
    double refine_change_quotient = 0.0;
    bool unbounded = false;          // floor c = 0: the inverse bound degenerates
};

// Suprema over the truncated space-time eigenbasis: time eigenvalues
// mu_{k,eps} = (pi k/(T+eps))^2, space eigenvalues lambda_j^2 of A^{2/m}.
inline SpaceTimeBoundsReport check_spacetime_bounds(const SpectralOperator& op, double T,
                                                    std::vector<double> epsilon_grid,
                                                    int k_max = 32) {
    if (epsilon_grid.empty()) throw std::invalid_argument("check_spacetime_bounds: empty epsilon grid");
    std::vector<double> lam2, lap;
    for (std::size_t i = 0; i < op.duals.size(); ++i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.symbol[i], Eigen::EigenvaluesOnly);
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
            lam2.push_back(std::pow(std::max(0.0, es.eigenvalues()[j]), 2.0 / op.order));
            lap.push_back(op.duals[i].laplace_eig);
        }
    }
    double nu_min = std::numeric_limits<double>::infinity();
    for (double v : lam2) nu_min = std::min(nu_min, v);

    auto run = [&](const std::vector<double>& eps_grid, int kmax, double& s1, double& s2) {
        s1 = 0.0;
        s2 = 0.0;
        for (double eps : eps_grid)
            for (int k = 0; k <= kmax; ++k) {
                const double mu = std::pow(M_PI * k / (T + eps), 2);
                for (std::size_t j = 0; j < lam2.size(); ++j) {
                    const double den = mu + lam2[j];
                    if (den > 0.0) s1 = std::max(s1, (1.0 + mu + lam2[j]) / den);
                    const double num = mu + lap[j];
                    if (den > 0.0)
                        s2 = std::max(s2, num / den);
                    else if (num > 0.0)
                        s2 = std::max(s2, std::numeric_limits<double>::infinity());
                    // num = den = 0 pairs carry no information and are skipped
                }
            }
    };

    SpaceTimeBoundsReport rep;
    rep.unbounded = !(nu_min > 0.0);
    rep.bound_inverse = rep.unbounded ? std::numeric_limits<double>::infinity() : 1.0 + 1.0 / nu_min;
    double s1a, s2a, s1b, s2b;
    run(epsilon_grid, k_max, s1a, s2a);
    std::vector<double> refined = epsilon_grid;
    for (std::size_t i = 0; i + 1 < epsilon_grid.size(); ++i)
        refined.push_back(0.5 * (epsilon_grid[i] + epsilon_grid[i + 1]));
    std::sort(refined.begin(), refined.end());
    run(refined, 2 * k_max, s1b, s2b);
    rep.sup_inverse = s1b;
    rep.sup_quotient = s2b;
    rep.refine_change_inverse = std::abs(s1b - s1a) / std::max(1e-300, s1a);
    rep.refine_change_quotient = std::abs(s2b - s2a) / std::max(1e-300, s2a);
    return rep;
}

} // namespace gfc
