#pragma once

// Positive elliptic Fourier multipliers and their functional calculus.
//
// A SpectralOperator holds a Hermitian matrix symbol per enumerated dual
// plus order metadata.  Complex powers come in two independent routes:
//
//   * direct_power: Hermitian eigendecomposition per representation,
//     sigma^z = U diag(lambda^z) U^*  (exact spectral calculus);
//   * contour_power: the Dunford-Riesz integral
//       -(1/2 pi i) \oint lambda^z (sigma - lambda)^{-1} d lambda
//     over the boundary of the left sector
//       Lambda_eps = {l+il' : |l'| <= -l, l <= 0} u {|z| <= eps},
//     traversed ray-in (upper ray, arg = +3pi/4), arc through angle 0,
//     ray-out (lower ray, arg = -3pi/4).  With this traversal the scalar
//     case reproduces sigma^z for Re z < 0.  lambda^z uses the principal
//     branch, whose cut (the negative real axis) never meets the contour.
//
// The two routes cross-check each other; neither is ever substituted for
// the other in tests.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfc/errors.hpp"
#include "gfc/fourier.hpp"
#include "gfc/group.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/rng.hpp"

namespace gfc {

struct SpectralOperator {
    std::vector<DualIndex> duals;
    std::vector<Eigen::MatrixXcd> symbol;
    double order = 1.0;
    double positivity_floor = 0.0; // largest c with sigma(xi) >= c I over the enumerated duals

    const Eigen::MatrixXcd* find(const DualIndex& d) const {
        for (std::size_t i = 0; i < duals.size(); ++i)
            if (same_label(duals[i], d)) return &symbol[i];
        return nullptr;
    }
};

struct OperatorParams {
    double m = 2.0;
    double c = 1.0;
    double eta = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline double min_sym_eig(const Eigen::MatrixXcd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace detail

// Presets: "laplacian_power"  sigma = lambda^{m/2} I
//          "shifted_power"    sigma = (c + lambda)^{m/2} I
//          "diag_perturbed"   diagonal entries (c + lambda)^{m/2} (1 + eta v_i),
//                             v_i in [-1,1] from the seeded stream, |eta| < 1/2.
inline SpectralOperator make_operator(const std::string& preset, const OperatorParams& p,
                                      const GroupBackend& backend,
                                      const std::vector<DualIndex>& duals) {
    if (p.m <= 0.0) throw std::invalid_argument("make_operator: order m must be positive");
    SpectralOperator op;
    op.duals = duals;
    op.order = p.m;
    op.symbol.reserve(duals.size());
    Rng rng(p.seed, "operator/diag_perturbed");
    if (preset == "laplacian_power") {
        for (const auto& d : duals)
            op.symbol.push_back(std::pow(d.laplace_eig, 0.5 * p.m) *
                                Eigen::MatrixXcd::Identity(d.dim, d.dim));
    } else if (preset == "shifted_power") {
        if (p.c <= 0.0) throw std::invalid_argument("make_operator: shift c must be positive");
        for (const auto& d : duals)
            op.symbol.push_back(std::pow(p.c + d.laplace_eig, 0.5 * p.m) *
                                Eigen::MatrixXcd::Identity(d.dim, d.dim));
    } else if (preset == "diag_perturbed") {
        if (p.c <= 0.0) throw std::invalid_argument("make_operator: shift c must be positive");
        if (std::abs(p.eta) >= 0.5) throw std::invalid_argument("make_operator: |eta| must be < 1/2");
        for (const auto& d : duals) {
            Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d.dim, d.dim);
            const double base = std::pow(p.c + d.laplace_eig, 0.5 * p.m);
            for (int i = 0; i < d.dim; ++i) {
                const double v = rng.uniform(-1.0, 1.0);
                s(i, i) = base * (1.0 + p.eta * v);
            }
            op.symbol.push_back(std::move(s));
        }
    } else {
        throw ConfigError("unknown operator preset '" + preset + "'");
    }
    (void)backend;
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& s : op.symbol) floor = std::min(floor, detail::min_sym_eig(s));
    op.positivity_floor = std::max(0.0, floor);
    return op;
}

inline FourierCoefficients apply_operator(const SpectralOperator& op,
                                          const FourierCoefficients& coeffs) {
    FourierCoefficients out;
    out.duals = coeffs.duals;
    out.entries.reserve(coeffs.duals.size());
    for (std::size_t i = 0; i < coeffs.duals.size(); ++i) {
        const Eigen::MatrixXcd* s = op.find(coeffs.duals[i]);
        if (!s)
            throw NumericalError("apply_operator: dual " + std::to_string(coeffs.duals[i].label[0]) +
                                 " not covered by the operator's symbol table");
        out.entries.push_back(*s * coeffs.entries[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ellipticity
// ---------------------------------------------------------------------------

struct EllipticityReport {
    double C1 = 0.0; // tightest constant with C1 <xi>^m <= s_min(sigma)
    double C2 = 0.0; // tightest constant with s_max(sigma) <= C2 <xi>^m
    bool elliptic = false;
};

inline EllipticityReport check_ellipticity(const SpectralOperator& op) {
    if (op.duals.empty()) throw std::invalid_argument("check_ellipticity: empty dual list");
    EllipticityReport r;
    double c1 = std::numeric_limits<double>::infinity();
    double c2 = 0.0;
    for (std::size_t i = 0; i < op.duals.size(); ++i) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.symbol[i]);
        const double w = std::pow(op.duals[i].bracket, op.order);
        c1 = std::min(c1, svd.singularValues().minCoeff() / w);
        c2 = std::max(c2, svd.singularValues().maxCoeff() / w);
    }
    r.C1 = c1;
    r.C2 = c2;
    r.elliptic = c1 > 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// The left sector and parameter-ellipticity
// ---------------------------------------------------------------------------

struct Sector {
    double epsilon = 0.0; // disc radius of Lambda_eps

    bool contains(cplx z) const {
        if (std::abs(z) <= epsilon) return true;
        return z.real() <= 0.0 && std::abs(z.imag()) <= -z.real();
    }

    // Deterministic sample cloud in Lambda_eps: points r e^{i phi} with r
    // log-spaced in (eps scale, ray_length] and phi uniform across the sector
    // opening, plus disc samples.
    std::vector<cplx> sample(int n, double ray_length, Rng& rng) const {
        std::vector<cplx> zs;
        zs.reserve(static_cast<std::size_t>(n));
        const double r0 = std::max(1e-6, epsilon);
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            const double r = r0 * std::pow(ray_length / r0, u);
            const double phi = 3.0 * M_PI / 4.0 + rng.uniform() * M_PI / 2.0;
            zs.push_back(std::polar(r, phi));
        }
        return zs;
    }
};

struct ParamEllipticityReport {
    double worst_constant = 0.0;
    bool ok = true;
    // set when a precondition fails: the offending (dual index, z) pair
    std::optional<std::pair<std::size_t, cplx>> offending;
    std::string reason;
};

// sup over (xi, z) of ||(sigma(xi) - z)^{-1}|| (1 + <xi> + |z|^{1/m})^m.
inline ParamEllipticityReport check_parameter_ellipticity(const SpectralOperator& op,
                                                          const Sector& sector,
                                                          const std::vector<cplx>& z_samples) {
    ParamEllipticityReport rep;
    for (const cplx& z : z_samples) {
        if (!sector.contains(z)) {
            rep.ok = false;
            rep.offending = {std::size_t(0), z};
            rep.reason = "sample outside the sector";
            return rep;
        }
        for (std::size_t i = 0; i < op.duals.size(); ++i) {
            const auto& s = op.symbol[i];
            Eigen::MatrixXcd shifted = s - z * Eigen::MatrixXcd::Identity(s.rows(), s.cols());
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
            const double smin = svd.singularValues().minCoeff();
            if (smin <= 0.0 || !std::isfinite(1.0 / smin)) {
                rep.ok = false;
                rep.offending = {i, z};
                rep.reason = "sigma(xi) - z is singular";
                return rep;
            }
            const double weight = std::pow(1.0 + op.duals[i].bracket +
                                               std::pow(std::abs(z), 1.0 / op.order),
                                           op.order);
            rep.worst_constant = std::max(rep.worst_constant, weight / smin);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Complex powers
// ---------------------------------------------------------------------------

// Spectral-calculus route.  The result of a complex exponent is not
// Hermitian; order metadata becomes m Re z and the floor is recomputed for
// real exponents only.
inline SpectralOperator direct_power(const SpectralOperator& op, cplx z) {
    SpectralOperator out;
    out.duals = op.duals;
    out.order = op.order * z.real();
    out.symbol.reserve(op.symbol.size());
    for (const auto& s : op.symbol) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
        const auto& ev = es.eigenvalues();
        Eigen::VectorXcd powd(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            const double lam = ev[i];
            if (lam <= 0.0) {
                if (z == cplx(0.0, 0.0)) {
                    // A^0 = I - P_0; with a trivial kernel this never triggers
                    powd[i] = (lam == 0.0) ? 0.0 : 1.0;
                    continue;
                }
                if (z.real() < 0.0 || lam < 0.0)
                    throw NumericalError("direct_power: nonpositive eigenvalue with negative exponent");
                powd[i] = 0.0;
                continue;
            }
            powd[i] = std::exp(z * std::log(lam));
        }
        out.symbol.push_back(es.eigenvectors() * powd.asDiagonal() *
                             es.eigenvectors().adjoint());
    }
    if (z.imag() == 0.0 && op.positivity_floor > 0.0)
        out.positivity_floor = std::pow(op.positivity_floor, z.real());
    return out;
}

struct ContourSpec {
    double epsilon = 1e-4;     // disc radius of Lambda_eps
    double ray_length = 0.0;   // 0 = auto from the tail bound for the exponent
    int nodes_per_segment = 24;

    // Tail bound: |lambda|^{Re z} ||(sigma-lambda)^{-1}|| ~ r^{Re z - 1} on the
    // rays, so truncating at L leaves about L^{Re z}/|Re z|.  The result's
    // smallest entries scale like sigma_max^{Re z}, so the truncation is sized
    // against that scale to keep the tail below tail_tol in relative terms.
    static double auto_ray_length(cplx z, double sigma_max = 1.0, double tail_tol = 1e-9) {
        const double re = z.real();
        if (re >= 0.0) throw NumericalError("contour_power: Re z must be negative");
        double L = std::max(1.0, sigma_max) * std::pow(tail_tol * std::abs(re), 1.0 / re);
        return std::clamp(L, 1e3, 1e30);
    }
};

namespace detail {

struct ContourNode {
    cplx lambda;
    cplx dlambda; // quadrature weight times d lambda / d parameter
};

// Boundary of Lambda_eps traversed ray-in / arc / ray-out: down the upper
// ray (arg 3pi/4) from L to eps, the right-hand arc of |lambda| = eps from
// angle 3pi/4 through 0 to -3pi/4, then up the lower ray to L.  Ray panels
// are geometric so the Gauss-Legendre rule tracks the decay.
inline std::vector<ContourNode> contour_nodes(const ContourSpec& spec, cplx z,
                                              double sigma_max) {
    const double eps = spec.epsilon;
    const double L =
        spec.ray_length > 0.0 ? spec.ray_length : ContourSpec::auto_ray_length(z, sigma_max);
    if (L <= eps) throw NumericalError("contour_power: ray_length must exceed epsilon");
    std::vector<ContourNode> nodes;
    const cplx dir_up = std::polar(1.0, 3.0 * M_PI / 4.0);
    const cplx dir_dn = std::polar(1.0, -3.0 * M_PI / 4.0);
    const int panels = std::max(1, static_cast<int>(std::ceil(std::log2(L / eps))));
    const double ratio = std::pow(L / eps, 1.0 / panels);
    Quad1D base = gauss_legendre(spec.nodes_per_segment);

    // upper ray, from L toward eps (parametrise r from L down)
    for (int pnl = panels - 1; pnl >= 0; --pnl) {
        const double a = eps * std::pow(ratio, pnl);
        const double b = eps * std::pow(ratio, pnl + 1);
        for (int i = spec.nodes_per_segment - 1; i >= 0; --i) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * base.nodes[i];
            const double w = 0.5 * (b - a) * base.weights[i];
            nodes.push_back({r * dir_up, -w * dir_up}); // r decreasing: dr < 0
        }
    }
    // arc from angle 3pi/4 to -3pi/4 through 0 (theta decreasing)
    {
        const int narc = std::max(8, 2 * spec.nodes_per_segment);
        Quad1D arc = gauss_legendre(narc, -3.0 * M_PI / 4.0, 3.0 * M_PI / 4.0);
        for (int i = narc - 1; i >= 0; --i) {
            const double th = arc.nodes[i];
            const cplx lam = std::polar(eps, th);
            nodes.push_back({lam, -arc.weights[i] * cplx(0.0, 1.0) * lam});
        }
    }
    // lower ray, from eps toward L
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = eps * std::pow(ratio, pnl);
        const double b = eps * std::pow(ratio, pnl + 1);
        for (int i = 0; i < spec.nodes_per_segment; ++i) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * base.nodes[i];
            const double w = 0.5 * (b - a) * base.weights[i];
            nodes.push_back({r * dir_dn, w * dir_dn});
        }
    }
    return nodes;
}

} // namespace detail

// Symbol of the contour functional calculus applied to op with F = lambda^z.
inline std::vector<Eigen::MatrixXcd> contour_power_symbol(const SpectralOperator& op, cplx z,
                                                          const ContourSpec& spec) {
    if (z.real() >= 0.0)
        throw NumericalError("contour_power: unsupported exponent (requires Re z < 0)");
    if (op.positivity_floor <= 0.0)
        throw NumericalError("contour_power: operator must have a positive floor");
    const double eps_max = std::pow(op.positivity_floor, 2.0 / op.order) / 1000.0;
    if (!(spec.epsilon > 0.0) || spec.epsilon >= eps_max)
        throw NumericalError("contour_power: epsilon must lie in (0, floor^{2/m}/1000)");
    // resolvent-proximity check: every node at distance >= eps/2 from the spectrum
    std::vector<double> eigs;
    double sigma_max = 1.0;
    for (const auto& s : op.symbol) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            eigs.push_back(es.eigenvalues()[i]);
            sigma_max = std::max(sigma_max, es.eigenvalues()[i]);
        }
    }
    auto nodes = detail::contour_nodes(spec, z, sigma_max);
    for (const auto& nd : nodes)
        for (double ev : eigs)
            if (std::abs(nd.lambda - cplx(ev, 0.0)) < 0.5 * spec.epsilon)
                throw NumericalError("contour_power: contour touches the spectrum");

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(op.symbol.size());
    const cplx front = cplx(0.0, 1.0) / (2.0 * M_PI); // -1/(2 pi i)
    for (const auto& s : op.symbol) {
        const Eigen::Index n = s.rows();
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
        for (const auto& nd : nodes) {
            const cplx f = std::pow(nd.lambda, z); // principal branch
            Eigen::MatrixXcd res = (s - nd.lambda * id).partialPivLu().solve(id);
            acc.noalias() += (f * nd.dlambda) * res;
        }
        out.push_back(front * acc);
    }
    return out;
}

inline FourierCoefficients contour_power(const SpectralOperator& op, cplx z,
                                         const ContourSpec& spec,
                                         const FourierCoefficients& coeffs) {
    auto sym = contour_power_symbol(op, z, spec);
    FourierCoefficients out;
    out.duals = coeffs.duals;
    out.entries.reserve(coeffs.duals.size());
    for (std::size_t i = 0; i < coeffs.duals.size(); ++i) {
        const Eigen::MatrixXcd* s = nullptr;
        for (std::size_t j = 0; j < op.duals.size(); ++j)
            if (same_label(op.duals[j], coeffs.duals[i])) { s = &sym[j]; break; }
        if (!s) throw NumericalError("contour_power: dual not covered by the operator");
        out.entries.push_back(*s * coeffs.entries[i]);
    }
    return out;
}

} // namespace gfc
