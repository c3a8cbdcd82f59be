#pragma once

// Concrete compact-group backends: the tori T^1, T^2 and SU(2).
//
// Each backend provides its unitary dual, representation matrices, a Haar
// quadrature grid with a documented exactness limit, bi-invariant distances
// and observation-set construction.  Conventions fixed here once:
//
//   * Torus characters are e^{2 pi i k.x}, so the positive Laplacian acts
//     with eigenvalue 4 pi^2 |k|^2 on the dual label k.
//   * SU(2) points are z-y-z Euler angles (alpha, beta, gamma) with
//     alpha in [0,2pi), beta in [0,pi], gamma in [0,4pi); the normalised
//     Haar density is sin(beta)/(16 pi^2).  The Laplacian eigenvalue on
//     the spin-l representation is l(l+1); labels store 2l as an integer.
//   * The SU(2) distance is d(g,h) = 2 arccos(|tr(g h^*)|/2) in [0,pi]
//     (antipodal points identified); the Haar measure of the ball of
//     radius r around any centre is (r - sin r)/pi.
//   * Torus distance is the euclidean length of the per-coordinate wrapped
//     differences min_m |x - y + m|.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfc/errors.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/rng.hpp"

namespace gfc {

using cplx = std::complex<double>;

enum class GroupKind { Torus1, Torus2, SU2 };

struct GroupPoint {
    // torus: coordinates in [0,1) per dimension; SU(2): Euler angles (alpha, beta, gamma)
    std::array<double, 3> c{0.0, 0.0, 0.0};
};

struct DualIndex {
    // torus: label[0..n-1] = k; SU(2): label[0] = 2l
    std::array<int, 2> label{0, 0};
    int dim = 1;
    double laplace_eig = 0.0;
    double bracket = 1.0;
};

inline bool same_label(const DualIndex& a, const DualIndex& b) {
    return a.label == b.label && a.dim == b.dim;
}

struct QuadratureGrid {
    std::vector<GroupPoint> nodes;
    std::vector<double> weights;
    int resolution = 0;
    // torus: largest single-mode |k|_inf integrated exactly against another
    // mode of the same band; SU(2): largest combined Wigner degree l1+l2.
    double band_limit = 0.0;
};

struct OmegaDescriptor {
    enum class Kind { Full, Arcs, Ball };
    Kind kind = Kind::Full;
    // Arcs: per box, [lo0,hi0] x [lo1,hi1] (second pair ignored on T^1)
    std::vector<std::array<double, 4>> boxes;
    GroupPoint center;
    double radius = 0.0;
};

struct ObservationSet {
    std::vector<std::uint8_t> mask;
    double measure = 0.0;
    OmegaDescriptor descriptor;
    bool full_group_warning = false; // ball radius reached the group diameter
    bool empty = false;
};

namespace detail {

// log-factorial table; spin labels are supported up to l = 25 (factorial
// arguments up to 4l+1).
inline double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(128, 0.0);
        for (std::size_t i = 2; i < t.size(); ++i) t[i] = t[i - 1] + std::log(double(i));
        return t;
    }();
    return table.at(static_cast<std::size_t>(n));
}

// Wigner little-d entry d^l_{m',m}(beta) by the explicit sum formula.
// Arguments are twice the spin quantum numbers so half-integers stay exact.
inline double wigner_d(int tl, int tmp, int tm, double beta) {
    const double ch = std::cos(0.5 * beta);
    const double sh = std::sin(0.5 * beta);
    const int jpmp = (tl + tmp) / 2, jmmp = (tl - tmp) / 2;
    const int jpm = (tl + tm) / 2, jmm = (tl - tm) / 2;
    const double pref = 0.5 * (log_factorial(jpmp) + log_factorial(jmmp) +
                               log_factorial(jpm) + log_factorial(jmm));
    const int dmm = (tmp - tm) / 2; // m' - m
    const int kmin = std::max(0, -dmm);
    const int kmax = std::min(jpm, jmmp);
    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const int cpow = jpm - k + jmmp - k; // 2j + m - m' - 2k
        const int spow = dmm + 2 * k;
        double lt = pref - log_factorial(jpm - k) - log_factorial(k) -
                    log_factorial(dmm + k) - log_factorial(jmmp - k);
        double term = std::exp(lt);
        if ((dmm + k) % 2 != 0) term = -term;
        term *= std::pow(ch, cpow) * std::pow(sh, spow);
        sum += term;
    }
    return sum;
}

inline Eigen::Matrix2cd su2_matrix(const GroupPoint& p) {
    const double al = p.c[0], be = p.c[1], ga = p.c[2];
    const double cb = std::cos(0.5 * be), sb = std::sin(0.5 * be);
    const cplx ea = std::exp(cplx(0.0, -0.5 * (al + ga)));
    const cplx eb = std::exp(cplx(0.0, -0.5 * (al - ga)));
    Eigen::Matrix2cd g;
    g(0, 0) = ea * cb;
    g(0, 1) = -eb * sb;
    g(1, 0) = std::conj(eb) * sb;
    g(1, 1) = std::conj(ea) * cb;
    return g;
}

// Euler angles of u in the canonical ranges.  The representative is unique
// up to the (alpha,gamma) -> (alpha+2pi, gamma+2pi) identification, under
// which every D^l is invariant.
inline GroupPoint euler_from_su2(const Eigen::Matrix2cd& u) {
    const cplx a = u(0, 0), b = u(0, 1);
    double beta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    double pa, pb;
    if (std::abs(b) < 1e-14) {
        pa = std::arg(a);
        pb = 0.0;
    } else if (std::abs(a) < 1e-14) {
        pa = 0.0;
        pb = std::arg(-b);
    } else {
        pa = std::arg(a);
        pb = std::arg(-b);
    }
    double alpha = -(pa + pb);
    double gamma = pb - pa;
    // alpha shifts must couple with gamma shifts: a lone 2 pi shift of alpha
    // lands in the other sheet of the double cover and flips every
    // half-integer representation; gamma alone may only move by 4 pi
    const double two_pi = 2.0 * M_PI, four_pi = 4.0 * M_PI;
    while (alpha < 0.0) {
        alpha += two_pi;
        gamma -= two_pi;
    }
    while (alpha >= two_pi) {
        alpha -= two_pi;
        gamma += two_pi;
    }
    while (gamma < 0.0) gamma += four_pi;
    while (gamma >= four_pi) gamma -= four_pi;
    GroupPoint p;
    p.c = {alpha, beta, gamma};
    return p;
}

} // namespace detail

class GroupBackend {
public:
    static GroupBackend from_name(const std::string& name) {
        if (name == "torus1") return GroupBackend(GroupKind::Torus1);
        if (name == "torus2") return GroupBackend(GroupKind::Torus2);
        if (name == "su2") return GroupBackend(GroupKind::SU2);
        throw ConfigError("unknown group backend '" + name + "' (expected torus1|torus2|su2)");
    }
    explicit GroupBackend(GroupKind k) : kind_(k) {}

    GroupKind kind() const { return kind_; }
    int torus_dim() const { return kind_ == GroupKind::Torus1 ? 1 : (kind_ == GroupKind::Torus2 ? 2 : 0); }
    std::string name() const {
        switch (kind_) {
            case GroupKind::Torus1: return "torus1";
            case GroupKind::Torus2: return "torus2";
            case GroupKind::SU2: return "su2";
        }
        return "?";
    }

    double diameter() const {
        switch (kind_) {
            case GroupKind::Torus1: return 0.5;
            case GroupKind::Torus2: return 0.5 * std::sqrt(2.0);
            case GroupKind::SU2: return M_PI;
        }
        return 0.0;
    }

    double laplace_eig_of(const std::array<int, 2>& label) const {
        if (kind_ == GroupKind::SU2) {
            const double l = 0.5 * label[0];
            return l * (l + 1.0);
        }
        double s = double(label[0]) * label[0];
        if (kind_ == GroupKind::Torus2) s += double(label[1]) * label[1];
        return 4.0 * M_PI * M_PI * s;
    }

    DualIndex make_dual(const std::array<int, 2>& label) const {
        DualIndex d;
        d.label = label;
        d.dim = (kind_ == GroupKind::SU2) ? label[0] + 1 : 1;
        d.laplace_eig = laplace_eig_of(label);
        d.bracket = std::sqrt(1.0 + d.laplace_eig);
        return d;
    }

    // All representations with bracket <= bracket_cut, sorted by Laplacian
    // eigenvalue, ties broken by lexicographic label order.
    std::vector<DualIndex> enumerate_dual(double bracket_cut) const {
        if (bracket_cut < 1.0) throw std::invalid_argument("enumerate_dual: bracket_cut must be >= 1");
        const double eig_cut = bracket_cut * bracket_cut - 1.0 + 1e-9 * std::max(1.0, bracket_cut * bracket_cut);
        std::vector<DualIndex> out;
        if (kind_ == GroupKind::Torus1) {
            const int kmax = static_cast<int>(std::floor(std::sqrt(std::max(0.0, eig_cut)) / (2.0 * M_PI)));
            for (int k = -kmax; k <= kmax; ++k)
                if (laplace_eig_of({k, 0}) <= eig_cut) out.push_back(make_dual({k, 0}));
        } else if (kind_ == GroupKind::Torus2) {
            const int kmax = static_cast<int>(std::floor(std::sqrt(std::max(0.0, eig_cut)) / (2.0 * M_PI)));
            for (int k1 = -kmax; k1 <= kmax; ++k1)
                for (int k2 = -kmax; k2 <= kmax; ++k2)
                    if (laplace_eig_of({k1, k2}) <= eig_cut) out.push_back(make_dual({k1, k2}));
        } else {
            for (int tl = 0;; ++tl) {
                const double l = 0.5 * tl;
                if (l * (l + 1.0) > eig_cut) break;
                out.push_back(make_dual({tl, 0}));
            }
        }
        std::stable_sort(out.begin(), out.end(), [](const DualIndex& a, const DualIndex& b) {
            if (a.laplace_eig != b.laplace_eig) return a.laplace_eig < b.laplace_eig;
            return a.label < b.label;
        });
        return out;
    }

    std::string label_string(const DualIndex& d) const {
        if (kind_ == GroupKind::Torus1) return std::to_string(d.label[0]);
        if (kind_ == GroupKind::Torus2)
            return "(" + std::to_string(d.label[0]) + "," + std::to_string(d.label[1]) + ")";
        if (d.label[0] % 2 == 0) return std::to_string(d.label[0] / 2);
        return std::to_string(d.label[0]) + "/2";
    }

    // Unitary representation matrix xi(x).
    Eigen::MatrixXcd rep_matrix(const DualIndex& xi, const GroupPoint& x) const {
        if (kind_ != GroupKind::SU2) {
            double phase = double(xi.label[0]) * x.c[0];
            if (kind_ == GroupKind::Torus2) phase += double(xi.label[1]) * x.c[1];
            Eigen::MatrixXcd m(1, 1);
            m(0, 0) = std::exp(cplx(0.0, 2.0 * M_PI * phase));
            return m;
        }
        const int tl = xi.label[0];
        const int n = tl + 1;
        Eigen::MatrixXcd m(n, n);
        const double al = x.c[0], be = x.c[1], ga = x.c[2];
        // rows and columns ordered m = +l ... -l, so D^{1/2} is the defining matrix
        for (int i = 0; i < n; ++i) {
            const int tmp = tl - 2 * i; // 2 m'
            for (int j = 0; j < n; ++j) {
                const int tm = tl - 2 * j; // 2 m
                const double d = detail::wigner_d(tl, tmp, tm, be);
                const cplx ph = std::exp(cplx(0.0, -0.5 * (tmp * al + tm * ga)));
                m(i, j) = ph * d;
            }
        }
        return m;
    }

    GroupPoint identity() const { return GroupPoint{}; }

    GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) const {
        if (kind_ != GroupKind::SU2) {
            GroupPoint p;
            for (int i = 0; i < torus_dim(); ++i) {
                double v = x.c[i] + y.c[i];
                v -= std::floor(v);
                p.c[i] = v;
            }
            return p;
        }
        return detail::euler_from_su2(detail::su2_matrix(x) * detail::su2_matrix(y));
    }

    GroupPoint inverse(const GroupPoint& x) const {
        if (kind_ != GroupKind::SU2) {
            GroupPoint p;
            for (int i = 0; i < torus_dim(); ++i) {
                double v = -x.c[i];
                v -= std::floor(v);
                p.c[i] = v;
            }
            return p;
        }
        return detail::euler_from_su2(detail::su2_matrix(x).adjoint());
    }

    GroupPoint random_point(Rng& rng) const {
        GroupPoint p;
        if (kind_ != GroupKind::SU2) {
            for (int i = 0; i < torus_dim(); ++i) p.c[i] = rng.uniform();
            return p;
        }
        p.c[0] = rng.uniform(0.0, 2.0 * M_PI);
        p.c[1] = std::acos(rng.uniform(-1.0, 1.0));
        p.c[2] = rng.uniform(0.0, 4.0 * M_PI);
        return p;
    }

    double distance(const GroupPoint& x, const GroupPoint& y) const {
        if (kind_ != GroupKind::SU2) {
            double s = 0.0;
            for (int i = 0; i < torus_dim(); ++i) {
                double d = std::abs(x.c[i] - y.c[i]);
                d = std::min(d, 1.0 - d);
                s += d * d;
            }
            return std::sqrt(s);
        }
        const cplx tr = (detail::su2_matrix(x) * detail::su2_matrix(y).adjoint()).trace();
        double c = 0.5 * std::abs(tr);
        c = std::clamp(c, 0.0, 1.0);
        return 2.0 * std::acos(c);
    }

    // Haar quadrature.  Torus: uniform product grid, exact for single modes
    // with |k|_inf <= resolution-1 (so products of two band-(R-1)/2 modes are
    // exact).  SU(2): uniform grids in alpha and gamma, Gauss-Legendre in
    // cos(beta); exact for products of Wigner entries of combined degree
    // l1+l2 <= resolution.
    QuadratureGrid haar_quadrature(int resolution) const {
        if (resolution < 2) throw BandlimitError("haar_quadrature: resolution must be >= 2");
        QuadratureGrid g;
        g.resolution = resolution;
        if (kind_ == GroupKind::Torus1) {
            g.band_limit = std::floor((resolution - 1) / 2.0);
            g.nodes.reserve(resolution);
            for (int i = 0; i < resolution; ++i) {
                GroupPoint p;
                p.c[0] = double(i) / resolution;
                g.nodes.push_back(p);
                g.weights.push_back(1.0 / resolution);
            }
        } else if (kind_ == GroupKind::Torus2) {
            g.band_limit = std::floor((resolution - 1) / 2.0);
            const double w = 1.0 / (double(resolution) * resolution);
            for (int i = 0; i < resolution; ++i)
                for (int j = 0; j < resolution; ++j) {
                    GroupPoint p;
                    p.c[0] = double(i) / resolution;
                    p.c[1] = double(j) / resolution;
                    g.nodes.push_back(p);
                    g.weights.push_back(w);
                }
        } else {
            g.band_limit = resolution;
            const int na = resolution + 1;
            const int ng = 2 * resolution + 1;
            const int nb = (resolution + 1) / 2 + 1;
            Quad1D qu = gauss_legendre(nb); // in u = cos(beta) on [-1,1]
            for (int ia = 0; ia < na; ++ia)
                for (int ib = 0; ib < nb; ++ib)
                    for (int ig = 0; ig < ng; ++ig) {
                        GroupPoint p;
                        p.c[0] = 2.0 * M_PI * ia / na;
                        p.c[1] = std::acos(std::clamp(qu.nodes[ib], -1.0, 1.0));
                        p.c[2] = 4.0 * M_PI * ig / ng;
                        g.nodes.push_back(p);
                        g.weights.push_back(qu.weights[ib] * 0.5 / (double(na) * ng));
                    }
        }
        return g;
    }

    // Largest dual admissible for transforms on this grid (both the function
    // band and the analysis duals live below it).
    bool dual_within_band(const DualIndex& d, const QuadratureGrid& grid) const {
        if (kind_ == GroupKind::SU2) return d.label[0] <= grid.band_limit; // 2 l_max <= resolution
        const int k = std::max(std::abs(d.label[0]), std::abs(d.label[1]));
        return k <= grid.band_limit;
    }

    ObservationSet observation_full(const QuadratureGrid& grid) const {
        ObservationSet o;
        o.descriptor.kind = OmegaDescriptor::Kind::Full;
        o.mask.assign(grid.nodes.size(), 1);
        CompensatedSum s;
        for (double w : grid.weights) s.add(w);
        o.measure = s.value();
        return o;
    }

    // Union of coordinate boxes on a torus.
    ObservationSet observation_arcs(const std::vector<std::array<double, 4>>& boxes,
                                    const QuadratureGrid& grid) const {
        if (kind_ == GroupKind::SU2)
            throw ConfigError("arc descriptors are only defined on torus backends");
        ObservationSet o;
        o.descriptor.kind = OmegaDescriptor::Kind::Arcs;
        o.descriptor.boxes = boxes;
        o.mask.assign(grid.nodes.size(), 0);
        CompensatedSum s;
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            bool in = false;
            for (const auto& b : boxes) {
                bool ok = grid.nodes[i].c[0] > b[0] && grid.nodes[i].c[0] < b[1];
                if (kind_ == GroupKind::Torus2) ok = ok && grid.nodes[i].c[1] > b[2] && grid.nodes[i].c[1] < b[3];
                if (ok) { in = true; break; }
            }
            if (in) {
                o.mask[i] = 1;
                s.add(grid.weights[i]);
            }
        }
        o.measure = s.value();
        o.empty = (o.measure == 0.0);
        return o;
    }

    // Open geodesic ball; a radius at or beyond the group diameter returns
    // the full group with a warning flag.
    ObservationSet geodesic_ball(const GroupPoint& center, double radius,
                                 const QuadratureGrid& grid) const {
        if (radius <= 0.0) throw std::invalid_argument("geodesic_ball: radius must be positive");
        ObservationSet o;
        o.descriptor.kind = OmegaDescriptor::Kind::Ball;
        o.descriptor.center = center;
        o.descriptor.radius = radius;
        const bool full = radius >= diameter();
        o.full_group_warning = full;
        o.mask.assign(grid.nodes.size(), 0);
        CompensatedSum s;
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            if (full || distance(center, grid.nodes[i]) < radius) {
                o.mask[i] = 1;
                s.add(grid.weights[i]);
            }
        }
        o.measure = s.value();
        o.empty = (o.measure == 0.0);
        return o;
    }

    // Closed-form Haar measure of a geodesic ball (the distance-convention
    // cap volume), used as an oracle in tests.
    double ball_measure_exact(double radius) const {
        switch (kind_) {
            case GroupKind::Torus1: return std::min(1.0, 2.0 * radius);
            case GroupKind::SU2: {
                const double r = std::min(radius, M_PI);
                return (r - std::sin(r)) / M_PI;
            }
            default:
                throw std::invalid_argument("ball_measure_exact: no closed form for this backend");
        }
    }

private:
    GroupKind kind_;
};

} // namespace gfc
