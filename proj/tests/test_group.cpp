#include <catch2/catch_amalgamated.hpp>

#include "gfc/fourier.hpp"
#include "gfc/group.hpp"

using namespace gfc;
using Catch::Approx;

namespace {

// order-4 central second derivative
template <typename F>
cplx second_derivative(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

} // namespace

TEST_CASE("torus dual enumeration") {
    auto b = GroupBackend::from_name("torus1");
    SECTION("bracket cut 1 keeps only the trivial representation") {
        auto d = b.enumerate_dual(1.0);
        REQUIRE(d.size() == 1);
        CHECK(d[0].label[0] == 0);
        CHECK(d[0].dim == 1);
        CHECK(d[0].laplace_eig == 0.0);
        CHECK(d[0].bracket == 1.0);
    }
    SECTION("laplacian eigenvalue 4 pi^2 k^2 against a finite-difference oracle") {
        auto d = b.enumerate_dual(30.0);
        const DualIndex* k3 = nullptr;
        for (const auto& x : d)
            if (x.label[0] == 3) k3 = &x;
        REQUIRE(k3 != nullptr);
        CHECK(k3->laplace_eig == Approx(36.0 * M_PI * M_PI).epsilon(1e-14));
        // -d^2/dx^2 e^{2 pi i 3 x} at a generic point
        auto f = [](double x) { return std::exp(cplx(0.0, 2.0 * M_PI * 3.0 * x)); };
        const double x0 = 0.137;
        const cplx lap = -second_derivative(f, x0, 1e-4);
        CHECK(std::abs(lap / f(x0) - cplx(36.0 * M_PI * M_PI, 0.0)) < 1e-3);
    }
    SECTION("bracket invariant") {
        for (const auto& x : b.enumerate_dual(40.0))
            CHECK(x.bracket * x.bracket - 1.0 == Approx(x.laplace_eig).margin(1e-9));
    }
    SECTION("enumeration is stable across calls") {
        auto d1 = b.enumerate_dual(25.0);
        auto d2 = b.enumerate_dual(25.0);
        REQUIRE(d1.size() == d2.size());
        for (std::size_t i = 0; i < d1.size(); ++i) CHECK(same_label(d1[i], d2[i]));
    }
    SECTION("cut below 1 is rejected") {
        CHECK_THROWS_AS(b.enumerate_dual(0.5), std::invalid_argument);
    }
    SECTION("unknown backend name") {
        CHECK_THROWS_AS(GroupBackend::from_name("so3"), ConfigError);
    }
}

TEST_CASE("su2 dual enumeration and casimir oracle") {
    auto b = GroupBackend::from_name("su2");
    auto d = b.enumerate_dual(2.0);
    REQUIRE(d.size() == 3);
    CHECK(d[0].dim == 1);
    CHECK(d[1].dim == 2);
    CHECK(d[2].dim == 3);
    CHECK(d[0].laplace_eig == Approx(0.0).margin(1e-15));
    CHECK(d[1].laplace_eig == Approx(0.75).epsilon(1e-14));
    CHECK(d[2].laplace_eig == Approx(2.0).epsilon(1e-14));

    // quadratic Casimir on matrix entries: sum over an orthonormal basis of
    // second derivatives along one-parameter subgroups equals -l(l+1)
    Rng rng(7, "test/casimir");
    GroupPoint x = b.random_point(rng);
    for (std::size_t which : {1u, 2u}) {
        const auto& xi = d[which];
        Eigen::MatrixXcd cas = Eigen::MatrixXcd::Zero(xi.dim, xi.dim);
        const double h = 1e-3;
        for (int j = 0; j < 3; ++j) {
            auto along = [&](double s) {
                Eigen::Matrix2cd sig = Eigen::Matrix2cd::Zero();
                if (j == 0) sig << 0, 1, 1, 0;
                if (j == 1) sig << 0, cplx(0, -1), cplx(0, 1), 0;
                if (j == 2) sig << 1, 0, 0, -1;
                // exp(-i s sigma_j / 2) = cos(s/2) I - i sin(s/2) sigma_j
                Eigen::Matrix2cd ex = std::cos(0.5 * s) * Eigen::Matrix2cd::Identity() -
                                      cplx(0, 1) * std::sin(0.5 * s) * sig;
                GroupPoint p = detail::euler_from_su2(detail::su2_matrix(x) * ex);
                return b.rep_matrix(xi, p);
            };
            cas -= (-along(2 * h) + 16.0 * along(h) - 30.0 * along(0.0) + 16.0 * along(-h) -
                    along(-2 * h)) /
                   (12.0 * h * h);
        }
        Eigen::MatrixXcd expect = xi.laplace_eig * b.rep_matrix(xi, x);
        CHECK((cas - expect).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("representation matrices") {
    SECTION("torus character at the unit") {
        auto b = GroupBackend::from_name("torus1");
        auto d = b.enumerate_dual(40.0);
        const DualIndex* k5 = nullptr;
        for (const auto& x : d)
            if (x.label[0] == 5) k5 = &x;
        REQUIRE(k5);
        auto m = b.rep_matrix(*k5, b.identity());
        CHECK(std::abs(m(0, 0) - cplx(1.0, 0.0)) < 1e-15);
    }
    SECTION("su2 identity gives the unit matrix") {
        auto b = GroupBackend::from_name("su2");
        auto d = b.enumerate_dual(2.0);
        auto m = b.rep_matrix(d[1], b.identity());
        CHECK((m - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("unitarity and homomorphism over random samples") {
        for (const char* name : {"torus2", "su2"}) {
            auto b = GroupBackend::from_name(name);
            auto duals = b.enumerate_dual(b.kind() == GroupKind::SU2 ? 4.0 : 20.0);
            Rng rng(11, "test/unitary");
            for (int s = 0; s < 8; ++s) {
                GroupPoint x = b.random_point(rng), y = b.random_point(rng);
                GroupPoint xy = b.multiply(x, y);
                for (const auto& d : duals) {
                    Eigen::MatrixXcd U = b.rep_matrix(d, x);
                    CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(d.dim, d.dim)).norm() <
                          1e-10);
                    CHECK((b.rep_matrix(d, xy) - U * b.rep_matrix(d, y)).cwiseAbs().maxCoeff() <
                          1e-9);
                }
            }
        }
    }
}

TEST_CASE("haar quadrature") {
    SECTION("torus resolution 8: uniform grid, exact orthogonality") {
        auto b = GroupBackend::from_name("torus1");
        auto g = b.haar_quadrature(8);
        REQUIRE(g.nodes.size() == 8);
        for (double w : g.weights) CHECK(w == Approx(0.125).epsilon(1e-15));
        cplx acc(0, 0);
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            acc += g.weights[i] * std::exp(cplx(0.0, 2.0 * M_PI * 3.0 * g.nodes[i].c[0]));
        CHECK(std::abs(acc) < 1e-14);
    }
    SECTION("weights sum to one") {
        for (const char* name : {"torus1", "torus2", "su2"}) {
            auto b = GroupBackend::from_name(name);
            auto g = b.haar_quadrature(name == std::string("su2") ? 12 : 16);
            CompensatedSum s;
            for (double w : g.weights) s.add(w);
            CHECK(std::abs(s.value() - 1.0) < 1e-12);
            for (double w : g.weights) CHECK(w > 0.0);
        }
    }
    SECTION("peter-weyl normalisation on su2: int |D^1_{00}|^2 = 1/3") {
        auto b = GroupBackend::from_name("su2");
        auto g = b.haar_quadrature(12);
        auto d = b.enumerate_dual(2.0);
        CompensatedSum s;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            s.add(g.weights[i] * std::norm(b.rep_matrix(d[2], g.nodes[i])(1, 1)));
        CHECK(std::abs(s.value() - 1.0 / 3.0) < 1e-10);
    }
    SECTION("resolution below 2 is refused") {
        auto b = GroupBackend::from_name("torus1");
        CHECK_THROWS_AS(b.haar_quadrature(1), BandlimitError);
    }
}

TEST_CASE("observation sets") {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    SECTION("arc of radius 0.25 around 0 has measure about one half") {
        auto o = b.geodesic_ball(b.identity(), 0.25, g);
        CHECK(std::abs(o.measure - 0.5) < 2.0 / 256);
        CHECK_FALSE(o.full_group_warning);
    }
    SECTION("radius at the diameter returns the full group with a warning") {
        auto o = b.geodesic_ball(b.identity(), 0.5, g);
        CHECK(o.measure == Approx(1.0).epsilon(1e-12));
        CHECK(o.full_group_warning);
    }
    SECTION("mask monotone in the radius") {
        auto o1 = b.geodesic_ball(b.identity(), 0.1, g);
        auto o2 = b.geodesic_ball(b.identity(), 0.3, g);
        for (std::size_t i = 0; i < o1.mask.size(); ++i)
            if (o1.mask[i]) CHECK(o2.mask[i]);
    }
    SECTION("arcs descriptor") {
        auto o = b.observation_arcs({{0.0, 0.3, 0.0, 1.0}}, g);
        CHECK(std::abs(o.measure - 0.3) < 2.0 / 256);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const bool in = g.nodes[i].c[0] > 0.0 && g.nodes[i].c[0] < 0.3;
            CHECK(static_cast<bool>(o.mask[i]) == in);
        }
    }
    SECTION("su2 cap volume against the closed form (r - sin r)/pi") {
        auto s = GroupBackend::from_name("su2");
        auto sg = s.haar_quadrature(16);
        Rng rng(3, "test/cap");
        GroupPoint c = s.random_point(rng);
        for (double r : {0.6, 1.2, 2.0, 2.8}) {
            auto o = s.geodesic_ball(c, r, sg);
            CHECK(std::abs(o.measure - s.ball_measure_exact(r)) < 0.03);
        }
        auto full = s.geodesic_ball(c, M_PI, sg);
        CHECK(full.measure == Approx(1.0).epsilon(1e-12));
        CHECK(full.full_group_warning);
    }
    SECTION("nonpositive radius is rejected") {
        CHECK_THROWS_AS(b.geodesic_ball(b.identity(), 0.0, g), std::invalid_argument);
    }
}
