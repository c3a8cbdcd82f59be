// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerance in code and carries its own
// runtime budget.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "gfc/experiments.hpp"

using namespace gfc;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    double budget_seconds;
    bool (*body)(std::string& detail);
};

void run(const Criterion& c, int index) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = c.body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over budget");
    }
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", index, c.name, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

Eigen::VectorXcd random_unit(Rng& rng, Eigen::Index n) {
    Eigen::VectorXcd a(n);
    for (Eigen::Index j = 0; j < n; ++j) a[j] = cplx(rng.normal(), rng.normal());
    a.normalize();
    return a;
}

// --- 1 ------------------------------------------------------------------
bool fourier_roundtrip(std::string& detail) {
    auto t = GroupBackend::from_name("torus1");
    auto tg = t.haar_quadrature(256);
    auto td = t.enumerate_dual(std::sqrt(1.0 + 4 * M_PI * M_PI * 64.0 * 64.0) + 1e-9);
    Rng rng(2024, "acceptance/roundtrip");
    FourierCoefficients co;
    co.duals = td;
    for (std::size_t i = 0; i < td.size(); ++i)
        co.entries.push_back(cplx(rng.normal(), rng.normal()) * Eigen::MatrixXcd::Identity(1, 1));
    auto f = synthesize_on_grid(t, co, tg);
    auto back = fourier_transform(t, tg, f, td);
    double dev = 0.0;
    for (std::size_t i = 0; i < td.size(); ++i)
        dev = std::max(dev, (back.entries[i] - co.entries[i]).cwiseAbs().maxCoeff());
    dev /= co.l2_norm();
    const double parseval_t = std::abs(l2_norm_sq_on_grid(tg, f) - co.l2_norm_sq()) / co.l2_norm_sq();

    auto s = GroupBackend::from_name("su2");
    auto sg = s.haar_quadrature(16);
    auto sd = s.enumerate_dual(std::sqrt(1.0 + 3.0 * 4.0)); // l <= 3
    FourierCoefficients sco;
    sco.duals = sd;
    for (const auto& d : sd) {
        Eigen::MatrixXcd m(d.dim, d.dim);
        for (int r = 0; r < d.dim; ++r)
            for (int c = 0; c < d.dim; ++c) m(r, c) = cplx(rng.normal(), rng.normal());
        sco.entries.push_back(m);
    }
    auto sf = synthesize_on_grid(s, sco, sg);
    auto sback = fourier_transform(s, sg, sf, sd);
    double sdev = 0.0;
    for (std::size_t i = 0; i < sd.size(); ++i)
        sdev = std::max(sdev, (sback.entries[i] - sco.entries[i]).cwiseAbs().maxCoeff());
    sdev /= sco.l2_norm();
    const double parseval_s =
        std::abs(l2_norm_sq_on_grid(sg, sf) - sco.l2_norm_sq()) / sco.l2_norm_sq();

    detail = "torus " + fmt_double(std::max(dev, parseval_t)) + ", su2 " +
             fmt_double(std::max(sdev, parseval_s));
    return std::max(dev, parseval_t) <= 1e-10 && std::max(sdev, parseval_s) <= 1e-8;
}

// --- 2 ------------------------------------------------------------------
bool eigenmode_contract(std::string& detail) {
    double worst_eig = 0.0, worst_gram = 0.0;
    {
        auto b = GroupBackend::from_name("torus1");
        auto g = b.haar_quadrature(256);
        auto d = b.enumerate_dual(160.0);
        auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
        auto sub = build_subspace(op, 26.0, b, g);
        for (const auto& mode : sub.modes) {
            FourierCoefficients e;
            e.duals = {mode.dual};
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(mode.dual.dim, mode.dual.dim);
            m.col(mode.row) = mode.col_mix / std::sqrt(double(mode.dual.dim));
            e.entries = {m};
            auto Ae = apply_operator(op, e);
            Ae.entries[0] -= mode.eigenvalue * e.entries[0];
            worst_eig = std::max(worst_eig, Ae.l2_norm() / std::max(1.0, mode.eigenvalue));
        }
        auto full = b.observation_full(g);
        auto gram = gram_on_set(sub, full, g);
        worst_gram = std::max(
            worst_gram, (gram.matrix - Eigen::MatrixXcd::Identity(gram.matrix.rows(),
                                                                  gram.matrix.cols()))
                            .cwiseAbs()
                            .maxCoeff());
    }
    {
        auto b = GroupBackend::from_name("su2");
        auto g = b.haar_quadrature(12);
        auto d = b.enumerate_dual(4.0);
        auto op = make_operator("diag_perturbed", {.m = 2.0, .c = 1.0, .eta = 0.3, .seed = 11}, b, d);
        auto sub = build_subspace(op, 2.5, b, g);
        for (const auto& mode : sub.modes) {
            FourierCoefficients e;
            e.duals = {mode.dual};
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(mode.dual.dim, mode.dual.dim);
            m.col(mode.row) = mode.col_mix / std::sqrt(double(mode.dual.dim));
            e.entries = {m};
            auto Ae = apply_operator(op, e);
            Ae.entries[0] -= mode.eigenvalue * e.entries[0];
            worst_eig = std::max(worst_eig, Ae.l2_norm() / std::max(1.0, mode.eigenvalue));
        }
        auto full = b.observation_full(g);
        auto gram = gram_on_set(sub, full, g);
        worst_gram = std::max(
            worst_gram, (gram.matrix - Eigen::MatrixXcd::Identity(gram.matrix.rows(),
                                                                  gram.matrix.cols()))
                            .cwiseAbs()
                            .maxCoeff());
    }
    detail = "eig " + fmt_double(worst_eig) + ", gram " + fmt_double(worst_gram);
    return worst_eig <= 1e-10 && worst_gram <= 1e-8;
}

// --- 3 ------------------------------------------------------------------
bool analytic_gram(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
    std::vector<std::array<int, 3>> picks;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i].label[0] == 0 || d[i].label[0] == 1) picks.push_back({int(i), 0, 0});
    auto sub = subspace_from_modes(op, picks, b, g);
    auto gram = gram_on_arcs_exact(sub, {{0.0, 0.5, 0.0, 1.0}}, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram.matrix, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[1];
    detail = fmt_double(lo) + " / " + fmt_double(hi);
    return std::abs(lo - (0.5 - 1.0 / M_PI)) <= 1e-9 && std::abs(hi - (0.5 + 1.0 / M_PI)) <= 1e-9;
}

// --- 4 ------------------------------------------------------------------
bool rayleigh_oracle(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
    auto s2 = GroupBackend::from_name("su2");
    auto g2 = s2.haar_quadrature(12);
    auto d2 = s2.enumerate_dual(4.0);
    auto op2 = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, s2, d2);

    struct Inst {
        SpectralSubspace sub;
        GramMatrix gram;
    };
    std::vector<Inst> instances;
    for (double lam : {13.0, 19.0, 26.0}) {
        Inst in{build_subspace(op, lam, b, g), {}};
        in.gram = gram_on_set(in.sub, b.observation_arcs({{0.0, 0.3, 0.0, 1.0}}, g), g);
        instances.push_back(std::move(in));
    }
    {
        Inst in{build_subspace(op, 19.0, b, g), {}};
        in.gram = gram_on_set(in.sub, b.observation_arcs({{0.4, 0.9, 0.0, 1.0}}, g), g);
        instances.push_back(std::move(in));
    }
    {
        Inst in{build_subspace(op2, 2.5, s2, g2), {}};
        in.gram = gram_on_set(in.sub, s2.geodesic_ball(s2.identity(), 1.5, g2), g2);
        instances.push_back(std::move(in));
    }
    Rng rng(777, "acceptance/rayleigh");
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& in : instances) {
        auto obs = observability_from_gram(in.gram);
        for (int t = 0; t < 1000; ++t) {
            Eigen::VectorXcd a = random_unit(rng, in.gram.matrix.rows());
            const double q = (a.adjoint() * in.gram.matrix * a)(0, 0).real();
            margin = std::min(margin, q - obs.lam_min);
        }
    }
    detail = "worst margin " + fmt_double(margin);
    return margin >= -1e-10;
}

// --- 5 ------------------------------------------------------------------
bool loewner_chain(std::string& detail) {
    bool ok = true;
    {
        auto b = GroupBackend::from_name("torus1");
        auto g = b.haar_quadrature(256);
        auto d = b.enumerate_dual(160.0);
        auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
        auto sub = build_subspace(op, 13.0, b, g);
        double prev = -1.0;
        for (double hi : {0.2, 0.45, 0.8}) {
            auto obs = observability_constant(sub, b.observation_arcs({{0.1, hi, 0.0, 1.0}}, g), g);
            ok = ok && obs.lam_min >= prev - 1e-10;
            prev = obs.lam_min;
        }
    }
    {
        auto b = GroupBackend::from_name("su2");
        auto g = b.haar_quadrature(12);
        auto d = b.enumerate_dual(4.0);
        auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
        auto sub = build_subspace(op, 2.5, b, g);
        double prev = -1.0;
        for (double r : {1.0, 1.8, 2.6}) {
            auto obs = observability_constant(sub, b.geodesic_ball(b.identity(), r, g), g);
            ok = ok && obs.lam_min >= prev - 1e-10;
            prev = obs.lam_min;
        }
    }
    return ok;
}

// --- 6 ------------------------------------------------------------------
bool spectral_envelope(std::string& detail) {
    ExperimentConfig cfg; // torus1, omega (0,0.3), 8 lambda points, duals |k| <= 24
    auto out = run_spectral_constant(cfg);
    json j = json::parse(out.files[1].content);
    const double C1 = j["C1"], C2 = j["C2"];
    if (!std::isfinite(C2)) return false;
    // re-derive rows, check envelope slack and the underflow floor
    std::istringstream in(out.files[0].content);
    std::string line;
    std::getline(in, line);
    bool ok = true;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        const double lambda = std::stod(cells[0]);
        const double lam_min = std::stod(cells[2]);
        const int n_modes = std::stoi(cells[1]);
        const bool underflow = cells[5] == "1";
        ok = ok && !underflow && lam_min >= 1e-13 * n_modes;
        const double y = -0.5 * std::log(lam_min);
        ok = ok && (y <= std::log(C1) + C2 * lambda + 1e-9);
    }
    detail = "C1 " + fmt_double(C1) + ", C2 " + fmt_double(C2);
    return ok;
}

// --- 7 ------------------------------------------------------------------
bool contour_calculus(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto d = b.enumerate_dual(std::sqrt(1.0 + 4 * M_PI * M_PI * 256.0) + 1e-9); // |k| <= 16
    auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
    ContourSpec spec;
    spec.epsilon = 1e-4;
    double worst = 0.0;
    for (double zre : {-1.0, -0.5}) {
        auto sym = contour_power_symbol(op, cplx(zre, 0.0), spec);
        auto dir = direct_power(op, cplx(zre, 0.0));
        for (std::size_t i = 0; i < d.size(); ++i)
            worst = std::max(worst, (sym[i] - dir.symbol[i]).cwiseAbs().maxCoeff() /
                                        dir.symbol[i].cwiseAbs().maxCoeff());
    }
    SpectralOperator scalar;
    scalar.duals = {b.make_dual({0, 0})};
    scalar.symbol = {4.0 * Eigen::MatrixXcd::Identity(1, 1)};
    scalar.order = 1.0;
    scalar.positivity_floor = 4.0;
    double scalar_dev = 0.0;
    for (double zre : {-1.0, -0.5}) {
        auto sym = contour_power_symbol(scalar, cplx(zre, 0.0), spec);
        scalar_dev = std::max(scalar_dev, std::abs(sym[0](0, 0) - std::pow(4.0, zre)));
    }
    detail = "rel " + fmt_double(worst) + ", scalar " + fmt_double(scalar_dev);
    return worst <= 1e-6 && scalar_dev <= 1e-8;
}

// --- 8 ------------------------------------------------------------------
bool semigroup_law(std::string& detail) {
    auto b = GroupBackend::from_name("su2");
    auto d = b.enumerate_dual(3.0);
    auto op = make_operator("diag_perturbed", {.m = 2.0, .c = 1.0, .eta = 0.3, .seed = 5}, b, d);
    Rng rng(1234, "acceptance/semigroup");
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        const cplx z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        const cplx w(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        auto pz = direct_power(op, z);
        auto pw = direct_power(op, w);
        auto pzw = direct_power(op, z + w);
        for (std::size_t i = 0; i < d.size(); ++i)
            worst = std::max(worst,
                             (pz.symbol[i] * pw.symbol[i] - pzw.symbol[i]).cwiseAbs().maxCoeff());
    }
    detail = fmt_double(worst);
    return worst <= 1e-10;
}

// --- 9 ------------------------------------------------------------------
bool cancellation(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto op = make_operator("laplacian_power", {.m = 2.0}, b, d);
    auto sub = build_subspace(op, 2.0 * M_PI * 3.0 + 0.1, b, g);
    Rng rng(55, "acceptance/cancellation");
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto f = sinh_extension(sub, random_unit(rng, 7), 1.0);
        worst = std::max(worst, check_cancellation(f).residual_rel);
    }
    detail = fmt_double(worst);
    return worst <= 1e-10;
}

// --- 10 -----------------------------------------------------------------
bool symmetry(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto op = make_operator("laplacian_power", {.m = 2.0}, b, d);
    auto sub = build_subspace(op, 2.0 * M_PI * 3.0 + 0.1, b, g);
    Rng rng(66, "acceptance/symmetry");
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        auto f = with_cutoff(sinh_extension(sub, random_unit(rng, 7), 1.0), make_cutoff(0.5, 1.0));
        SymmetryReport r = check_symmetry(f);
        if (r.lhs > 0.0) worst = std::max(worst, std::abs(r.lhs - 2.0 * r.rhs) / r.lhs);
    }
    detail = fmt_double(worst);
    return worst <= 1e-12;
}

// --- 11 -----------------------------------------------------------------
bool cutoff_contract(std::string& detail) {
    double worst = 0.0;
    double m0 = 0.0;
    std::vector<double> normalised;
    for (double eps : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        CutoffSpec s = make_cutoff(eps, 1.0);
        if (!(s.psi0 > 0.0 && s.psi0 < eps)) return false;
        for (double t : {0.0, 0.3, 0.77, 1.0})
            if (cutoff_psi(s, t, 0) != s.psi0) return false;
        if (cutoff_psi(s, 1.0 + eps, 0) != 0.0) return false;
        for (int i = 1; i <= 4; ++i)
            worst = std::max(worst, std::abs(cutoff_psi(s, std::nextafter(1.0, 2.0), i)) /
                                        std::max(1.0, s.psi0));
        double v = 0.0;
        for (int i = 1; i <= 4; ++i) v = std::max(v, cutoff_sup_derivative(s, i) / s.psi0);
        if (!std::isfinite(v)) return false;
        normalised.push_back(v);
        m0 = std::max(m0, v);
    }
    for (double v : normalised)
        if (v > m0) return false;
    detail = "dT " + fmt_double(worst) + ", M0 " + fmt_double(m0);
    return worst <= 1e-9;
}

// --- 12 -----------------------------------------------------------------
bool hum_identity(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto lap = make_operator("laplacian_power", {.m = 2.0}, b, d);

    // closed-form full-observation single mode
    GramMatrix one;
    one.matrix = Eigen::MatrixXcd::Identity(1, 1);
    ControlProblem p1;
    p1.T = 1.0;
    p1.mu = Eigen::VectorXd::Ones(1);
    p1.u0 = Eigen::VectorXcd::Ones(1);
    auto r1 = hum_control(one, p1);
    const double closed = std::sqrt(std::exp(-2.0) * 2.0 / (1.0 - std::exp(-2.0)));
    bool ok = std::abs(r1.cost - closed) <= 1e-8;

    auto check_problem = [&](const SpectralSubspace& sub, const GramMatrix& gram) {
        ControlProblem p = make_control_problem(
            sub, 1.0, 1.0,
            Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(sub.size())).normalized());
        auto r = hum_control(gram, p);
        Eigen::MatrixXcd G = control_gramian(gram.matrix, p.mu, p.T);
        const double viaPhi = (r.phi.adjoint() * G * r.phi)(0, 0).real();
        const double dev = std::abs(r.cost * r.cost - viaPhi) / std::max(1e-300, r.cost * r.cost);
        return dev <= 1e-8 && r.terminal_residual <= 1e-8;
    };
    {
        std::vector<std::array<int, 3>> picks;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i].label[0] == 0 || d[i].label[0] == 1) picks.push_back({int(i), 0, 0});
        auto sub = subspace_from_modes(lap, picks, b, g);
        ok = ok && check_problem(sub, gram_on_set(sub, b.observation_arcs({{0.0, 0.5, 0.0, 1.0}}, g), g));
    }
    {
        auto sub = build_subspace(lap, 2.0 * M_PI * 3.0 + 0.1, b, g);
        ok = ok && check_problem(sub, gram_on_set(sub, b.observation_arcs({{0.0, 0.3, 0.0, 1.0}}, g), g));
    }
    detail = "closed-form cost " + fmt_double(r1.cost);
    return ok;
}

// --- 13 -----------------------------------------------------------------
bool duality(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto lap = make_operator("laplacian_power", {.m = 2.0}, b, d);
    auto shifted = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
    Rng rng(888, "acceptance/duality");
    double worst_rel = 0.0;

    struct System {
        SpectralSubspace sub;
        GramMatrix gram;
        double alpha;
        double T;
    };
    std::vector<System> systems;
    {
        auto sub = build_subspace(lap, 2.0 * M_PI * 3.0 + 0.1, b, g);
        auto gram = gram_on_set(sub, b.observation_arcs({{0.0, 0.3, 0.0, 1.0}}, g), g);
        systems.push_back({std::move(sub), std::move(gram), 1.0, 1.0});
    }
    {
        auto sub = build_subspace(shifted, 19.0, b, g);
        auto gram = gram_on_set(sub, b.observation_arcs({{0.2, 0.7, 0.0, 1.0}}, g), g);
        systems.push_back({std::move(sub), std::move(gram), 0.75, 0.6});
    }
    {
        auto sub = build_subspace(shifted, 13.0, b, g);
        auto gram = gram_on_set(sub, b.observation_full(g), g);
        systems.push_back({std::move(sub), std::move(gram), 1.0, 0.8});
    }
    for (const auto& sys : systems) {
        ControlProblem base = make_control_problem(
            sys.sub, sys.alpha, sys.T,
            Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(sys.sub.size())).normalized());
        auto oc = observability_cost(sys.gram, base.mu, base.T);
        double worst_cost = 0.0;
        for (int t = 0; t < 200; ++t) {
            ControlProblem p = base;
            p.u0 = random_unit(rng, p.u0.size());
            worst_cost = std::max(worst_cost, hum_control(sys.gram, p).cost);
        }
        // pencil power iteration for the maximiser
        Eigen::MatrixXcd G = control_gramian(sys.gram.matrix, base.mu, base.T);
        Eigen::MatrixXcd E2 = Eigen::MatrixXcd::Zero(G.rows(), G.cols());
        for (Eigen::Index j = 0; j < G.rows(); ++j)
            E2(j, j) = std::exp(-2.0 * base.T * base.mu[j]);
        Eigen::VectorXcd v = random_unit(rng, G.rows());
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(G);
        for (int it = 0; it < 80; ++it) v = lu.solve(E2 * v).normalized();
        ControlProblem pv = base;
        pv.u0 = heat_propagate(v, base.T, base.mu).normalized(); // costliest u0 is E v
        worst_cost = std::max(worst_cost, hum_control(sys.gram, pv).cost);
        if (worst_cost > oc.C_T * (1.0 + 1e-6)) return false;
        worst_rel = std::max(worst_rel, std::abs(worst_cost - oc.C_T) / oc.C_T);
    }
    detail = "max rel gap " + fmt_double(worst_rel);
    return worst_rel <= 1e-6;
}

// --- 14 -----------------------------------------------------------------
bool cost_blowup(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto g = b.haar_quadrature(256);
    auto d = b.enumerate_dual(160.0);
    auto lap = make_operator("laplacian_power", {.m = 2.0}, b, d);
    auto sub = build_subspace(lap, 2.0 * M_PI * 3.0 + 0.1, b, g);
    auto gram = gram_on_set(sub, b.observation_arcs({{0.0, 0.3, 0.0, 1.0}}, g), g);
    const std::vector<double> T_grid = {0.8, 0.4, 0.2, 0.1, 0.05};
    auto mu_for = [&](double alpha) {
        Eigen::VectorXd mu(static_cast<Eigen::Index>(sub.size()));
        for (std::size_t j = 0; j < sub.size(); ++j)
            mu[static_cast<Eigen::Index>(j)] = std::pow(sub.modes[j].eigenvalue, alpha);
        return mu;
    };
    CostFit f20 = cost_scan(gram, mu_for(1.0), T_grid, 2.0);
    for (std::size_t i = 1; i < f20.costs.size(); ++i)
        if (!(f20.costs[i] > f20.costs[i - 1])) return false;
    for (std::size_t i = 0; i < f20.costs.size(); ++i)
        if (std::log(f20.costs[i]) >
            std::log(f20.C1) + f20.C2 * std::pow(f20.T_grid[i], -f20.beta_hat) + 1e-9)
            return false;
    CostFit f12 = cost_scan(gram, mu_for(0.6), T_grid, 1.2);
    detail = "beta(1.2) " + fmt_double(f12.beta_hat) + " > beta(2.0) " + fmt_double(f20.beta_hat);
    return f12.beta_hat > f20.beta_hat;
}

// --- 15 -----------------------------------------------------------------
bool spacetime_bounds(std::string& detail) {
    auto b = GroupBackend::from_name("torus1");
    auto d = b.enumerate_dual(40.0);
    auto op = make_operator("shifted_power", {.m = 2.0, .c = 1.0}, b, d);
    auto rep = check_spacetime_bounds(op, 1.0, {0.25, 0.5}, 24);
    detail = "sup_i " + fmt_double(rep.sup_inverse) + " <= " + fmt_double(rep.bound_inverse);
    return !rep.unbounded && rep.sup_inverse <= rep.bound_inverse + 1e-12 &&
           rep.refine_change_inverse < 0.01 && rep.refine_change_quotient < 0.01;
}

// --- 16 -----------------------------------------------------------------
bool determinism(std::string& detail) {
    ExperimentConfig cfg;
    cfg.lambda_grid = "3.2,9.7,16.2,22.7";
    cfg.doubling_trials = 2;
    cfg.doubling_ascent_steps = 10;
    using Runner = RunOutput (*)(const ExperimentConfig&);
    const std::vector<std::pair<const char*, Runner>> runners = {
        {"verify", &run_verify},           {"spectral-constant", &run_spectral_constant},
        {"doubling", &run_doubling},       {"control", &run_control},
        {"cost-scan", &run_cost_scan},     {"cutoff", &run_cutoff},
        {"dual-table", &run_dual_table},   {"power-check", &run_power_check},
    };
    for (const auto& [name, fn] : runners) {
        global_thread_count() = 1;
        auto a = fn(cfg);
        auto brun = fn(cfg);
        global_thread_count() = 4;
        auto c = fn(cfg);
        global_thread_count() = 1;
        if (a.files.size() != brun.files.size() || a.files.size() != c.files.size()) {
            detail = std::string(name) + ": file count drift";
            return false;
        }
        for (std::size_t i = 0; i < a.files.size(); ++i)
            if (a.files[i].content != brun.files[i].content ||
                a.files[i].content != c.files[i].content) {
                detail = std::string(name) + ": " + a.files[i].name + " differs";
                return false;
            }
    }
    return true;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"fourier roundtrip / parseval", 5.0, &fourier_roundtrip},
        {"eigenmode contract and full-group gram", 5.0, &eigenmode_contract},
        {"analytic gram oracle 1/2 +- 1/pi", 1.0, &analytic_gram},
        {"rayleigh oracle over 5 instances", 60.0, &rayleigh_oracle},
        {"loewner monotonicity on nested chains", 60.0, &loewner_chain},
        {"spectral-constant envelope", 60.0, &spectral_envelope},
        {"contour vs direct functional calculus", 10.0, &contour_calculus},
        {"semigroup law of complex powers", 10.0, &semigroup_law},
        {"cancellation identity", 10.0, &cancellation},
        {"symmetry identity", 10.0, &symmetry},
        {"cut-off contract", 5.0, &cutoff_contract},
        {"hum identity and terminal exactness", 30.0, &hum_identity},
        {"duality of cost and observability", 120.0, &duality},
        {"cost blow-up over short horizons", 120.0, &cost_blowup},
        {"space-time operator norm bounds", 30.0, &spacetime_bounds},
        {"byte-exact determinism across runs and threads", 300.0, &determinism},
    };
    for (std::size_t i = 0; i < criteria.size(); ++i) run(criteria[i], static_cast<int>(i) + 1);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
