#include <doctest.h>

#include <cmath>
#include <random>

#include "chemoctrl/errors.hpp"
#include "chemoctrl/objective.hpp"
#include "chemoctrl/operators.hpp"
#include "chemoctrl/tangent_adjoint.hpp"
#include "test_support.hpp"

using namespace chemoctrl;
using namespace testsupport;

namespace {

// Base problem shared by the linearization tests.
struct BaseCase {
    Grid g;
    TimeGrid tg;
    Control f;
    Trajectory traj;

    BaseCase(std::vector<std::int64_t> dims, int steps, double horizon, FluxScheme scheme,
             unsigned seed)
        : g(std::move(dims), std::vector<double>(1, 1.0)), tg(horizon, steps), f(g, tg),
          traj(g, tg) {
        std::mt19937_64 rng(seed);
        g.set_control_box({0.2}, {0.8});
        f = random_control(g, tg, rng, 0.5);
        ScalarField u0 = smooth_bump(g, 1.0, 0.12, 0.4);
        ScalarField v0 = smooth_bump(g, 0.6, 0.15, 0.3);
        SchemeOptions opts;
        opts.flux = scheme;
        opts.helmholtz_tol = 1e-12;
        traj = simulate(u0, v0, f, tg, opts);
    }

    SchemeOptions opts(FluxScheme scheme) const {
        SchemeOptions o;
        o.flux = scheme;
        o.helmholtz_tol = 1e-12;
        return o;
    }
};

double spacetime_pair(const std::vector<ScalarField>& a, const std::vector<ScalarField>& b,
                      const TimeGrid& tg) {
    return spacetime_dot(a, b, tg);
}

}  // namespace

TEST_SUITE("tangent_adjoint") {

TEST_CASE("one step and its transpose satisfy the pairing identity") {
    std::mt19937_64 rng(51);
    for (auto scheme : {FluxScheme::central, FluxScheme::upwind}) {
        BaseCase base({48}, 10, 0.4, scheme, 52);
        const double dt = base.tg.dt();
        SchemeOptions opts = base.opts(scheme);

        const auto& u0 = base.traj.u[3];
        const auto& v0 = base.traj.v[3];
        const auto& v1 = base.traj.v[4];
        const auto& f3 = base.f.f[3];

        ScalarField U = random_field(base.g, rng);
        ScalarField V = random_field(base.g, rng);
        ScalarField xu = random_field(base.g, rng);
        ScalarField xv = random_field(base.g, rng);

        TangentStepResult fwd =
            tangent_step(u0, v0, v1, f3, U, V, nullptr, nullptr, nullptr, dt, opts);
        TangentStepResult bwd = tangent_step_transpose(u0, v0, v1, f3, xu, xv, dt, opts);

        const double lhs = dot_volume(fwd.U, xu) + dot_volume(fwd.V, xv);
        const double rhs = dot_volume(U, bwd.U) + dot_volume(V, bwd.V);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("linearized march is superposable") {
    BaseCase base({32}, 8, 0.25, FluxScheme::central, 53);
    std::mt19937_64 rng(54);
    SchemeOptions opts = base.opts(FluxScheme::central);

    Control F1 = random_control(base.g, base.tg, rng, 1.0);
    Control F2 = random_control(base.g, base.tg, rng, 1.0);
    Control mix(base.g, base.tg);
    const double a = 0.7, b = -1.3;
    for (std::size_t n = 0; n < mix.f.size(); ++n)
        for (std::int64_t c = 0; c < base.g.cell_count(); ++c)
            mix.f[n][c] = a * F1.f[n][c] + b * F2.f[n][c];

    TangentPair t1 = solve_linearized(base.traj, base.f, &F1, nullptr, nullptr, nullptr, nullptr, opts);
    TangentPair t2 = solve_linearized(base.traj, base.f, &F2, nullptr, nullptr, nullptr, nullptr, opts);
    TangentPair tm = solve_linearized(base.traj, base.f, &mix, nullptr, nullptr, nullptr, nullptr, opts);

    double err = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < tm.U.size(); ++n) {
        for (std::int64_t c = 0; c < base.g.cell_count(); ++c) {
            err = std::max(err, std::fabs(tm.U[n][c] - (a * t1.U[n][c] + b * t2.U[n][c])));
            err = std::max(err, std::fabs(tm.V[n][c] - (a * t1.V[n][c] + b * t2.V[n][c])));
            scale = std::max(scale, std::fabs(tm.U[n][c]) + std::fabs(tm.V[n][c]));
        }
    }
    CHECK(err <= 1e-12 * (scale + 1.0));
}

TEST_CASE("linearized march is the derivative of the forward march") {
    BaseCase base({40}, 12, 0.3, FluxScheme::central, 55);
    std::mt19937_64 rng(56);
    SchemeOptions opts = base.opts(FluxScheme::central);
    Control dir = random_control(base.g, base.tg, rng, 1.0);

    TangentPair lin =
        solve_linearized(base.traj, base.f, &dir, nullptr, nullptr, nullptr, nullptr, opts);

    ScalarField u0 = base.traj.u.front();
    ScalarField v0 = base.traj.v.front();

    auto one_sided_error = [&](double sigma) {
        Control shifted = base.f;
        for (std::size_t n = 0; n < shifted.f.size(); ++n)
            for (std::int64_t c = 0; c < base.g.cell_count(); ++c)
                shifted.f[n][c] += sigma * dir.f[n][c];
        Trajectory bumped = simulate(u0, v0, shifted, base.tg, opts);
        double err = 0.0;
        for (std::size_t n = 0; n < bumped.u.size(); ++n) {
            for (std::int64_t c = 0; c < base.g.cell_count(); ++c) {
                err = std::max(err, std::fabs((bumped.u[n][c] - base.traj.u[n][c]) / sigma -
                                              lin.U[n][c]));
                err = std::max(err, std::fabs((bumped.v[n][c] - base.traj.v[n][c]) / sigma -
                                              lin.V[n][c]));
            }
        }
        return err;
    };

    // One-sided differences converge at first order in sigma.
    const double e1 = one_sided_error(2e-2);
    const double e2 = one_sided_error(1e-2);
    const double e3 = one_sided_error(5e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.35));
    CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("adjoint terminal slots are exactly zero") {
    BaseCase base({32}, 6, 0.2, FluxScheme::central, 57);
    TargetData targets = TargetData::constant(base.g, base.tg, 2.0, 1.0);
    ObjectiveWeights w;
    w.alpha_u = 1.0;
    w.alpha_v = 0.5;
    w.alpha_f = 0.1;
    AdjointPair adj = solve_adjoint(base.traj, base.f, targets, w, base.opts(FluxScheme::central));
    REQUIRE(adj.lambda.size() == static_cast<std::size_t>(base.tg.nodes()));
    const auto& last_l = adj.lambda.back();
    const auto& last_e = adj.eta.back();
    for (std::int64_t c = 0; c < base.g.cell_count(); ++c) {
        CHECK(last_l[c] == 0.0);
        CHECK(last_e[c] == 0.0);
    }
}

TEST_CASE("adjoint states pair exactly with linearized sources") {
    for (auto scheme : {FluxScheme::central, FluxScheme::upwind}) {
        BaseCase base({36}, 9, 0.3, scheme, 58);
        std::mt19937_64 rng(59);
        SchemeOptions opts = base.opts(scheme);

        TargetData targets = TargetData::constant(base.g, base.tg, 2.5, 1.5);
        ObjectiveWeights w;
        w.alpha_u = 0.8;
        w.alpha_v = 0.6;
        w.alpha_f = 0.05;

        AdjointPair adj = solve_adjoint(base.traj, base.f, targets, w, opts);

        std::vector<ScalarField> gu, gv;
        for (int n = 0; n < base.tg.nodes(); ++n) {
            gu.push_back(random_field(base.g, rng));
            gv.push_back(random_field(base.g, rng));
        }
        TangentPair lin =
            solve_linearized(base.traj, base.f, nullptr, nullptr, nullptr, &gu, &gv, opts);

        // Derivative of the tracking terms along (U, V).
        double rhs = 0.0;
        for (int n = 0; n < base.tg.nodes(); ++n) {
            const auto m = static_cast<std::size_t>(n);
            ScalarField hu(base.g), dv(base.g);
            for (std::int64_t c = 0; c < base.g.cell_count(); ++c) {
                hu[c] = tracking_derivative_density(base.traj.u[m][c] - targets.u_d[m][c]);
                dv[c] = base.traj.v[m][c] - targets.v_d[m][c];
            }
            rhs += base.tg.weight(n) * base.tg.dt() *
                   (w.alpha_u * dot_volume(hu, lin.U[m]) + w.alpha_v * dot_volume(dv, lin.V[m]));
        }
        const double lhs = spacetime_pair(adj.lambda, gu, base.tg) +
                           spacetime_pair(adj.eta, gv, base.tg);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("control gradient matches a central finite difference") {
    BaseCase base({32}, 8, 0.25, FluxScheme::central, 60);
    std::mt19937_64 rng(61);
    SchemeOptions opts = base.opts(FluxScheme::central);

    // Targets far from the trajectory keep the tracking density smooth.
    TargetData targets = TargetData::constant(base.g, base.tg, 3.0, 2.0);
    ObjectiveWeights w;
    w.alpha_u = 1.0;
    w.alpha_v = 0.4;
    w.alpha_f = 0.2;

    AdjointPair adj = solve_adjoint(base.traj, base.f, targets, w, opts);
    Control grad = control_gradient(base.f, base.traj, adj, w);
    Control dir = random_control(base.g, base.tg, rng, 1.0);

    auto objective_at = [&](double sigma) {
        Control shifted = base.f;
        for (std::size_t n = 0; n < shifted.f.size(); ++n)
            for (std::int64_t c = 0; c < base.g.cell_count(); ++c)
                shifted.f[n][c] += sigma * dir.f[n][c];
        Trajectory traj = simulate(base.traj.u.front(), base.traj.v.front(), shifted, base.tg, opts);
        return evaluate_objective(traj, shifted, targets, w);
    };

    const double sigma = 1e-4;
    const double fd = (objective_at(sigma) - objective_at(-sigma)) / (2.0 * sigma);
    double directional = 0.0;
    for (int n = 0; n < base.tg.nodes(); ++n)
        directional += base.tg.weight(n) * base.tg.dt() *
                       dot_volume(grad.f[static_cast<std::size_t>(n)],
                                  dir.f[static_cast<std::size_t>(n)]);
    CHECK(fd == doctest::Approx(directional).epsilon(1e-6));
}

TEST_CASE("gradient reduces to the control cost at matched targets") {
    BaseCase base({28}, 6, 0.2, FluxScheme::central, 62);
    TargetData targets = TargetData::from_trajectory(base.traj);
    ObjectiveWeights w;
    w.alpha_u = 1.0;
    w.alpha_v = 0.7;
    w.alpha_f = 0.3;
    SchemeOptions opts = base.opts(FluxScheme::central);

    AdjointPair adj = solve_adjoint(base.traj, base.f, targets, w, opts);
    Control grad = control_gradient(base.f, base.traj, adj, w);
    for (int n = 0; n < base.tg.nodes(); ++n) {
        const auto m = static_cast<std::size_t>(n);
        for (std::int64_t c = 0; c < base.g.cell_count(); ++c) {
            const double fc = base.f.f[m][c];
            if (base.g.in_control_region(c))
                CHECK(grad.f[m][c] == w.alpha_f * fc * fc * fc);
            else
                CHECK(grad.f[m][c] == 0.0);
        }
    }
}

TEST_CASE("tracking derivative density is the signed power") {
    CHECK(tracking_derivative_density(0.0) == 0.0);
    CHECK(tracking_derivative_density(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tracking_derivative_density(-1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    const double d = 0.37;
    CHECK(tracking_derivative_density(d) ==
          doctest::Approx(std::pow(d, 13.0 / 7.0)).epsilon(1e-14));
    CHECK(tracking_derivative_density(-d) == -tracking_derivative_density(d));
    // Derivative of (7/20)|d|^{20/7} checked by finite differences.
    auto density = [](double x) { return 7.0 / 20.0 * std::pow(std::fabs(x), 20.0 / 7.0); };
    const double h = 1e-7;
    CHECK(tracking_derivative_density(d) ==
          doctest::Approx((density(d + h) - density(d - h)) / (2.0 * h)).epsilon(1e-6));
}

}  // TEST_SUITE
