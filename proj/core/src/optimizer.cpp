#include "chemoctrl/optimizer.hpp"

#include <cmath>
#include <utility>

#include "chemoctrl/errors.hpp"

namespace chemoctrl {

namespace {

Control axpy_control(const Control& x, double alpha, const Control& y) {
    Control out = x;
    for (std::size_t n = 0; n < out.f.size(); ++n) {
        double* a = out.f[n].data();
        const double* b = y.f[n].data();
        for (std::int64_t c = 0; c < out.f[n].size(); ++c) a[c] += alpha * b[c];
    }
    return out;
}

double control_dot(const Control& a, const Control& b) {
    return spacetime_dot(a.f, b.f, a.tg);
}

void validate_inputs(const Control& f_init, const TimeGrid& tg, const TargetData& targets,
                     const ObjectiveWeights& weights, const AdmissibleBox& box,
                     const OptimizeOptions& opts) {
    validate_weights(weights, box);
    if (static_cast<int>(f_init.f.size()) != tg.nodes())
        throw InvalidInputError("optimize: control node count does not match");
    if (static_cast<int>(targets.u_d.size()) != tg.nodes() ||
        static_cast<int>(targets.v_d.size()) != tg.nodes())
        throw InvalidInputError("optimize: target series length does not match");
    if (!(opts.tol > 0.0)) throw InvalidInputError("optimize: tol must be positive");
    if (opts.max_iter < 1) throw InvalidInputError("optimize: max_iter must be >= 1");
    if (!(opts.backtrack > 0.0 && opts.backtrack < 1.0))
        throw InvalidInputError("optimize: backtrack factor must lie in (0, 1)");
    if (!(opts.initial_step > 0.0)) throw InvalidInputError("optimize: initial step must be > 0");
    if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0))
        throw InvalidInputError("optimize: relaxation must lie in (0, 1]");
}

}  // namespace

double control_norm(const Control& f) { return spacetime_l2_norm(f.f, f.tg); }

OptimizeResult optimize(const ScalarField& u0, const ScalarField& v0, const Control& f_init,
                        const TimeGrid& tg, const TargetData& targets,
                        const ObjectiveWeights& weights, const AdmissibleBox& box,
                        const OptimizeOptions& opts) {
    validate_inputs(f_init, tg, targets, weights, box, opts);

    Control f = project(f_init, box);
    Trajectory traj = simulate(u0, v0, f, tg, opts.scheme);
    double J = evaluate_objective(traj, f, targets, weights);
    AdjointPair adj = solve_adjoint(traj, f, targets, weights, opts.scheme);
    Control g = control_gradient(f, traj, adj, weights);

    auto stationarity = [&](const Control& fc, const Control& gc) {
        Control moved = project(axpy_control(fc, -1.0, gc), box);
        Control diff = axpy_control(fc, -1.0, moved);
        return control_norm(diff);
    };

    OptimizeReport report;
    double residual = stationarity(f, g);
    report.initial_residual = residual;
    report.history.push_back({0, J, residual, 0.0, 0});
    const double target = opts.tol * residual;

    int k = 0;
    while (true) {
        if (residual <= target) {
            report.converged = true;
            report.stop_reason = "stationarity residual reached the tolerance";
            break;
        }
        if (k >= opts.max_iter) {
            report.stop_reason = "maximum iterations reached";
            break;
        }
        ++k;

        const double gnorm2 = control_dot(g, g);
        double tau = opts.initial_step;
        bool accepted = false;
        Control f_trial = f;
        Trajectory traj_trial(*f.grid, tg);
        double J_trial = J;
        int bt = 0;
        for (; bt <= opts.max_backtracks; ++bt) {
            f_trial = project(axpy_control(f, -tau, g), box);
            traj_trial = simulate(u0, v0, f_trial, tg, opts.scheme);
            J_trial = evaluate_objective(traj_trial, f_trial, targets, weights);
            if (J_trial <= J - opts.armijo_c1 * tau * gnorm2) {
                accepted = true;
                break;
            }
            tau *= opts.backtrack;
        }
        if (!accepted) {
            report.stop_reason = "line search failed (step underflow)";
            break;
        }

        f = std::move(f_trial);
        traj = std::move(traj_trial);
        J = J_trial;
        adj = solve_adjoint(traj, f, targets, weights, opts.scheme);
        g = control_gradient(f, traj, adj, weights);
        residual = stationarity(f, g);
        report.history.push_back({k, J, residual, tau, bt});
    }

    report.iterations = k;
    report.final_residual = residual;
    report.final_objective = J;
    return OptimizeResult{std::move(f), std::move(traj), std::move(adj), std::move(report)};
}

OptimizeResult optimize_fixed_point(const ScalarField& u0, const ScalarField& v0,
                                    const Control& f_init, const TimeGrid& tg,
                                    const TargetData& targets, const ObjectiveWeights& weights,
                                    const AdmissibleBox& box, const OptimizeOptions& opts) {
    validate_inputs(f_init, tg, targets, weights, box, opts);
    if (!(weights.alpha_f > 0.0))
        throw InvalidInputError("optimize_fixed_point: alpha_f must be positive");

    Control f = project(f_init, box);
    const double theta = opts.relaxation;

    Trajectory traj = simulate(u0, v0, f, tg, opts.scheme);
    AdjointPair adj = solve_adjoint(traj, f, targets, weights, opts.scheme);
    double J = evaluate_objective(traj, f, targets, weights);

    OptimizeReport report;
    double delta0 = -1.0;
    double delta = 0.0;
    int k = 0;
    report.history.push_back({0, J, 0.0, theta, 0});

    while (k < opts.max_iter) {
        ++k;
        Control update =
            fixed_point_control_update(traj.v, adj.eta, weights, box, *f.grid, tg);
        Control f_next = f;  // relax toward the closed-form update, then project
        for (std::size_t n = 0; n < f_next.f.size(); ++n) {
            double* a = f_next.f[n].data();
            const double* fu = update.f[n].data();
            for (std::int64_t c = 0; c < f_next.f[n].size(); ++c)
                a[c] = (1.0 - theta) * a[c] + theta * fu[c];
        }
        f_next = project(f_next, box);

        Control diff = axpy_control(f_next, -1.0, f);
        delta = control_norm(diff);
        if (delta0 < 0.0) delta0 = delta;

        f = std::move(f_next);
        traj = simulate(u0, v0, f, tg, opts.scheme);
        adj = solve_adjoint(traj, f, targets, weights, opts.scheme);
        J = evaluate_objective(traj, f, targets, weights);
        report.history.push_back({k, J, delta, theta, 0});

        if (delta <= opts.tol * delta0 || delta == 0.0) {
            report.converged = true;
            report.stop_reason = "fixed-point update reached the tolerance";
            break;
        }
    }
    if (!report.converged && report.stop_reason.empty())
        report.stop_reason = "maximum iterations reached";

    report.iterations = k;
    report.initial_residual = std::max(delta0, 0.0);
    report.final_residual = delta;
    report.final_objective = J;
    return OptimizeResult{std::move(f), std::move(traj), std::move(adj), std::move(report)};
}

}  // namespace chemoctrl
