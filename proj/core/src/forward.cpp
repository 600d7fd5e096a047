#include "chemoctrl/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemoctrl/errors.hpp"
#include "chemoctrl/parallel.hpp"

namespace chemoctrl {

namespace {

bool all_finite(const ScalarField& f) {
    const double* x = f.data();
    for (std::int64_t c = 0; c < f.size(); ++c)
        if (!std::isfinite(x[c])) return false;
    return true;
}

double min_value(const ScalarField& f) {
    const double* x = f.data();
    double m = x[0];
    for (std::int64_t c = 1; c < f.size(); ++c) m = std::min(m, x[c]);
    return m;
}

double effective_tol(const SchemeOptions& opts, double dt) {
    return std::max(opts.helmholtz_tol * dt, 1e-13);
}

HelmholtzProblem v_problem(double dt, const SchemeOptions& opts) {
    HelmholtzProblem p;
    p.a = 1.0 + dt;
    p.b = dt;
    p.tol = effective_tol(opts, dt);
    p.max_iter = opts.helmholtz_max_iter;
    p.diagonal_precondition = opts.diagonal_precondition;
    return p;
}

HelmholtzProblem u_problem(double dt, const SchemeOptions& opts) {
    HelmholtzProblem p;
    p.a = 1.0;
    p.b = dt;
    p.tol = effective_tol(opts, dt);
    p.max_iter = opts.helmholtz_max_iter;
    p.diagonal_precondition = opts.diagonal_precondition;
    return p;
}

void check_step_inputs(const ScalarField& u_n, const ScalarField& v_n, const ScalarField& f_n,
                       double dt) {
    check_same_grid(u_n, v_n, "step");
    check_same_grid(u_n, f_n, "step");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("step: dt must be positive");
}

void require_finite(const ScalarField& f, const char* what, int node) {
    if (!all_finite(f))
        throw SolverError(std::string("step: non-finite values in ") + what + " at node " +
                              std::to_string(node),
                          std::numeric_limits<double>::quiet_NaN(), node);
}

void check_control(const Control& f, const Grid& grid, const TimeGrid& tg, const char* where) {
    if (!f.grid->same_layout(grid))
        throw InvalidInputError(std::string(where) + ": control grid does not match");
    if (f.tg.steps() != tg.steps() || f.tg.horizon() != tg.horizon())
        throw InvalidInputError(std::string(where) + ": control time grid does not match");
    if (static_cast<int>(f.f.size()) != tg.nodes())
        throw InvalidInputError(std::string(where) + ": control node count does not match");
}

void check_initial_data(const ScalarField& u0, const ScalarField& v0) {
    check_same_grid(u0, v0, "simulate");
    if (!all_finite(u0) || !all_finite(v0))
        throw InvalidInputError("simulate: initial data must be finite");
    if (min_value(u0) < 0.0) throw InvalidInputError("simulate: u0 must be nonnegative");
    if (min_value(v0) < 0.0) throw InvalidInputError("simulate: v0 must be nonnegative");
}

}  // namespace

Control::Control(const Grid& grid_, const TimeGrid& tg_) : grid(&grid_), tg(tg_) {
    f.assign(static_cast<std::size_t>(tg.nodes()), ScalarField(grid_));
}

void Control::restrict_to_mask() {
    const auto& mask = grid->control_mask();
    for (auto& fn : f) {
        double* x = fn.data();
        for (std::int64_t c = 0; c < fn.size(); ++c)
            if (!mask[static_cast<std::size_t>(c)]) x[c] = 0.0;
    }
}

Trajectory::Trajectory(const Grid& grid_, const TimeGrid& tg_) : grid(&grid_), tg(tg_) {
    u.reserve(static_cast<std::size_t>(tg.nodes()));
    v.reserve(static_cast<std::size_t>(tg.nodes()));
}

RegularizedStateTriple::RegularizedStateTriple(const Grid& grid_, const TimeGrid& tg_, double eps_)
    : grid(&grid_), tg(tg_), eps(eps_) {
    u.reserve(static_cast<std::size_t>(tg.nodes()));
    z.reserve(static_cast<std::size_t>(tg.nodes()));
    v.reserve(static_cast<std::size_t>(tg.nodes()));
}

StepResult step(const ScalarField& u_n, const ScalarField& v_n, const ScalarField& f_n, double dt,
                const SchemeOptions& opts) {
    check_step_inputs(u_n, v_n, f_n, dt);
    const Grid& g = u_n.grid();
    const auto& mask = g.control_mask();

    ScalarField rhs_v(g);
    {
        const double* u = u_n.data();
        const double* v = v_n.data();
        const double* f = f_n.data();
        double* r = rhs_v.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) {
                const double prod = mask[static_cast<std::size_t>(c)] ? f[c] * v[c] : 0.0;
                r[c] = v[c] + dt * (u[c] + prod);
            }
        });
    }
    ScalarField v_next = helmholtz_solve(v_problem(dt, opts), rhs_v, &v_n);
    require_finite(v_next, "v", -1);

    ScalarField drift = chemo_flux_divergence(u_n, v_next, opts.flux);
    ScalarField rhs_u(g);
    {
        const double* u = u_n.data();
        const double* d = drift.data();
        double* r = rhs_u.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) r[c] = u[c] + dt * d[c];
        });
    }
    ScalarField u_next = helmholtz_solve(u_problem(dt, opts), rhs_u, &u_n);
    require_finite(u_next, "u", -1);

    return StepResult{std::move(u_next), std::move(v_next)};
}

Trajectory simulate(const ScalarField& u0, const ScalarField& v0, const Control& f,
                    const TimeGrid& tg, const SchemeOptions& opts) {
    check_initial_data(u0, v0);
    check_control(f, u0.grid(), tg, "simulate");
    const Grid& g = u0.grid();

    Trajectory traj(g, tg);
    traj.u.push_back(u0);
    traj.v.push_back(v0);
    traj.mass.push_back(integrate(u0));
    traj.min_u.push_back(min_value(u0));
    traj.min_v.push_back(min_value(v0));
    traj.max_grad_v = max_face_gradient(v0);

    for (int n = 0; n < tg.steps(); ++n) {
        StepResult next{ScalarField(g), ScalarField(g)};
        try {
            next = step(traj.u.back(), traj.v.back(), f.f[static_cast<std::size_t>(n)], tg.dt(),
                        opts);
        } catch (SolverError& err) {
            throw SolverError("simulate: step " + std::to_string(n) + " failed: " + err.what(),
                              err.achieved_residual, n);
        }
        traj.max_grad_v = std::max(traj.max_grad_v, max_face_gradient(next.v));
        traj.mass.push_back(integrate(next.u));
        traj.min_u.push_back(min_value(next.u));
        traj.min_v.push_back(min_value(next.v));
        traj.u.push_back(std::move(next.u));
        traj.v.push_back(std::move(next.v));
    }

    double h_min = g.spacing(0);
    for (int a = 1; a < g.ndim(); ++a) h_min = std::min(h_min, g.spacing(a));
    traj.safe_dt_advisory =
        traj.max_grad_v > 0.0
            ? std::min(0.1, h_min / (4.0 * g.ndim() * traj.max_grad_v))
            : 0.1;
    return traj;
}

RegularizedStateTriple simulate_regularized(const ScalarField& u0, const ScalarField& v0,
                                            const Control& f, const TimeGrid& tg, double eps,
                                            const SchemeOptions& opts) {
    check_initial_data(u0, v0);
    check_control(f, u0.grid(), tg, "simulate_regularized");
    if (eps < 0.0) throw InvalidInputError("simulate_regularized: eps must be >= 0");
    const Grid& g = u0.grid();
    const auto& mask = g.control_mask();
    const double dt = tg.dt();

    RegularizedStateTriple st(g, tg, eps);
    // z0 = (I - eps Lap) v0, applied directly (no solve).
    ScalarField z0(g);
    {
        ScalarField lap = laplacian_neumann(v0);
        const double* v = v0.data();
        const double* l = lap.data();
        double* z = z0.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) z[c] = v[c] - eps * l[c];
        });
    }
    st.u.push_back(u0);
    st.z.push_back(z0);
    st.v.push_back(smoother_apply(z0, eps, opts.smoother_tol, &v0));
    st.mass.push_back(integrate(u0));

    for (int n = 0; n < tg.steps(); ++n) {
        const ScalarField& u_n = st.u.back();
        const ScalarField& z_n = st.z.back();
        const ScalarField& v_n = st.v.back();
        const ScalarField& f_n = f.f[static_cast<std::size_t>(n)];

        ScalarField rhs_z(g);
        {
            const double* u = u_n.data();
            const double* z = z_n.data();
            const double* v = v_n.data();
            const double* ff = f_n.data();
            double* r = rhs_z.data();
            parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t c = b; c < e; ++c) {
                    const double vpos = v[c] > 0.0 ? v[c] : 0.0;
                    const double prod = mask[static_cast<std::size_t>(c)] ? ff[c] * vpos : 0.0;
                    r[c] = z[c] + dt * (u[c] + prod);
                }
            });
        }
        ScalarField z_next = helmholtz_solve(v_problem(dt, opts), rhs_z, &z_n);
        require_finite(z_next, "z", n);
        ScalarField v_next = smoother_apply(z_next, eps, opts.smoother_tol, &v_n);
        require_finite(v_next, "v", n);

        ScalarField drift = chemo_flux_divergence(u_n, v_next, opts.flux);
        ScalarField rhs_u(g);
        {
            const double* u = u_n.data();
            const double* d = drift.data();
            double* r = rhs_u.data();
            parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t c = b; c < e; ++c) r[c] = u[c] + dt * d[c];
            });
        }
        ScalarField u_next = helmholtz_solve(u_problem(dt, opts), rhs_u, &u_n);
        require_finite(u_next, "u", n);

        st.mass.push_back(integrate(u_next));
        st.u.push_back(std::move(u_next));
        st.z.push_back(std::move(z_next));
        st.v.push_back(std::move(v_next));
    }
    return st;
}

RegularizedStateTriple picard_fixed_point(const ScalarField& u0, const ScalarField& v0,
                                          const Control& f, const TimeGrid& tg, double eps,
                                          double tol, int max_sweeps, const SchemeOptions& opts,
                                          int* sweeps_out) {
    check_initial_data(u0, v0);
    check_control(f, u0.grid(), tg, "picard_fixed_point");
    if (eps < 0.0) throw InvalidInputError("picard_fixed_point: eps must be >= 0");
    if (!(tol > 0.0)) throw InvalidInputError("picard_fixed_point: tol must be positive");
    if (max_sweeps < 1) throw InvalidInputError("picard_fixed_point: max_sweeps must be >= 1");
    const Grid& g = u0.grid();
    const auto& mask = g.control_mask();
    const double dt = tg.dt();

    ScalarField z0(g);
    {
        ScalarField lap = laplacian_neumann(v0);
        const double* v = v0.data();
        const double* l = lap.data();
        double* z = z0.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) z[c] = v[c] - eps * l[c];
        });
    }
    const ScalarField v_of_z0 = smoother_apply(z0, eps, opts.smoother_tol, &v0);

    // Frozen iterate, initialized constant in time.
    RegularizedStateTriple bar(g, tg, eps);
    for (int n = 0; n < tg.nodes(); ++n) {
        bar.u.push_back(u0);
        bar.z.push_back(z0);
        bar.v.push_back(v_of_z0);
    }

    HelmholtzProblem lin;  // both marches use (I - dt Lap)
    lin.a = 1.0;
    lin.b = dt;
    lin.tol = std::max(opts.helmholtz_tol * dt, 1e-13);
    lin.max_iter = opts.helmholtz_max_iter;
    lin.diagonal_precondition = opts.diagonal_precondition;

    double delta = 0.0;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        RegularizedStateTriple next(g, tg, eps);
        next.u.push_back(u0);
        next.z.push_back(z0);
        next.v.push_back(v_of_z0);
        delta = 0.0;

        for (int n = 0; n < tg.steps(); ++n) {
            const std::size_t m = static_cast<std::size_t>(n);
            const ScalarField& f_n = f.f[m];

            ScalarField rhs_z(g);
            {
                const double* zp = next.z.back().data();
                const double* ub = bar.u[m].data();
                const double* vb = bar.v[m].data();
                const double* zb1 = bar.z[m + 1].data();
                const double* ff = f_n.data();
                double* r = rhs_z.data();
                parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                    for (std::int64_t c = b; c < e; ++c) {
                        const double vpos = vb[c] > 0.0 ? vb[c] : 0.0;
                        const double prod =
                            mask[static_cast<std::size_t>(c)] ? ff[c] * vpos : 0.0;
                        r[c] = zp[c] + dt * (ub[c] + prod - zb1[c]);
                    }
                });
            }
            ScalarField z_next = helmholtz_solve(lin, rhs_z, &bar.z[m + 1]);
            require_finite(z_next, "z", n);

            ScalarField u_bar_pos = positive_part(bar.u[m]);
            ScalarField drift = chemo_flux_divergence(u_bar_pos, bar.v[m + 1], opts.flux);
            ScalarField rhs_u(g);
            {
                const double* up = next.u.back().data();
                const double* d = drift.data();
                double* r = rhs_u.data();
                parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                    for (std::int64_t c = b; c < e; ++c) r[c] = up[c] + dt * d[c];
                });
            }
            ScalarField u_next = helmholtz_solve(lin, rhs_u, &bar.u[m + 1]);
            require_finite(u_next, "u", n);

            ScalarField v_next = smoother_apply(z_next, eps, opts.smoother_tol, &bar.v[m + 1]);

            {
                ScalarField du = u_next;
                ScalarField dz = z_next;
                const double* ub = bar.u[m + 1].data();
                const double* zb = bar.z[m + 1].data();
                double* duv = du.data();
                double* dzv = dz.data();
                for (std::int64_t c = 0; c < g.cell_count(); ++c) {
                    duv[c] -= ub[c];
                    dzv[c] -= zb[c];
                }
                delta = std::max(delta, std::max(l2_norm(du), l2_norm(dz)));
            }

            next.u.push_back(std::move(u_next));
            next.z.push_back(std::move(z_next));
            next.v.push_back(std::move(v_next));
        }

        bar.u = std::move(next.u);
        bar.z = std::move(next.z);
        bar.v = std::move(next.v);

        if (delta <= tol) {
            if (sweeps_out) *sweeps_out = sweep;
            bar.mass.clear();
            for (const auto& un : bar.u) bar.mass.push_back(integrate(un));
            return bar;
        }
    }
    throw SolverError("picard_fixed_point: no convergence in " + std::to_string(max_sweeps) +
                          " sweeps (last update " + std::to_string(delta) + ")",
                      delta, max_sweeps);
}

}  // namespace chemoctrl
