#include "chemoctrl/tangent_adjoint.hpp"

#include <cmath>
#include <string>

#include "chemoctrl/errors.hpp"
#include "chemoctrl/parallel.hpp"

namespace chemoctrl {

namespace {

double effective_tol(const SchemeOptions& opts, double dt) {
    return std::max(opts.helmholtz_tol * dt, 1e-13);
}

HelmholtzProblem v_problem(double dt, const SchemeOptions& opts) {
    return HelmholtzProblem{1.0 + dt, dt, effective_tol(opts, dt), opts.helmholtz_max_iter,
                            opts.diagonal_precondition};
}

HelmholtzProblem u_problem(double dt, const SchemeOptions& opts) {
    return HelmholtzProblem{1.0, dt, effective_tol(opts, dt), opts.helmholtz_max_iter,
                            opts.diagonal_precondition};
}

void check_base(const Trajectory& base, const Control& f, const char* where) {
    if (static_cast<int>(base.u.size()) != base.tg.nodes() ||
        static_cast<int>(base.v.size()) != base.tg.nodes())
        throw InvalidInputError(std::string(where) + ": incomplete base trajectory");
    if (static_cast<int>(f.f.size()) != base.tg.nodes())
        throw InvalidInputError(std::string(where) + ": control node count does not match");
    if (!f.grid->same_layout(*base.grid))
        throw InvalidInputError(std::string(where) + ": control grid does not match");
}

}  // namespace

TangentPair::TangentPair(const Grid& grid_, const TimeGrid& tg_) : grid(&grid_), tg(tg_) {
    U.reserve(static_cast<std::size_t>(tg.nodes()));
    V.reserve(static_cast<std::size_t>(tg.nodes()));
}

AdjointPair::AdjointPair(const Grid& grid_, const TimeGrid& tg_) : grid(&grid_), tg(tg_) {
    lambda.assign(static_cast<std::size_t>(tg.nodes()), ScalarField(grid_));
    eta.assign(static_cast<std::size_t>(tg.nodes()), ScalarField(grid_));
}

double tracking_derivative_density(double d) {
    if (d == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(d), 13.0 / 7.0), d);
}

TangentStepResult tangent_step(const ScalarField& base_u_n, const ScalarField& base_v_n,
                               const ScalarField& base_v_next, const ScalarField& base_f_n,
                               const ScalarField& U_n, const ScalarField& V_n,
                               const ScalarField* F_n, const ScalarField* g_u_n,
                               const ScalarField* g_v_n, double dt, const SchemeOptions& opts) {
    check_same_grid(base_u_n, U_n, "tangent_step");
    check_same_grid(base_v_n, V_n, "tangent_step");
    if (!(dt > 0.0)) throw InvalidInputError("tangent_step: dt must be positive");
    const Grid& g = base_u_n.grid();
    const auto& mask = g.control_mask();

    ScalarField rhs_V(g);
    {
        const double* Vv = V_n.data();
        const double* Uv = U_n.data();
        const double* fb = base_f_n.data();
        const double* vb = base_v_n.data();
        const double* Fv = F_n ? F_n->data() : nullptr;
        const double* gv = g_v_n ? g_v_n->data() : nullptr;
        double* r = rhs_V.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) {
                double s = Uv[c];
                if (mask[static_cast<std::size_t>(c)]) {
                    s += fb[c] * Vv[c];
                    if (Fv) s += Fv[c] * vb[c];
                }
                if (gv) s += gv[c];
                r[c] = Vv[c] + dt * s;
            }
        });
    }
    ScalarField V_next = helmholtz_solve(v_problem(dt, opts), rhs_V, &V_n);

    ScalarField driftU = chemo_flux_divergence(U_n, base_v_next, opts.flux, &base_v_next);
    ScalarField driftV = chemo_flux_divergence(base_u_n, V_next, opts.flux, &base_v_next);
    ScalarField rhs_U(g);
    {
        const double* Uv = U_n.data();
        const double* dU = driftU.data();
        const double* dV = driftV.data();
        const double* gu = g_u_n ? g_u_n->data() : nullptr;
        double* r = rhs_U.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) {
                double s = dU[c] + dV[c];
                if (gu) s += gu[c];
                r[c] = Uv[c] + dt * s;
            }
        });
    }
    ScalarField U_next = helmholtz_solve(u_problem(dt, opts), rhs_U, &U_n);
    return TangentStepResult{std::move(U_next), std::move(V_next)};
}

TangentStepResult tangent_step_transpose(const ScalarField& base_u_n,
                                         [[maybe_unused]] const ScalarField& base_v_n,
                                         const ScalarField& base_v_next,
                                         const ScalarField& base_f_n, const ScalarField& xi_u,
                                         const ScalarField& xi_v, double dt,
                                         const SchemeOptions& opts) {
    check_same_grid(base_u_n, xi_u, "tangent_step_transpose");
    if (!(dt > 0.0)) throw InvalidInputError("tangent_step_transpose: dt must be positive");
    const Grid& g = base_u_n.grid();
    const auto& mask = g.control_mask();

    // phi = Bu^{-1} xi_u
    ScalarField phi = helmholtz_solve(u_problem(dt, opts), xi_u, &xi_u);

    // psi = Bv^{-1}(xi_v + dt div(u_n grad phi))   [the drift in V is self-transpose]
    ScalarField ephi = chemo_flux_divergence(base_u_n, phi, opts.flux, &base_v_next);
    ScalarField rhs_psi(g);
    {
        const double* xv = xi_v.data();
        const double* ep = ephi.data();
        double* r = rhs_psi.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) r[c] = xv[c] + dt * ep[c];
        });
    }
    ScalarField psi = helmholtz_solve(v_problem(dt, opts), rhs_psi, &xi_v);

    // out_u = phi + dt Ct phi + dt psi;  out_v = psi + dt f psi 1_c
    ScalarField ct = chemo_flux_divergence_transpose_u(phi, base_v_next, opts.flux, &base_v_next);
    ScalarField out_u(g), out_v(g);
    {
        const double* ph = phi.data();
        const double* cc = ct.data();
        const double* ps = psi.data();
        const double* fb = base_f_n.data();
        double* ou = out_u.data();
        double* ov = out_v.data();
        parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t c = b; c < e; ++c) {
                ou[c] = ph[c] + dt * (cc[c] + ps[c]);
                const double prod = mask[static_cast<std::size_t>(c)] ? fb[c] * ps[c] : 0.0;
                ov[c] = ps[c] + dt * prod;
            }
        });
    }
    return TangentStepResult{std::move(out_u), std::move(out_v)};
}

TangentPair solve_linearized(const Trajectory& base, const Control& f, const Control* F,
                             const ScalarField* U0, const ScalarField* V0,
                             const std::vector<ScalarField>* g_u,
                             const std::vector<ScalarField>* g_v, const SchemeOptions& opts) {
    check_base(base, f, "solve_linearized");
    const Grid& g = *base.grid;
    const TimeGrid& tg = base.tg;
    if (F && static_cast<int>(F->f.size()) != tg.nodes())
        throw InvalidInputError("solve_linearized: direction node count does not match");
    if (g_u && static_cast<int>(g_u->size()) != tg.nodes())
        throw InvalidInputError("solve_linearized: g_u length must equal the node count");
    if (g_v && static_cast<int>(g_v->size()) != tg.nodes())
        throw InvalidInputError("solve_linearized: g_v length must equal the node count");

    TangentPair out(g, tg);
    out.U.push_back(U0 ? *U0 : ScalarField(g));
    out.V.push_back(V0 ? *V0 : ScalarField(g));

    for (int n = 0; n < tg.steps(); ++n) {
        const std::size_t m = static_cast<std::size_t>(n);
        TangentStepResult next = tangent_step(
            base.u[m], base.v[m], base.v[m + 1], f.f[m], out.U.back(), out.V.back(),
            F ? &F->f[m] : nullptr, g_u ? &(*g_u)[m] : nullptr, g_v ? &(*g_v)[m] : nullptr,
            tg.dt(), opts);
        out.U.push_back(std::move(next.U));
        out.V.push_back(std::move(next.V));
    }
    return out;
}

AdjointPair solve_adjoint(const Trajectory& base, const Control& f, const TargetData& targets,
                          const ObjectiveWeights& weights, const SchemeOptions& opts) {
    check_base(base, f, "solve_adjoint");
    if (targets.u_d.size() != base.u.size() || targets.v_d.size() != base.v.size())
        throw InvalidInputError("solve_adjoint: target series length does not match");
    if (!(weights.alpha_u > 0.0)) throw InvalidInputError("alpha_u must be positive");
    const Grid& g = *base.grid;
    const TimeGrid& tg = base.tg;
    const double dt = tg.dt();
    const auto& mask = g.control_mask();

    AdjointPair adj(g, tg);
    ScalarField lam_next(g), eta_next(g);  // multipliers at level m+1, zero beyond the horizon

    for (int m = tg.steps(); m >= 1; --m) {
        const std::size_t mm = static_cast<std::size_t>(m);
        const double wm_dt = tg.weight(m) * dt;

        ScalarField rhs_lam(g);
        {
            // dt * Ct(lam_next; v_{m+1}) only exists below the top level
            ScalarField ct(g);
            if (m < tg.steps())
                ct = chemo_flux_divergence_transpose_u(lam_next, base.v[mm + 1], opts.flux,
                                                       &base.v[mm + 1]);
            const double* ln = lam_next.data();
            const double* en = eta_next.data();
            const double* cc = ct.data();
            const double* ub = base.u[mm].data();
            const double* ud = targets.u_d[mm].data();
            double* r = rhs_lam.data();
            const double au = weights.alpha_u;
            parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t c = b; c < e; ++c) {
                    r[c] = ln[c] + dt * (cc[c] + en[c]) +
                           wm_dt * au * tracking_derivative_density(ub[c] - ud[c]);
                }
            });
        }
        ScalarField lam = helmholtz_solve(u_problem(dt, opts), rhs_lam, &lam_next);

        ScalarField rhs_eta(g);
        {
            ScalarField e_lam =
                chemo_flux_divergence(base.u[mm - 1], lam, opts.flux, &base.v[mm]);
            const double* en = eta_next.data();
            const double* el = e_lam.data();
            const double* fb = f.f[mm].data();
            const double* vb = base.v[mm].data();
            const double* vd = targets.v_d[mm].data();
            double* r = rhs_eta.data();
            const double av = weights.alpha_v;
            parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t c = b; c < e; ++c) {
                    const double prod = mask[static_cast<std::size_t>(c)] ? fb[c] * en[c] : 0.0;
                    r[c] = en[c] + dt * (prod + el[c]) + wm_dt * av * (vb[c] - vd[c]);
                }
            });
        }
        ScalarField eta = helmholtz_solve(v_problem(dt, opts), rhs_eta, &eta_next);

        // Store divided by the node weight: slot m-1 is the Riesz representative
        // against sources feeding step m-1 -> m.
        const double inv_w = 1.0 / tg.weight(m - 1);
        {
            ScalarField& slot_l = adj.lambda[mm - 1];
            ScalarField& slot_e = adj.eta[mm - 1];
            const double* ls = lam.data();
            const double* es = eta.data();
            double* dl = slot_l.data();
            double* de = slot_e.data();
            parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t c = b; c < e; ++c) {
                    dl[c] = inv_w * ls[c];
                    de[c] = inv_w * es[c];
                }
            });
        }
        lam_next = std::move(lam);
        eta_next = std::move(eta);
    }
    return adj;
}

Control control_gradient(const Control& f, const Trajectory& base, const AdjointPair& adj,
                         const ObjectiveWeights& weights) {
    check_base(base, f, "control_gradient");
    if (adj.lambda.size() != base.u.size() || adj.eta.size() != base.v.size())
        throw InvalidInputError("control_gradient: adjoint series length does not match");
    const Grid& g = *base.grid;
    const auto& mask = g.control_mask();
    Control grad(g, base.tg);
    for (int n = 0; n < base.tg.nodes(); ++n) {
        const std::size_t m = static_cast<std::size_t>(n);
        const double* fn = f.f[m].data();
        const double* vb = base.v[m].data();
        const double* et = adj.eta[m].data();
        double* x = grad.f[m].data();
        for (std::int64_t c = 0; c < g.cell_count(); ++c) {
            if (!mask[static_cast<std::size_t>(c)]) continue;
            x[c] = weights.alpha_f * fn[c] * fn[c] * fn[c] + vb[c] * et[c];
        }
    }
    return grad;
}

}  // namespace chemoctrl
