#pragma once

#include <vector>

#include "chemoctrl/grid.hpp"
#include "chemoctrl/helmholtz.hpp"
#include "chemoctrl/operators.hpp"

namespace chemoctrl {

// Knobs of the time stepper. The Helmholtz tolerance is applied to the
// time-derivative form of each step equation (the linear solves run at
// tol * dt, floored at 1e-13), so reported strong residuals stay at the
// requested level independent of dt.
struct SchemeOptions {
    FluxScheme flux = FluxScheme::central;
    double helmholtz_tol = 1e-10;
    int helmholtz_max_iter = 0;
    bool diagonal_precondition = false;
    double smoother_tol = 1e-12;
};

// Control values at every time node, zero off the control mask. Node `steps`
// never enters the dynamics (each step uses the value at its left node); it
// still carries quadrature weight in the control cost.
struct Control {
    Control(const Grid& grid, const TimeGrid& tg);

    const Grid* grid;
    TimeGrid tg;
    std::vector<ScalarField> f;

    // Zeroes every value outside the control mask (the class invariant).
    void restrict_to_mask();
};

struct Trajectory {
    Trajectory(const Grid& grid, const TimeGrid& tg);

    const Grid* grid;
    TimeGrid tg;
    std::vector<ScalarField> u, v;

    // Monitoring series, one entry per node. Nonnegativity is observed, never
    // enforced.
    std::vector<double> mass, min_u, min_v;
    double max_grad_v = 0.0;
    double safe_dt_advisory = 0.0;
};

// States of a regularized run: z is the evolved variable, v its resolvent
// smoothing v = (I - eps Lap)^{-1} z.
struct RegularizedStateTriple {
    RegularizedStateTriple(const Grid& grid, const TimeGrid& tg, double eps);

    const Grid* grid;
    TimeGrid tg;
    double eps;
    std::vector<ScalarField> u, z, v;
    std::vector<double> mass;
};

struct StepResult {
    ScalarField u, v;
};

// One implicit-explicit step: first the v-equation
//   (1 + dt) v' - dt Lap v' = v + dt u + dt f v 1_c        (source lagged),
// then the u-equation
//   u' - dt Lap u' = u + dt div(u grad v')                 (drift explicit).
// v is always updated before u; the adjoint mirrors exactly this order.
StepResult step(const ScalarField& u_n, const ScalarField& v_n, const ScalarField& f_n, double dt,
                const SchemeOptions& opts = {});

// Marches `tg.steps()` steps from nonnegative initial data. The integral of u
// is conserved to roundoff by construction. Non-finite values abort the run.
Trajectory simulate(const ScalarField& u0, const ScalarField& v0, const Control& f,
                    const TimeGrid& tg, const SchemeOptions& opts = {});

// Same scheme on the regularized system: z evolves with the production term
// clamped to v >= 0, u drifts along grad of the smoothed v. The initial z is
// the forward application z0 = (I - eps Lap) v0.
RegularizedStateTriple simulate_regularized(const ScalarField& u0, const ScalarField& v0,
                                            const Control& f, const TimeGrid& tg, double eps,
                                            const SchemeOptions& opts = {});

// Successive substitution on the decoupled linear system: each sweep freezes
// the previous iterate (u, z, v) on the right-hand side and re-solves the two
// linear marches. The fixed point satisfies the coupled scheme of
// simulate_regularized (with the drift density clamped to u >= 0). Converges
// when successive sweeps differ by at most `tol` in max-over-nodes L2.
RegularizedStateTriple picard_fixed_point(const ScalarField& u0, const ScalarField& v0,
                                          const Control& f, const TimeGrid& tg, double eps,
                                          double tol = 1e-10, int max_sweeps = 50,
                                          const SchemeOptions& opts = {}, int* sweeps_out = nullptr);

}  // namespace chemoctrl
