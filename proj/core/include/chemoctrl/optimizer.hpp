#pragma once

#include <string>
#include <vector>

#include "chemoctrl/objective.hpp"
#include "chemoctrl/tangent_adjoint.hpp"

namespace chemoctrl {

struct OptimizeOptions {
    double tol = 1e-6;        // stationarity target, relative to the first residual
    int max_iter = 200;
    double armijo_c1 = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    double initial_step = 1.0;
    double relaxation = 0.5;  // damping of the fixed-point update
    SchemeOptions scheme;
};

struct IterationRecord {
    int iter;
    double objective;
    double residual;
    double step;
    int backtracks;
};

struct OptimizeReport {
    bool converged = false;
    std::string stop_reason;
    int iterations = 0;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    double final_objective = 0.0;
    std::vector<IterationRecord> history;
};

struct OptimizeResult {
    Control f;
    Trajectory traj;
    AdjointPair adj;
    OptimizeReport report;
};

// Projected gradient with Armijo backtracking. Stops when the projected
// stationarity residual  || f - P(f - g) ||_{L2 over the control region}
// falls under tol * (its initial value); every accepted step decreases the
// objective by at least c1 * tau * ||g||^2.
OptimizeResult optimize(const ScalarField& u0, const ScalarField& v0, const Control& f_init,
                        const TimeGrid& tg, const TargetData& targets,
                        const ObjectiveWeights& weights, const AdmissibleBox& box,
                        const OptimizeOptions& opts = {});

// Damped closed-form iteration: alternate forward/adjoint solves with
//   f <- P( (1-theta) f + theta (-v eta / alpha_f)^{1/3} ).
// The damping is required: the undamped cube-root map repels iterates from
// small-control stationary points. Stops when the update shrinks below
// tol * (its initial size).
OptimizeResult optimize_fixed_point(const ScalarField& u0, const ScalarField& v0,
                                    const Control& f_init, const TimeGrid& tg,
                                    const TargetData& targets, const ObjectiveWeights& weights,
                                    const AdmissibleBox& box, const OptimizeOptions& opts = {});

// L2 norm of a control over the space-time control region (trapezoidal time
// weights), the metric used for stationarity residuals.
double control_norm(const Control& f);

}  // namespace chemoctrl
