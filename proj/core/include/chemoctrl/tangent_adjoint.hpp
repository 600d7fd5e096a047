#pragma once

#include <vector>

#include "chemoctrl/forward.hpp"
#include "chemoctrl/objective.hpp"

namespace chemoctrl {

struct TangentPair {
    TangentPair(const Grid& grid, const TimeGrid& tg);
    const Grid* grid;
    TimeGrid tg;
    std::vector<ScalarField> U, V;
};

// Adjoint states stored per node, already divided by the trapezoidal node
// weight, so each slot is the Riesz representative (in the space-time inner
// product) of the map from a source at that node to the objective. Slot n
// pairs with sources feeding the step n -> n+1; the terminal slots are
// exactly zero fields.
struct AdjointPair {
    AdjointPair(const Grid& grid, const TimeGrid& tg);
    const Grid* grid;
    TimeGrid tg;
    std::vector<ScalarField> lambda, eta;
};

struct TangentStepResult {
    ScalarField U, V;
};

// One step of the scheme linearized at base state (u_n, v_n, v_next, f_n):
//   V' = Bv^{-1}[ V + dt U + dt f V 1_c + dt F v_n 1_c + dt g_v ]
//   U' = Bu^{-1}[ U + dt div(U grad v_next) + dt div(u_n grad V') + dt g_u ]
// with the upwind donor pattern (if any) frozen at the base.
TangentStepResult tangent_step(const ScalarField& base_u_n, const ScalarField& base_v_n,
                               const ScalarField& base_v_next, const ScalarField& base_f_n,
                               const ScalarField& U_n, const ScalarField& V_n,
                               const ScalarField* F_n, const ScalarField* g_u_n,
                               const ScalarField* g_v_n, double dt,
                               const SchemeOptions& opts = {});

// Exact transpose of the one-step map (U, V) -> (U', V') above at F = g = 0,
// in the cell-volume inner product. Used to verify, pair by pair, that
// <step(r), xi> = <r, transpose(xi)>.
TangentStepResult tangent_step_transpose(const ScalarField& base_u_n, const ScalarField& base_v_n,
                                         const ScalarField& base_v_next,
                                         const ScalarField& base_f_n, const ScalarField& xi_u,
                                         const ScalarField& xi_v, double dt,
                                         const SchemeOptions& opts = {});

// Marches the linearized system along a base trajectory. Null pointers mean
// zero control direction, zero initial data, or zero sources. Source slot n
// feeds the step n -> n+1 (the last slot is ignored).
TangentPair solve_linearized(const Trajectory& base, const Control& f, const Control* F,
                             const ScalarField* U0, const ScalarField* V0,
                             const std::vector<ScalarField>* g_u,
                             const std::vector<ScalarField>* g_v,
                             const SchemeOptions& opts = {});

// Backward march of the exact discrete transpose, driven by the objective's
// derivative densities. The drift transpose swaps div(U grad v) into
// -grad(lambda).grad(v), and div(u grad V) is self-transpose; the lagged
// production term contributes f 1_c at its matching node.
AdjointPair solve_adjoint(const Trajectory& base, const Control& f, const TargetData& targets,
                          const ObjectiveWeights& weights, const SchemeOptions& opts = {});

// Gradient of the discrete objective with respect to the control, node by
// node:  g_n = (alpha_f f_n^3 + v_n eta_n) 1_c.  With the stored adjoint
// normalization this is the exact gradient of evaluate_objective in the
// trapezoidal space-time inner product.
Control control_gradient(const Control& f, const Trajectory& base, const AdjointPair& adj,
                         const ObjectiveWeights& weights);

// Derivative density of the u-tracking term: sign(d) |d|^{13/7} (zero at the
// kink, matching the subgradient choice).
double tracking_derivative_density(double d);

}  // namespace chemoctrl
