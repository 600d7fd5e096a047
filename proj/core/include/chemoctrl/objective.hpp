#pragma once

#include <vector>

#include "chemoctrl/forward.hpp"
#include "chemoctrl/grid.hpp"

namespace chemoctrl {

// Exponent of the u-tracking term; its conjugate-style coefficient 7/20 makes
// the derivative density exactly sign(d)|d|^{13/7}.
inline constexpr double kTrackingExponent = 20.0 / 7.0;

struct ObjectiveWeights {
    double alpha_u = 1.0;  // must be positive
    double alpha_v = 0.0;  // nonnegative
    double alpha_f = 0.1;  // nonnegative; zero demands a bounded box
};

// Pointwise bounds for the control on the control region.
struct AdmissibleBox {
    double lo = -1.0;
    double hi = 1.0;
    bool bounded() const;
};

void validate_weights(const ObjectiveWeights& w, const AdmissibleBox& box);

// Desired states, one field per time node.
struct TargetData {
    std::vector<ScalarField> u_d, v_d;

    static TargetData constant(const Grid& grid, const TimeGrid& tg, double u_value,
                               double v_value);
    static TargetData from_trajectory(const Trajectory& traj);
};

// Trapezoid-in-time, midpoint-in-space quadrature of
//   (7 alpha_u / 20) |u - u_d|^{20/7}  +  (alpha_v / 2) |v - v_d|^2
//   +  (alpha_f / 4) |f|^4 restricted to the control region.
double evaluate_objective(const Trajectory& traj, const Control& f, const TargetData& targets,
                          const ObjectiveWeights& weights);

// Clamps to the box on the control region and zeroes the rest.
Control project(const Control& f, const AdmissibleBox& box);

// Stationarity closed form  f = clamp( (-v eta / alpha_f)^{1/3} )  on the
// control region; requires alpha_f > 0.
Control fixed_point_control_update(const std::vector<ScalarField>& v,
                                   const std::vector<ScalarField>& eta,
                                   const ObjectiveWeights& weights, const AdmissibleBox& box,
                                   const Grid& grid, const TimeGrid& tg);

}  // namespace chemoctrl
