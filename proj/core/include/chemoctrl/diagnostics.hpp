#pragma once

#include <vector>

#include "chemoctrl/forward.hpp"

namespace chemoctrl {

// Largest relative deviation of the u-integral from its initial value.
// Errors on zero initial mass.
double mass_drift(const Trajectory& traj);

struct EnergySeries {
    std::vector<double> energy;       // (u+1)ln(u+1) + |grad v|^2/2 (+ eps |Lap v|^2/2)
    std::vector<double> dissipation;  // 4 |grad sqrt(u+1)|^2 + |Lap v|^2
};

// Entropy-energy and dissipation series along a run. Errors when any u drops
// below -1 (the entropy integrand is undefined there).
EnergySeries entropy_energy(const Trajectory& traj, double eps = 0.0);
EnergySeries entropy_energy(const RegularizedStateTriple& st);

// Space-time L^{20/7} norm of u: the blow-up monitor of the run.
double regularity_norm(const Trajectory& traj);

struct StrongResidual {
    double residual_u = 0.0;
    double residual_v = 0.0;
};

// Largest per-step L2 norm of the scheme equations re-evaluated on the stored
// states. For a trajectory produced by simulate both stay at the level of the
// Helmholtz tolerance.
StrongResidual strong_residual(const Trajectory& traj, const Control& f,
                               FluxScheme scheme = FluxScheme::central);

}  // namespace chemoctrl
