#include "chemoctrl/objective.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chemoctrl/errors.hpp"
#include "chemoctrl/reduce.hpp"

namespace chemoctrl {

bool AdmissibleBox::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

void validate_weights(const ObjectiveWeights& w, const AdmissibleBox& box) {
    if (!(w.alpha_u > 0.0)) throw InvalidInputError("alpha_u must be positive");
    if (w.alpha_v < 0.0) throw InvalidInputError("alpha_v must be nonnegative");
    if (w.alpha_f < 0.0) throw InvalidInputError("alpha_f must be nonnegative");
    if (box.lo > box.hi) throw InvalidInputError("control box must have lo <= hi");
    if (w.alpha_f == 0.0 && !box.bounded())
        throw InvalidInputError("alpha_f = 0 requires a bounded control box");
}

TargetData TargetData::constant(const Grid& grid, const TimeGrid& tg, double u_value,
                                double v_value) {
    TargetData t;
    t.u_d.assign(static_cast<std::size_t>(tg.nodes()), ScalarField(grid, u_value));
    t.v_d.assign(static_cast<std::size_t>(tg.nodes()), ScalarField(grid, v_value));
    return t;
}

TargetData TargetData::from_trajectory(const Trajectory& traj) {
    TargetData t;
    t.u_d = traj.u;
    t.v_d = traj.v;
    return t;
}

namespace {

void check_targets(const TargetData& targets, const Trajectory& traj) {
    if (targets.u_d.size() != traj.u.size() || targets.v_d.size() != traj.v.size())
        throw InvalidInputError("objective: target series length does not match the trajectory");
    if (!targets.u_d.empty()) check_same_grid(targets.u_d[0], traj.u[0], "objective targets");
}

}  // namespace

double evaluate_objective(const Trajectory& traj, const Control& f, const TargetData& targets,
                          const ObjectiveWeights& weights) {
    if (static_cast<int>(traj.u.size()) != traj.tg.nodes())
        throw InvalidInputError("objective: incomplete trajectory");
    check_targets(targets, traj);
    if (static_cast<int>(f.f.size()) != traj.tg.nodes())
        throw InvalidInputError("objective: control node count does not match");
    if (!(weights.alpha_u > 0.0)) throw InvalidInputError("alpha_u must be positive");

    const Grid& g = *traj.grid;
    const TimeGrid& tg = traj.tg;
    const double vol = g.cell_volume();
    const auto& mask = g.control_mask();
    const double cu = weights.alpha_u * (7.0 / 20.0);
    const double cv = weights.alpha_v * 0.5;
    const double cf = weights.alpha_f * 0.25;

    double acc = 0.0;
    for (int n = 0; n < tg.nodes(); ++n) {
        const std::size_t m = static_cast<std::size_t>(n);
        const double* u = traj.u[m].data();
        const double* v = traj.v[m].data();
        const double* ud = targets.u_d[m].data();
        const double* vd = targets.v_d[m].data();
        const double* fn = f.f[m].data();
        const double node = indexed_sum(g.cell_count(), [&](std::int64_t c) {
            const double du = u[c] - ud[c];
            const double dv = v[c] - vd[c];
            double s = cu * std::pow(std::abs(du), kTrackingExponent) + cv * dv * dv;
            if (mask[static_cast<std::size_t>(c)]) {
                const double f2 = fn[c] * fn[c];
                s += cf * f2 * f2;
            }
            return s;
        });
        acc += tg.weight(n) * tg.dt() * vol * node;
    }
    return acc;
}

Control project(const Control& f, const AdmissibleBox& box) {
    if (box.lo > box.hi) throw InvalidInputError("control box must have lo <= hi");
    Control out = f;
    const auto& mask = out.grid->control_mask();
    for (auto& fn : out.f) {
        double* x = fn.data();
        for (std::int64_t c = 0; c < fn.size(); ++c) {
            if (!mask[static_cast<std::size_t>(c)]) {
                x[c] = 0.0;
            } else {
                if (x[c] < box.lo) x[c] = box.lo;
                if (x[c] > box.hi) x[c] = box.hi;
            }
        }
    }
    return out;
}

Control fixed_point_control_update(const std::vector<ScalarField>& v,
                                   const std::vector<ScalarField>& eta,
                                   const ObjectiveWeights& weights, const AdmissibleBox& box,
                                   const Grid& grid, const TimeGrid& tg) {
    if (!(weights.alpha_f > 0.0))
        throw InvalidInputError("fixed_point_control_update: alpha_f must be positive");
    if (static_cast<int>(v.size()) != tg.nodes() || static_cast<int>(eta.size()) != tg.nodes())
        throw InvalidInputError("fixed_point_control_update: series length mismatch");
    Control out(grid, tg);
    const auto& mask = grid.control_mask();
    for (int n = 0; n < tg.nodes(); ++n) {
        const std::size_t m = static_cast<std::size_t>(n);
        check_field_on_grid(v[m], grid, "fixed_point_control_update");
        check_field_on_grid(eta[m], grid, "fixed_point_control_update");
        const double* vv = v[m].data();
        const double* ee = eta[m].data();
        double* x = out.f[m].data();
        for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
            if (!mask[static_cast<std::size_t>(c)]) continue;
            double val = std::cbrt(-vv[c] * ee[c] / weights.alpha_f);
            if (val < box.lo) val = box.lo;
            if (val > box.hi) val = box.hi;
            x[c] = val;
        }
    }
    return out;
}

}  // namespace chemoctrl
