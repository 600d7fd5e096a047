#include "chemoctrl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemoctrl/errors.hpp"
#include "chemoctrl/reduce.hpp"

namespace chemoctrl {

double mass_drift(const Trajectory& traj) {
    if (traj.u.empty()) throw InvalidInputError("mass_drift: empty trajectory");
    const double m0 = integrate(traj.u[0]);
    if (m0 == 0.0) throw InvalidInputError("mass_drift: initial mass is zero");
    double worst = 0.0;
    for (const auto& un : traj.u)
        worst = std::max(worst, std::abs(integrate(un) - m0));
    return worst / std::abs(m0);
}

namespace {

double entropy_integral(const ScalarField& u) {
    const double* x = u.data();
    for (std::int64_t c = 0; c < u.size(); ++c)
        if (x[c] < -1.0)
            throw InvalidInputError("entropy_energy: u < -1 at cell " + std::to_string(c));
    const double s = indexed_sum(u.size(), [x](std::int64_t c) {
        const double w = 1.0 + x[c];
        return w > 0.0 ? w * std::log(w) : 0.0;
    });
    return s * u.grid().cell_volume();
}

EnergySeries series_of(const std::vector<ScalarField>& u, const std::vector<ScalarField>& v,
                       double eps) {
    EnergySeries out;
    out.energy.reserve(u.size());
    out.dissipation.reserve(u.size());
    for (std::size_t n = 0; n < u.size(); ++n) {
        const ScalarField& un = u[n];
        const ScalarField& vn = v[n];
        ScalarField root(un.grid());
        {
            const double* x = un.data();
            double* r = root.data();
            for (std::int64_t c = 0; c < un.size(); ++c) {
                const double w = 1.0 + x[c];
                r[c] = w > 0.0 ? std::sqrt(w) : 0.0;
            }
        }
        ScalarField lap_v = laplacian_neumann(vn);
        const double lap2 = dot_volume(lap_v, lap_v);
        double e = entropy_integral(un) + 0.5 * grad_sq_integral(vn);
        if (eps > 0.0) e += 0.5 * eps * lap2;
        out.energy.push_back(e);
        out.dissipation.push_back(4.0 * grad_sq_integral(root) + lap2);
    }
    return out;
}

}  // namespace

EnergySeries entropy_energy(const Trajectory& traj, double eps) {
    if (traj.u.size() != traj.v.size() || traj.u.empty())
        throw InvalidInputError("entropy_energy: incomplete trajectory");
    if (eps < 0.0) throw InvalidInputError("entropy_energy: eps must be >= 0");
    return series_of(traj.u, traj.v, eps);
}

EnergySeries entropy_energy(const RegularizedStateTriple& st) {
    if (st.u.size() != st.v.size() || st.u.empty())
        throw InvalidInputError("entropy_energy: incomplete state");
    return series_of(st.u, st.v, st.eps);
}

double regularity_norm(const Trajectory& traj) {
    return spacetime_lp_norm(traj.u, traj.tg, 20.0 / 7.0);
}

StrongResidual strong_residual(const Trajectory& traj, const Control& f, FluxScheme scheme) {
    if (static_cast<int>(traj.u.size()) != traj.tg.nodes())
        throw InvalidInputError("strong_residual: incomplete trajectory");
    if (static_cast<int>(f.f.size()) != traj.tg.nodes())
        throw InvalidInputError("strong_residual: control node count does not match");
    const Grid& g = *traj.grid;
    const TimeGrid& tg = traj.tg;
    const double dt = tg.dt();
    const auto& mask = g.control_mask();

    StrongResidual out;
    ScalarField res(g);
    for (int n = 0; n < tg.steps(); ++n) {
        const std::size_t m = static_cast<std::size_t>(n);
        const ScalarField& u0 = traj.u[m];
        const ScalarField& u1 = traj.u[m + 1];
        const ScalarField& v0 = traj.v[m];
        const ScalarField& v1 = traj.v[m + 1];

        {
            ScalarField lap = laplacian_neumann(v1);
            const double* a = v1.data();
            const double* b = v0.data();
            const double* l = lap.data();
            const double* u = u0.data();
            const double* ff = f.f[m].data();
            double* r = res.data();
            for (std::int64_t c = 0; c < g.cell_count(); ++c) {
                const double prod = mask[static_cast<std::size_t>(c)] ? ff[c] * b[c] : 0.0;
                r[c] = (a[c] - b[c]) / dt - l[c] + a[c] - u[c] - prod;
            }
            out.residual_v = std::max(out.residual_v, l2_norm(res));
        }
        {
            ScalarField lap = laplacian_neumann(u1);
            ScalarField drift = chemo_flux_divergence(u0, v1, scheme);
            const double* a = u1.data();
            const double* b = u0.data();
            const double* l = lap.data();
            const double* d = drift.data();
            double* r = res.data();
            for (std::int64_t c = 0; c < g.cell_count(); ++c)
                r[c] = (a[c] - b[c]) / dt - l[c] - d[c];
            out.residual_u = std::max(out.residual_u, l2_norm(res));
        }
    }
    return out;
}

}  // namespace chemoctrl
