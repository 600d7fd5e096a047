#include "chemoctrl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemoctrl/parallel.hpp"
#include "chemoctrl/reduce.hpp"

namespace chemoctrl {

namespace {

struct AxisInfo {
    std::int64_t n;
    std::int64_t stride;
    double inv_h;
    double inv_h2;
};

struct StencilLayout {
    int ndim;
    AxisInfo axis[3];
};

StencilLayout layout_of(const Grid& g) {
    StencilLayout s{};
    s.ndim = g.ndim();
    for (int a = 0; a < s.ndim; ++a) {
        const double h = g.spacing(a);
        s.axis[a] = AxisInfo{g.dim(a), g.stride(a), 1.0 / h, 1.0 / (h * h)};
    }
    return s;
}

inline double face_value(double ul, double ur, double dsel, FluxScheme scheme) {
    if (scheme == FluxScheme::central) return 0.5 * (ul + ur);
    if (dsel < 0.0) return ul;  // drift velocity -dv/h > 0: donor is the lower cell
    if (dsel > 0.0) return ur;
    return 0.5 * (ul + ur);
}

}  // namespace

ScalarField laplacian_neumann(const ScalarField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    const StencilLayout lay = layout_of(g);
    const double* x = f.data();
    double* y = out.data();
    parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t c = b; c < e; ++c) {
            double acc = 0.0;
            for (int a = 0; a < lay.ndim; ++a) {
                const AxisInfo& ax = lay.axis[a];
                const std::int64_t i = (c / ax.stride) % ax.n;
                const double dr = (i + 1 < ax.n) ? x[c + ax.stride] - x[c] : 0.0;
                const double dl = (i > 0) ? x[c] - x[c - ax.stride] : 0.0;
                acc += (dr - dl) * ax.inv_h2;
            }
            y[c] = acc;
        }
    });
    return out;
}

ScalarField chemo_flux_divergence(const ScalarField& u, const ScalarField& v, FluxScheme scheme,
                                  const ScalarField* upwind_by) {
    check_same_grid(u, v, "chemo_flux_divergence");
    if (upwind_by) check_same_grid(u, *upwind_by, "chemo_flux_divergence(upwind_by)");
    const Grid& g = u.grid();
    ScalarField out(g);
    const StencilLayout lay = layout_of(g);
    const double* uu = u.data();
    const double* vv = v.data();
    const double* sel = upwind_by ? upwind_by->data() : vv;
    double* y = out.data();
    parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t c = b; c < e; ++c) {
            double acc = 0.0;
            for (int a = 0; a < lay.ndim; ++a) {
                const AxisInfo& ax = lay.axis[a];
                const std::int64_t i = (c / ax.stride) % ax.n;
                double fr = 0.0, fl = 0.0;
                if (i + 1 < ax.n) {
                    const double dv = vv[c + ax.stride] - vv[c];
                    const double ds = sel[c + ax.stride] - sel[c];
                    fr = face_value(uu[c], uu[c + ax.stride], ds, scheme) * dv * ax.inv_h;
                }
                if (i > 0) {
                    const double dv = vv[c] - vv[c - ax.stride];
                    const double ds = sel[c] - sel[c - ax.stride];
                    fl = face_value(uu[c - ax.stride], uu[c], ds, scheme) * dv * ax.inv_h;
                }
                acc += (fr - fl) * ax.inv_h;
            }
            y[c] = acc;
        }
    });
    return out;
}

ScalarField chemo_flux_divergence_transpose_u(const ScalarField& w, const ScalarField& v,
                                              FluxScheme scheme, const ScalarField* upwind_by) {
    check_same_grid(w, v, "chemo_flux_divergence_transpose_u");
    if (upwind_by) check_same_grid(w, *upwind_by, "chemo_flux_divergence_transpose_u(upwind_by)");
    const Grid& g = w.grid();
    ScalarField out(g);
    const StencilLayout lay = layout_of(g);
    const double* ww = w.data();
    const double* vv = v.data();
    const double* sel = upwind_by ? upwind_by->data() : vv;
    double* y = out.data();
    parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t c = b; c < e; ++c) {
            double acc = 0.0;
            for (int a = 0; a < lay.ndim; ++a) {
                const AxisInfo& ax = lay.axis[a];
                const std::int64_t i = (c / ax.stride) % ax.n;
                if (i + 1 < ax.n) {  // c is the lower cell of this face
                    const double dv = vv[c + ax.stride] - vv[c];
                    const double ds = sel[c + ax.stride] - sel[c];
                    const double t = dv * (ww[c] - ww[c + ax.stride]) * ax.inv_h2;
                    const double wt = (scheme == FluxScheme::central)
                                          ? 0.5
                                          : (ds < 0.0 ? 1.0 : (ds > 0.0 ? 0.0 : 0.5));
                    acc += wt * t;
                }
                if (i > 0) {  // c is the upper cell of this face
                    const double dv = vv[c] - vv[c - ax.stride];
                    const double ds = sel[c] - sel[c - ax.stride];
                    const double t = dv * (ww[c - ax.stride] - ww[c]) * ax.inv_h2;
                    const double wt = (scheme == FluxScheme::central)
                                          ? 0.5
                                          : (ds > 0.0 ? 1.0 : (ds < 0.0 ? 0.0 : 0.5));
                    acc += wt * t;
                }
            }
            y[c] = acc;
        }
    });
    return out;
}

double integrate(const ScalarField& f) {
    const double* x = f.data();
    return f.grid().cell_volume() * indexed_sum(f.size(), [x](std::int64_t i) { return x[i]; });
}

double dot_volume(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a, b, "dot_volume");
    const double* x = a.data();
    const double* y = b.data();
    return a.grid().cell_volume() *
           indexed_sum(a.size(), [x, y](std::int64_t i) { return x[i] * y[i]; });
}

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InvalidInputError("lp_norm: p must be finite and >= 1, got " + std::to_string(p));
    const double* x = f.data();
    double s;
    if (p == 1.0) {
        s = indexed_sum(f.size(), [x](std::int64_t i) { return std::abs(x[i]); });
    } else if (p == 2.0) {
        s = indexed_sum(f.size(), [x](std::int64_t i) { return x[i] * x[i]; });
    } else {
        s = indexed_sum(f.size(), [x, p](std::int64_t i) { return std::pow(std::abs(x[i]), p); });
    }
    s *= f.grid().cell_volume();
    if (p == 1.0) return s;
    if (p == 2.0) return std::sqrt(s);
    return std::pow(s, 1.0 / p);
}

double l2_norm(const ScalarField& f) { return lp_norm(f, 2.0); }

namespace {

void check_series(const std::vector<ScalarField>& series, const TimeGrid& tg, const char* where) {
    if (static_cast<int>(series.size()) != tg.nodes())
        throw InvalidInputError(std::string(where) + ": series length " +
                                std::to_string(series.size()) + " != time nodes " +
                                std::to_string(tg.nodes()));
    for (std::size_t n = 1; n < series.size(); ++n)
        check_same_grid(series[0], series[n], where);
}

}  // namespace

double spacetime_lp_norm(const std::vector<ScalarField>& series, const TimeGrid& tg, double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InvalidInputError("spacetime_lp_norm: p must be finite and >= 1");
    check_series(series, tg, "spacetime_lp_norm");
    const double vol = series[0].grid().cell_volume();
    double acc = 0.0;
    for (int n = 0; n < tg.nodes(); ++n) {
        const double* x = series[static_cast<std::size_t>(n)].data();
        double s;
        if (p == 2.0) {
            s = indexed_sum(series[0].size(), [x](std::int64_t i) { return x[i] * x[i]; });
        } else {
            s = indexed_sum(series[0].size(),
                            [x, p](std::int64_t i) { return std::pow(std::abs(x[i]), p); });
        }
        acc += tg.weight(n) * tg.dt() * vol * s;
    }
    return std::pow(acc, 1.0 / p);
}

double spacetime_dot(const std::vector<ScalarField>& a, const std::vector<ScalarField>& b,
                     const TimeGrid& tg) {
    check_series(a, tg, "spacetime_dot");
    check_series(b, tg, "spacetime_dot");
    check_same_grid(a[0], b[0], "spacetime_dot");
    const double vol = a[0].grid().cell_volume();
    double acc = 0.0;
    for (int n = 0; n < tg.nodes(); ++n) {
        const double* x = a[static_cast<std::size_t>(n)].data();
        const double* y = b[static_cast<std::size_t>(n)].data();
        acc += tg.weight(n) * tg.dt() * vol *
               indexed_sum(a[0].size(), [x, y](std::int64_t i) { return x[i] * y[i]; });
    }
    return acc;
}

double spacetime_l2_norm(const std::vector<ScalarField>& series, const TimeGrid& tg) {
    return std::sqrt(std::max(0.0, spacetime_dot(series, series, tg)));
}

double grad_sq_integral(const ScalarField& f) {
    const Grid& g = f.grid();
    const StencilLayout lay = layout_of(g);
    const double* x = f.data();
    const double s = indexed_sum(g.cell_count(), [&](std::int64_t c) {
        double acc = 0.0;
        for (int a = 0; a < lay.ndim; ++a) {
            const AxisInfo& ax = lay.axis[a];
            const std::int64_t i = (c / ax.stride) % ax.n;
            if (i + 1 < ax.n) {
                const double d = (x[c + ax.stride] - x[c]) * ax.inv_h;
                acc += d * d;
            }
        }
        return acc;
    });
    return s * g.cell_volume();
}

double max_face_gradient(const ScalarField& f) {
    const Grid& g = f.grid();
    const StencilLayout lay = layout_of(g);
    const double* x = f.data();
    double best = 0.0;
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        for (int a = 0; a < lay.ndim; ++a) {
            const AxisInfo& ax = lay.axis[a];
            const std::int64_t i = (c / ax.stride) % ax.n;
            if (i + 1 < ax.n)
                best = std::max(best, std::abs(x[c + ax.stride] - x[c]) * ax.inv_h);
        }
    }
    return best;
}

ScalarField positive_part(const ScalarField& f) {
    ScalarField out(f.grid());
    const double* x = f.data();
    double* y = out.data();
    parallel_for(f.size(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t c = b; c < e; ++c) y[c] = x[c] > 0.0 ? x[c] : 0.0;
    });
    return out;
}

}  // namespace chemoctrl
