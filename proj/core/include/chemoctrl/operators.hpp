#pragma once

#include <vector>

#include "chemoctrl/grid.hpp"

namespace chemoctrl {

// Face value of the transported density in the drift term.
enum class FluxScheme { central, upwind };

// Seven-point (five-point, three-point) Laplacian with zero-flux boundary
// closure: boundary faces carry no flux, so the discrete integral of the
// result telescopes to zero.
ScalarField laplacian_neumann(const ScalarField& f);

// Divergence of the face flux  u_face * (dv/dn)  with zero-flux closure; the
// discrete form of div(u grad v). `central` averages u across the face,
// `upwind` takes the donor cell against the drift velocity -grad v. When
// `upwind_by` is given, the donor choice uses its face differences instead of
// v's (used to freeze the selection pattern when linearizing).
ScalarField chemo_flux_divergence(const ScalarField& u, const ScalarField& v,
                                  FluxScheme scheme = FluxScheme::central,
                                  const ScalarField* upwind_by = nullptr);

// Transpose (in the cell-volume inner product) of the linear map
// u -> chemo_flux_divergence(u, v) at fixed v. Discrete form of -grad(w).grad v.
ScalarField chemo_flux_divergence_transpose_u(const ScalarField& w, const ScalarField& v,
                                              FluxScheme scheme = FluxScheme::central,
                                              const ScalarField* upwind_by = nullptr);

// Midpoint-rule integral over the domain (deterministic pairwise reduction).
double integrate(const ScalarField& f);

// Cell-volume inner product of two fields.
double dot_volume(const ScalarField& a, const ScalarField& b);

// L^p norm with the midpoint space rule; requires finite p >= 1.
double lp_norm(const ScalarField& f, double p);

double l2_norm(const ScalarField& f);

// Space-time L^p norm over a node series (trapezoidal weights in time).
// The series length must equal timegrid.nodes().
double spacetime_lp_norm(const std::vector<ScalarField>& series, const TimeGrid& tg, double p);

// Space-time inner product with the same trapezoidal time weights.
double spacetime_dot(const std::vector<ScalarField>& a, const std::vector<ScalarField>& b,
                     const TimeGrid& tg);

double spacetime_l2_norm(const std::vector<ScalarField>& series, const TimeGrid& tg);

// Face-difference quadrature of the Dirichlet energy: integral of |grad f|^2.
// Equals the inner product of f with -laplacian_neumann(f) up to roundoff.
double grad_sq_integral(const ScalarField& f);

// Largest face-gradient magnitude, max over interior faces of |df|/h.
double max_face_gradient(const ScalarField& f);

// Pointwise max(f, 0).
ScalarField positive_part(const ScalarField& f);

}  // namespace chemoctrl
