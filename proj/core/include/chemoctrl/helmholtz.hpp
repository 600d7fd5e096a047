#pragma once

#include <vector>

#include "chemoctrl/grid.hpp"

namespace chemoctrl {

// Constant-coefficient problem  (a I - b Lap) x = rhs  with zero-flux
// boundary closure; a, b >= 0, not both zero. a = 0 needs a mean-zero rhs
// (the solution is then pinned to zero mean).
struct HelmholtzProblem {
    double a = 1.0;
    double b = 0.0;
    double tol = 1e-10;  // relative residual target, volume-weighted norm
    int max_iter = 0;    // 0 picks 10 * cells^(1/ndim)
    bool diagonal_precondition = false;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
    // Absolute residual norms, one entry per iterate, in the norm the iteration
    // minimizes (the M^{-1}-weighted norm when preconditioned): non-increasing.
    std::vector<double> residual_history;
};

// Matrix-free conjugate-residual iteration (the minimum-residual flavor of CG
// for this symmetric positive definite operator), so residual norms never
// increase. The operator maps means by  mean(A x) = a mean(x); the returned
// iterate is shifted onto the exact-solution mean, which makes the discrete
// integral identity  integrate(x) = integrate(rhs)/a  hold to roundoff. A warm
// start that already meets the tolerance comes back bitwise unchanged.
ScalarField helmholtz_solve(const HelmholtzProblem& prob, const ScalarField& rhs,
                            const ScalarField* warm_start = nullptr, SolveStats* stats = nullptr);

// Resolvent smoothing: solves (I - eps Lap) v = z. eps = 0 returns z itself.
// Preserves the integral of z exactly.
ScalarField smoother_apply(const ScalarField& z, double eps, double tol = 1e-12,
                           const ScalarField* warm_start = nullptr);

}  // namespace chemoctrl
