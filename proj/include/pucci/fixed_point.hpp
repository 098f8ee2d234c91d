#pragma once

#include <vector>

#include "pucci/solver.hpp"

namespace pucci {

struct FixedPointOptions {
    int max_iterations = 50;
    double tol = 1e-7;           // sup-norm stop for consecutive iterates
    double delta1 = 0.1;         // smallness threshold ||mu||_q ||f||_p^{m-1}
    int store_every = 1;         // keep 1 so the final residual audit sees march dt
    int divergence_run = 3;      // consecutive growing diffs that trigger abort
};

struct FixedPointLog {
    std::vector<double> step_diffs;  // sup |v_{k+1} - v_k| per iteration
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    double final_residual = 0.0;     // sup |scheme residual| of the last iterate
    double smallness_value = 0.0;    // ||mu||_q (||f||_p + ||psi||_{W^{2,1}_p})^{m-1}
    bool smallness_ok = false;       // smallness_value <= delta1
};

/// Frozen-gradient iteration for u_t + P_branch(D^2 u) + s mu |Du|^m + s f = 0
/// with m >= 1: v_0 solves the problem without the gradient term, then each
/// round solves the linear problem with source f + mu |Dv_k|^m (upwind gradient
/// of the previous iterate, branch-matched so the converged residual audit is
/// consistent). psi supplies both the boundary data and the norm in the
/// smallness certificate. Throws NumericalError after `divergence_run`
/// consecutive growing steps or on non-finite states; the log is filled either
/// way when `log` is non-null.
GridFunction superlinear_fixed_point(const EquationSpec& spec, const SpaceTimeGrid& grid,
                                     const BoundaryFn& psi, const FixedPointOptions& options = {},
                                     FixedPointLog* log = nullptr);

}  // namespace pucci
