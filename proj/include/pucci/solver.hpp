#pragma once

#include <functional>
#include <optional>
#include <string>

#include "pucci/grid.hpp"
#include "pucci/pucci_core.hpp"

namespace pucci {

using BoundaryFn = std::function<double(const std::array<double, 3>&, double)>;

/// Wide-stencil discretization of the extremal operator at an interior node
/// of one time level (values = that level's nodes).
///   n=1: exact scalar rule on the centered second difference.
///   n=2: orthogonal frames {axes} and {diagonals}; per frame the scalar rule
///        is applied to each directional second difference and summed, then
///        max (plus) / min (minus) over frames. Monotone by construction;
///        consistency error is O(h^2) plus the frame-resolution gap.
double discretize_pucci(const PucciPair& pair, Branch branch, const GridFunction& u,
                        int k, int i, int j, double h);

/// Godunov upwind gradient magnitude for the branch-signed transport term.
/// The branch fixes which one-sided differences enter so that the marched
/// term keeps the scheme monotone.
double upwind_grad_norm(Branch branch, const GridFunction& u, int k, int i, int j, double h);

struct SolveOptions {
    int store_every = 1;       // keep every store_every-th time level
    double gmax_hint = 0.0;    // lower bound for the gradient bound used in the CFL check
    bool check_cfl_each_step = true;
};

struct SolveStats {
    int march_steps = 0;
    double dt_march = 0.0;
    double gmax_seen = 0.0;
    double cfl_limit = 0.0;    // the dt bound at the tightest step
};

/// March dt bound h^2 / (4 n Lambda + 2 h G) with G = sup mu * m * |Du|^(m-1).
double cfl_dt_bound(const EquationSpec& spec, int n, double h, double gmax);

/// Explicit Euler march of u_t + P_branch(D^2 u) + s mu |Du|^m + s f = 0 on the
/// grid (grid.nt march steps), boundary data g on the parabolic boundary.
/// Refuses to start (NumericalError naming the required dt) when grid.dt()
/// violates the CFL bound; aborts with the step index if a state stops being
/// finite. Returns the field on a store-decimated grid (store_every must
/// divide grid.nt).
GridFunction solve_parabolic(const EquationSpec& spec, const SpaceTimeGrid& grid,
                             const BoundaryFn& boundary, const SolveOptions& opts = {},
                             SolveStats* stats = nullptr);

/// Discrete residual  (u^{k+1}-u^k)/dt + P_h + s mu |Du|^m + s f  at stored
/// level k (forward difference in time, stencils at level k). Interior only.
double scheme_residual(const EquationSpec& spec, const GridFunction& u, int k, int i, int j);

struct ResidualAudit {
    double max_residual = 0.0;   // max over interior nodes of the signed residual
    double min_residual = 0.0;
    double tolerance = 0.0;
    bool subsolution_ok = false;   // max_residual <= tolerance
    bool supersolution_ok = false; // min_residual >= -tolerance
};

/// Audit over all interior stored nodes; tolerance = tol_factor * h^2.
ResidualAudit residual_audit(const EquationSpec& spec, const GridFunction& u,
                             double tol_factor = 10.0);

/// Helper: march steps needed for the box at a given h-safety and gradient bound,
/// rounded up to a multiple of store_levels.
int plan_march_steps(const EquationSpec& spec, const SpaceTimeGrid& grid, double gmax,
                     int store_levels);

}  // namespace pucci
