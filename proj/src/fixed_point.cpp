#include "pucci/fixed_point.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "pucci/errors.hpp"
#include "pucci/norms.hpp"

namespace pucci {
namespace {

// Upwind gradient magnitude of a stored iterate at every node; lateral columns
// copy their interior neighbour (interpolation at interior lattice points never
// reads them, this just keeps the array total).
GridFunction gradient_magnitude(Branch branch, const GridFunction& u) {
    const SpaceTimeGrid& g = u.grid();
    GridFunction out(g);
    const double h = g.h();
    const int ny = g.n == 2 ? g.nx : 1;
    for (int k = 0; k <= g.nt; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const int ci = std::min(std::max(i, 1), g.nx - 2);
                const int cj = g.n == 2 ? std::min(std::max(j, 1), g.nx - 2) : 0;
                out.raw()[out.index(k, i, j)] = upwind_grad_norm(branch, u, k, ci, cj, h);
            }
        }
    }
    return out;
}

}  // namespace

GridFunction superlinear_fixed_point(const EquationSpec& spec, const SpaceTimeGrid& grid,
                                     const BoundaryFn& psi, const FixedPointOptions& options,
                                     FixedPointLog* log) {
    grid.require_valid();
    if (spec.m < 1.0)
        throw ContractViolation("superlinear_fixed_point: gradient power m must be >= 1");
    if (options.max_iterations < 1 || options.divergence_run < 1)
        throw ContractViolation("superlinear_fixed_point: bad iteration limits");

    FixedPointLog local;
    FixedPointLog& lg = log ? *log : local;
    lg = FixedPointLog{};

    // Smallness certificate on a decimated quadrature grid.
    {
        SpaceTimeGrid qg = grid;
        qg.nt = std::min(grid.nt, 256);
        const double inf = std::numeric_limits<double>::infinity();
        const double qe = spec.q > 0.0 ? spec.q : inf;
        const double pe = spec.p > 0.0 ? spec.p : inf;
        const double mu_norm = field_lq_norm(spec.mu, qg, qg.box, qe);
        const double f_norm = field_lq_norm(spec.f, qg, qg.box, pe);
        GridFunction psig(qg);
        const int ny = qg.n == 2 ? qg.nx : 1;
        for (int k = 0; k <= qg.nt; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < qg.nx; ++i)
                    psig.set(k, i, j, psi(qg.point(i, j), qg.t(k)));
        const double psi_norm =
            pe == inf ? std::max(std::abs(psig.max_value()), std::abs(psig.min_value()))
                      : w21p_norm(psig, qg.box, pe);
        lg.smallness_value = mu_norm * std::pow(f_norm + psi_norm, spec.m - 1.0);
        lg.smallness_ok = lg.smallness_value <= options.delta1;
    }

    EquationSpec lin = spec;
    lin.mu = make_zero_field();

    SolveOptions sopt;
    sopt.store_every = options.store_every;

    GridFunction v = solve_parabolic(lin, grid, psi, sopt);
    double prev_diff = std::numeric_limits<double>::infinity();
    int growing = 0;

    for (int it = 0; it < options.max_iterations; ++it) {
        auto gm = std::make_shared<GridFunction>(gradient_magnitude(spec.branch, v));
        ScalarField frozen;
        frozen.label = "frozen_gradient_source(" + spec.f.label + ")";
        const ScalarField f_in = spec.f;
        const ScalarField mu_in = spec.mu;
        const double m = spec.m;
        frozen.sample = [f_in, mu_in, gm, m](std::array<double, 3> x, double t) {
            return f_in(x, t) + mu_in(x, t) * std::pow(gm->value(x, t), m);
        };
        lin.f = frozen;

        GridFunction next = [&]() -> GridFunction {
            try {
                return solve_parabolic(lin, grid, psi, sopt);
            } catch (const NumericalError& e) {
                lg.diverged = true;
                lg.iterations = it + 1;
                throw NumericalError(
                    std::string("superlinear_fixed_point: iterate solve failed: ") + e.what());
            }
        }();

        double diff = 0.0;
        for (std::size_t idx = 0; idx < next.raw().size(); ++idx)
            diff = std::max(diff, std::abs(next.raw()[idx] - v.raw()[idx]));
        lg.step_diffs.push_back(diff);
        lg.iterations = it + 1;
        v = std::move(next);

        if (diff <= options.tol) {
            lg.converged = true;
            break;
        }
        growing = diff > prev_diff ? growing + 1 : 0;
        prev_diff = diff;
        if (growing >= options.divergence_run) {
            lg.diverged = true;
            std::ostringstream msg;
            msg << "superlinear_fixed_point: diverging, " << growing
                << " consecutive growing steps, last sup-diff " << diff;
            throw NumericalError(msg.str());
        }
    }

    {
        const ResidualAudit audit = residual_audit(spec, v);
        lg.final_residual = std::max(std::abs(audit.max_residual), std::abs(audit.min_residual));
    }
    return v;
}

}  // namespace pucci
