#include "pucci/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace pucci {

double discretize_pucci(const PucciPair& pair, Branch branch, const GridFunction& u,
                        int k, int i, int j, double h) {
    const double h2 = h * h;
    if (u.grid().n == 1) {
        const double s = (u.at(k, i + 1) - 2.0 * u.at(k, i) + u.at(k, i - 1)) / h2;
        return pucci_scalar(pair, s, branch);
    }
    const double c = u.at(k, i, j);
    const double sx = (u.at(k, i + 1, j) - 2.0 * c + u.at(k, i - 1, j)) / h2;
    const double sy = (u.at(k, i, j + 1) - 2.0 * c + u.at(k, i, j - 1)) / h2;
    // Diagonal lattice step has length h*sqrt(2).
    const double sd1 = (u.at(k, i + 1, j + 1) - 2.0 * c + u.at(k, i - 1, j - 1)) / (2.0 * h2);
    const double sd2 = (u.at(k, i + 1, j - 1) - 2.0 * c + u.at(k, i - 1, j + 1)) / (2.0 * h2);
    const double axes = pucci_scalar(pair, sx, branch) + pucci_scalar(pair, sy, branch);
    const double diag = pucci_scalar(pair, sd1, branch) + pucci_scalar(pair, sd2, branch);
    return branch == Branch::plus ? std::max(axes, diag) : std::min(axes, diag);
}

double upwind_grad_norm(Branch branch, const GridFunction& u, int k, int i, int j, double h) {
    // The marched term is -dt * s * mu * |Du|^m. Monotonicity requires the
    // discrete |Du| to depend on each neighbor with the sign opposite to s:
    //   plus branch (term subtracted):  per axis max(D^- u, -D^+ u, 0)
    //   minus branch (term added):      per axis max(D^+ u, -D^- u, 0)
    const double c = u.at(k, i, j);
    double sum = 0.0;
    auto axis_part = [&](double um, double up) {
        const double dm = (c - um) / h;   // D^-
        const double dp = (up - c) / h;   // D^+
        const double g = branch == Branch::plus ? std::max({dm, -dp, 0.0})
                                                : std::max({dp, -dm, 0.0});
        return g * g;
    };
    sum += axis_part(u.at(k, i - 1, j), u.at(k, i + 1, j));
    if (u.grid().n == 2) sum += axis_part(u.at(k, i, j - 1), u.at(k, i, j + 1));
    return std::sqrt(sum);
}

double cfl_dt_bound(const EquationSpec& spec, int n, double h, double gmax) {
    return h * h / (4.0 * n * spec.pair.Lambda + 2.0 * h * gmax);
}

namespace {

// Gradient factor G = mu * m * |Du|^(m-1) entering the CFL denominator,
// bounded over the current level.
double gradient_cfl_factor(const EquationSpec& spec, double mu_max, double grad_max) {
    if (spec.m == 1.0) return mu_max;
    return mu_max * spec.m * std::pow(std::max(grad_max, 1e-30), spec.m - 1.0);
}

}  // namespace

int plan_march_steps(const EquationSpec& spec, const SpaceTimeGrid& grid, double gmax,
                     int store_levels) {
    const double bound = cfl_dt_bound(spec, grid.n, grid.h(), gmax);
    int steps = static_cast<int>(std::ceil(grid.box.depth / bound));
    if (store_levels > 0) {
        const int blocks = (steps + store_levels - 1) / store_levels;
        steps = blocks * store_levels;
    }
    return std::max(steps, std::max(1, store_levels));
}

GridFunction solve_parabolic(const EquationSpec& spec, const SpaceTimeGrid& grid,
                             const BoundaryFn& boundary, const SolveOptions& opts,
                             SolveStats* stats) {
    grid.require_valid();
    if (!boundary) throw ContractViolation("solve_parabolic: boundary callback required");
    if (spec.m < 1.0) throw ContractViolation("solve_parabolic: m < 1 unsupported");
    if (opts.store_every < 1 || grid.nt % opts.store_every != 0)
        throw ContractViolation("solve_parabolic: store_every must divide nt");

    const int n = grid.n, nx = grid.nx, nt = grid.nt;
    const double h = grid.h(), dt = grid.dt();
    const double s_b = branch_sign(spec.branch);

    SpaceTimeGrid out_grid = grid;
    out_grid.nt = nt / opts.store_every;
    GridFunction out(out_grid);

    // Two marching layers; out keeps only stored levels.
    const std::size_t level_nodes = static_cast<std::size_t>(grid.nodes_per_level());
    std::vector<double> cur(level_nodes), nxt(level_nodes);
    std::vector<double> mu_row(level_nodes), f_row(level_nodes);

    auto lin = [&](int i, int j) {
        return n == 1 ? static_cast<std::size_t>(i)
                      : static_cast<std::size_t>(i) * nx + static_cast<std::size_t>(j);
    };

    // Bottom face.
    double mu_max = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < (n == 2 ? nx : 1); ++j) {
            const auto p = grid.point(i, j);
            cur[lin(i, j)] = boundary(p, grid.t(0));
        }
    }
    for (std::size_t idx = 0; idx < level_nodes; ++idx)
        if (!std::isfinite(cur[idx]))
            throw NumericalError("solve_parabolic: non-finite boundary data at t = bottom");

    // Store level 0.
    for (std::size_t idx = 0; idx < level_nodes; ++idx) out.raw()[idx] = cur[idx];

    double gmax_seen = opts.gmax_hint;
    double cfl_tightest = std::numeric_limits<double>::infinity();

    // Wrap cur in a GridFunction view for the stencil helpers: cheapest is a
    // one-level grid sharing the layout.
    SpaceTimeGrid level_grid = grid;
    level_grid.nt = 1;
    GridFunction view(level_grid);

    for (int step = 0; step < nt; ++step) {
        const double t_now = grid.t(step);
        const double t_next = grid.t(step + 1);

        // Sample coefficients and sources for this level.
        double grad_max = 0.0;
        mu_max = 0.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < (n == 2 ? nx : 1); ++j) {
                const auto p = grid.point(i, j);
                mu_row[lin(i, j)] = spec.mu(p, t_now);
                f_row[lin(i, j)] = spec.f(p, t_now);
                mu_max = std::max(mu_max, std::fabs(mu_row[lin(i, j)]));
            }

        std::copy(cur.begin(), cur.end(), view.raw().begin());

        // Interior update.
        for (int i = 1; i < nx - 1; ++i) {
            for (int j = (n == 2 ? 1 : 0); j < (n == 2 ? nx - 1 : 1); ++j) {
                const double pucci_h = discretize_pucci(spec.pair, spec.branch, view, 0, i, j, h);
                const double gmag = upwind_grad_norm(spec.branch, view, 0, i, j, h);
                grad_max = std::max(grad_max, gmag);
                const double gpow = spec.m == 1.0 ? gmag : std::pow(gmag, spec.m);
                const double rhs = pucci_h + s_b * mu_row[lin(i, j)] * gpow + s_b * f_row[lin(i, j)];
                nxt[lin(i, j)] = cur[lin(i, j)] - dt * rhs;
            }
        }
        // Lateral boundary from data at t_next.
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < (n == 2 ? nx : 1); ++j) {
                if (!grid.boundary_node(i, j)) continue;
                nxt[lin(i, j)] = boundary(grid.point(i, j), t_next);
            }
        }

        // CFL accounting; on the first step this acts as the up-front refusal.
        const double gfac = gradient_cfl_factor(spec, mu_max, std::max(grad_max, opts.gmax_hint));
        gmax_seen = std::max(gmax_seen, gfac);
        const double bound = cfl_dt_bound(spec, n, h, gfac);
        cfl_tightest = std::min(cfl_tightest, bound);
        if (opts.check_cfl_each_step && dt > bound * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "solve_parabolic: CFL violation at step " << step << ": dt = " << dt
               << " exceeds required dt <= " << bound << " (G = " << gfac
               << "); increase nt to at least " << std::ceil(grid.box.depth / bound);
            throw NumericalError(os.str());
        }

        for (std::size_t idx = 0; idx < level_nodes; ++idx) {
            if (!std::isfinite(nxt[idx])) {
                std::ostringstream os;
                os << "solve_parabolic: non-finite state at step " << step + 1 << " (t = "
                   << t_next << "), node " << idx;
                throw NumericalError(os.str());
            }
        }

        cur.swap(nxt);
        if ((step + 1) % opts.store_every == 0) {
            const std::size_t level = static_cast<std::size_t>((step + 1) / opts.store_every);
            std::copy(cur.begin(), cur.end(), out.raw().begin() + level * level_nodes);
        }
    }

    if (stats) {
        stats->march_steps = nt;
        stats->dt_march = dt;
        stats->gmax_seen = gmax_seen;
        stats->cfl_limit = cfl_tightest;
    }
    return out;
}

double scheme_residual(const EquationSpec& spec, const GridFunction& u, int k, int i, int j) {
    const SpaceTimeGrid& g = u.grid();
    if (k < 0 || k >= g.nt) throw ContractViolation("scheme_residual: k out of range");
    const double h = g.h(), dt = g.dt();
    const double s_b = branch_sign(spec.branch);
    const auto p = g.point(i, j);
    const double t = g.t(k);
    const double du_dt = (u.at(k + 1, i, j) - u.at(k, i, j)) / dt;
    const double pucci_h = discretize_pucci(spec.pair, spec.branch, u, k, i, j, h);
    const double gmag = upwind_grad_norm(spec.branch, u, k, i, j, h);
    const double gpow = spec.m == 1.0 ? gmag : std::pow(gmag, spec.m);
    return du_dt + pucci_h + s_b * spec.mu(p, t) * gpow + s_b * spec.f(p, t);
}

ResidualAudit residual_audit(const EquationSpec& spec, const GridFunction& u, double tol_factor) {
    const SpaceTimeGrid& g = u.grid();
    ResidualAudit a;
    a.tolerance = tol_factor * g.h() * g.h();
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < g.nt; ++k) {
        for (int i = 1; i < g.nx - 1; ++i) {
            for (int j = (g.n == 2 ? 1 : 0); j < (g.n == 2 ? g.nx - 1 : 1); ++j) {
                const double r = scheme_residual(spec, u, k, i, j);
                hi = std::max(hi, r);
                lo = std::min(lo, r);
            }
        }
    }
    a.max_residual = hi;
    a.min_residual = lo;
    a.subsolution_ok = hi <= a.tolerance;
    a.supersolution_ok = lo >= -a.tolerance;
    return a;
}

}  // namespace pucci
