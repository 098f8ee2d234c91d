#include "pucci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pucci/errors.hpp"
#include "pucci/rng.hpp"

namespace pucci {
namespace {

double boundary_sup(const GridFunction& u) {
    const SpaceTimeGrid& g = u.grid();
    double best = -std::numeric_limits<double>::infinity();
    const int ny = g.n == 2 ? g.nx : 1;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < g.nx; ++i) best = std::max(best, u.at(0, i, j));
    for (int k = 1; k <= g.nt; ++k) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.boundary_node(i, j)) best = std::max(best, u.at(k, i, j));
    }
    return best;
}

double require_p(const EquationSpec& spec, const char* who) {
    if (!(spec.p > 0.0))
        throw ContractViolation(std::string(who) + ": the source exponent p must be set");
    return spec.p;
}

std::string format_eps(double eps) {
    std::ostringstream s;
    s << "C0_at_" << eps;
    return s.str();
}

}  // namespace

EstimateReport abp_check(const GridFunction& u, const EquationSpec& spec, double tol_factor) {
    EstimateReport rep;
    rep.kind = "abp";
    const SpaceTimeGrid& g = u.grid();
    const int n = g.n;
    const double p = require_p(spec, "abp_check");

    const ResidualAudit audit = residual_audit(spec, u, tol_factor);
    rep.assumed["tol_factor"] = tol_factor;
    rep.assumed["residual_tolerance"] = audit.tolerance;
    rep.assumed["p"] = p;

    const double sup_u = u.max_value();
    const double bsup = boundary_sup(u);
    const double thr = std::max(bsup, 0.0);
    const double slack = std::max(0.0, sup_u - thr);
    const double dpow = std::pow(g.box.par_diameter(), 2.0 - (n + 2.0) / p);
    const double f_norm = field_lq_norm(spec.f, g, g.box, p);

    rep.fitted["sup"] = sup_u;
    rep.fitted["boundary_sup"] = bsup;
    rep.fitted["slack"] = slack;
    rep.fitted["f_norm"] = f_norm;
    rep.fitted["diameter_power"] = dpow;

    bool ok = true;
    if (!audit.subsolution_ok) {
        ok = false;
        std::ostringstream w;
        w << "residual audit failed: max residual " << audit.max_residual << " > tolerance "
          << audit.tolerance;
        rep.witness = w.str();
    }

    if (f_norm > 0.0) {
        rep.fitted["C1"] = slack / (dpow * f_norm);
        const double rn = field_lp_norm_superlevel(spec.f, u, g.box, p, thr);
        rep.fitted["f_norm_contact"] = rn;
        if (rn > 0.0) {
            rep.fitted["C1_contact"] = slack / (dpow * rn);
        } else if (slack > audit.tolerance) {
            ok = false;
            if (rep.witness.empty())
                rep.witness = "interior excess with no source mass on the superlevel set";
            rep.fitted["contact_violation"] = 1.0;
        } else {
            rep.fitted["C1_contact"] = 0.0;
        }
    } else {
        rep.fitted["C1"] = 0.0;
        if (slack > audit.tolerance) {
            ok = false;
            rep.fitted["comparison_violation"] = 1.0;
            if (rep.witness.empty())
                rep.witness = "positive interior excess with zero source (comparison violated)";
        }
    }

    {
        ParabolicCube inner{n, g.box.center, 0.5 * g.box.half_width, g.box.t_top,
                            0.5 * g.box.depth};
        const double w21 = w21p_norm(u, inner, p);
        rep.fitted["w21p_interior"] = w21;
        if (f_norm > 0.0) rep.fitted["w21p_interior_over_f"] = w21 / f_norm;
    }

    rep.pass = ok;
    if (ok && rep.witness.empty()) rep.witness = "ok";
    return rep;
}

EstimateReport abp_superlinear_check(const GridFunction& u, const EquationSpec& spec,
                                     double tol_factor) {
    EstimateReport rep;
    rep.kind = "abp_superlinear";
    const SpaceTimeGrid& g = u.grid();
    const double p = require_p(spec, "abp_superlinear_check");
    if (!(spec.m > 1.0))
        throw ContractViolation("abp_superlinear_check: needs a superlinear gradient power m > 1");
    if (!(spec.q > 0.0) || !std::isfinite(spec.q))
        throw ContractViolation("abp_superlinear_check: needs a finite exponent q for mu");

    const ResidualAudit audit = residual_audit(spec, u, tol_factor);
    rep.assumed["tol_factor"] = tol_factor;
    rep.assumed["residual_tolerance"] = audit.tolerance;
    rep.assumed["p"] = p;
    rep.assumed["q"] = spec.q;
    rep.assumed["m"] = spec.m;

    const double sup_u = u.max_value();
    const double bsup = boundary_sup(u);
    const double slack = std::max(0.0, sup_u - std::max(bsup, 0.0));
    const double f_norm = field_lq_norm(spec.f, g, g.box, p);
    const double mu_norm = field_lq_norm(spec.mu, g, g.box, spec.q);

    rep.fitted["slack"] = slack;
    rep.fitted["f_norm"] = f_norm;
    rep.fitted["mu_norm"] = mu_norm;
    rep.fitted["small_regime_product"] = mu_norm * std::pow(f_norm, spec.m - 1.0);

    bool ok = audit.subsolution_ok;
    if (!ok) {
        std::ostringstream w;
        w << "residual audit failed: max residual " << audit.max_residual << " > tolerance "
          << audit.tolerance;
        rep.witness = w.str();
    }
    if (f_norm > 0.0) {
        const double envelope =
            std::pow(1.0 + std::pow(f_norm, (spec.m - 1.0) * spec.q) * std::pow(mu_norm, spec.q),
                     (p - 1.0) / p) *
            f_norm;
        rep.fitted["envelope"] = envelope;
        rep.fitted["C_envelope"] = slack / envelope;
    } else if (slack > audit.tolerance) {
        ok = false;
        rep.fitted["comparison_violation"] = 1.0;
        if (rep.witness.empty())
            rep.witness = "positive interior excess with zero source (comparison violated)";
    } else {
        rep.fitted["C_envelope"] = 0.0;
    }

    rep.pass = ok;
    if (ok && rep.witness.empty()) rep.witness = "ok";
    return rep;
}

TimePartition time_partition(const ScalarField& mu, double q, double delta_hat,
                             const SpaceTimeGrid& grid) {
    grid.require_valid();
    if (!(q >= 1.0) || !std::isfinite(q))
        throw ContractViolation("time_partition: q must be finite and >= 1");
    if (!(delta_hat > 0.0)) throw ContractViolation("time_partition: delta_hat must be positive");

    const int n = grid.n;
    const double h = grid.h();
    const double dt = grid.dt();
    const double bottom = grid.box.t_bottom(), top = grid.box.t_top;

    // Per-level spatial integral of |mu|^q with dual-cell weights.
    std::vector<double> levelq(static_cast<std::size_t>(grid.nt) + 1, 0.0);
    const int ny = n == 2 ? grid.nx : 1;
    auto wx = [&](int i) { return (i == 0 || i == grid.nx - 1) ? 0.5 * h : h; };
    for (int k = 0; k <= grid.nt; ++k) {
        const double t = grid.t(k);
        double acc = 0.0;
        for (int j = 0; j < ny; ++j) {
            const double wj = n == 2 ? wx(j) : 1.0;
            for (int i = 0; i < grid.nx; ++i)
                acc += wx(i) * wj * std::pow(std::fabs(mu(grid.point(i, j), t)), q);
        }
        levelq[k] = acc;
    }
    // Mass of (a, b]: time dual cells clipped to the slab.
    auto slab_mass = [&](double a, double b) {
        double s = 0.0;
        for (int k = 0; k <= grid.nt; ++k) {
            const double lo = std::max(grid.t(k) - 0.5 * dt, a);
            const double hi = std::min(grid.t(k) + 0.5 * dt, b);
            if (hi > lo) s += (hi - lo) * levelq[k];
        }
        return s;
    };

    TimePartition out;
    out.delta_hat = delta_hat;
    const double target = std::pow(delta_hat, q);
    const double total = slab_mass(bottom, top);
    out.total_norm = std::pow(total, 1.0 / q);

    double a = bottom;
    while (a < top) {
        if (slab_mass(a, top) <= target * (1.0 + 1e-12)) {
            out.cuts.push_back(top);
            break;
        }
        double lo = a, hi = top;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (slab_mass(a, mid) <= target)
                lo = mid;
            else
                hi = mid;
        }
        double b = lo;
        if (top - b < 1e-9 * grid.box.depth) b = top;
        if (b - a < 1e-12 * grid.box.depth) {
            std::ostringstream msg;
            msg << "time_partition: the slice starting at t = " << a
                << " already exceeds delta_hat = " << delta_hat
                << " (no admissible slab width at this resolution)";
            throw ContractViolation(msg.str());
        }
        out.cuts.push_back(b);
        a = b;
        if (out.cuts.size() > 200000)
            throw NumericalError("time_partition: more than 2e5 slabs, aborting");
    }
    out.count = static_cast<int>(out.cuts.size());
    out.count_bound_ok =
        out.count <= 1.0 + std::pow(out.total_norm / delta_hat, q) + 1e-6;
    return out;
}

EstimateReport weak_harnack_report(const std::vector<GridFunction>& levels,
                                   const EquationSpec& spec, const std::vector<double>& eps0_grid,
                                   double tol_factor) {
    EstimateReport rep;
    rep.kind = "weak_harnack";
    if (levels.empty()) throw ContractViolation("weak_harnack_report: empty refinement family");
    if (eps0_grid.empty()) throw ContractViolation("weak_harnack_report: empty eps0 grid");
    const double p = require_p(spec, "weak_harnack_report");
    const int n = levels.front().grid().n;
    const CubeCatalog cat = make_catalog(n);

    rep.assumed["p"] = p;
    rep.assumed["tol_factor"] = tol_factor;
    rep.assumed["stability_factor"] = 2.0;
    rep.assumed["scaling_tol"] = 1e-8;

    bool ok = true;
    std::vector<double> f_norms;
    std::vector<std::vector<double>> c0;  // [level][eps]
    for (std::size_t l = 0; l < levels.size(); ++l) {
        const GridFunction& u = levels[l];
        if (u.grid().n != n)
            throw ContractViolation("weak_harnack_report: mixed dimensions in family");
        if (u.min_value() < -1e-10)
            throw ContractViolation("weak_harnack_report: supersolution has negative values");
        const ResidualAudit audit = residual_audit(spec, u, tol_factor);
        if (!audit.supersolution_ok && ok) {
            ok = false;
            std::ostringstream w;
            w << "level " << l << " failed the supersolution audit: min residual "
              << audit.min_residual << " < -" << audit.tolerance;
            rep.witness = w.str();
        }
        const double f_norm = field_lq_norm(spec.f, u.grid(), u.grid().box, p);
        f_norms.push_back(f_norm);
        std::vector<double> row;
        const double inf2 = inf_over(u, cat.J2);
        for (double eps : eps0_grid) {
            const double num = lp_norm(u, cat.J1, eps);
            const double den = inf2 + f_norm;
            if (den > 0.0) {
                row.push_back(num / den);
            } else if (num == 0.0) {
                row.push_back(0.0);
            } else {
                row.push_back(std::numeric_limits<double>::infinity());
                if (ok) {
                    ok = false;
                    rep.witness = "positive mass over J1 with zero infimum and zero source";
                }
            }
        }
        c0.push_back(std::move(row));
    }

    // Largest eps whose constant is refinement-stable within the factor.
    int sel = -1;
    double worst_sel = 1.0;
    for (int e = static_cast<int>(eps0_grid.size()) - 1; e >= 0; --e) {
        bool stable = true;
        double worst = 1.0;
        for (std::size_t l = 0; l + 1 < c0.size(); ++l) {
            const double a = c0[l][e], b = c0[l + 1][e];
            if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
                stable = false;
                break;
            }
            const double r = b / a;
            worst = std::max(worst, std::max(r, 1.0 / r));
            if (worst > 2.0) {
                stable = false;
                break;
            }
        }
        if (stable && std::isfinite(c0.back()[e])) {
            sel = e;
            worst_sel = worst;
            break;
        }
    }
    for (std::size_t e = 0; e < eps0_grid.size(); ++e)
        rep.fitted[format_eps(eps0_grid[e])] = c0.back()[e];
    if (sel < 0) {
        ok = false;
        if (rep.witness.empty()) rep.witness = "no refinement-stable eps0 in the scan grid";
    } else {
        rep.fitted["eps0"] = eps0_grid[sel];
        rep.fitted["C0"] = c0.back()[sel];
        rep.fitted["stability_worst_ratio"] = worst_sel;

        // First-order homogeneity audit: u -> tau u, f -> tau f leaves C0 fixed.
        const double tau = 3.7;
        const GridFunction& u = levels.back();
        GridFunction su = u;
        for (double& v : su.raw()) v *= tau;
        const double num = lp_norm(su, cat.J1, eps0_grid[sel]);
        const double den = inf_over(su, cat.J2) + tau * f_norms.back();
        const double scaled = den > 0.0 ? num / den : 0.0;
        const double dev =
            c0.back()[sel] > 0.0 ? std::fabs(scaled / c0.back()[sel] - 1.0) : 0.0;
        rep.fitted["scaling_dev"] = dev;
        if (dev > 1e-8) {
            ok = false;
            if (rep.witness.empty()) rep.witness = "homogeneity audit exceeded tolerance";
        }
    }

    rep.pass = ok;
    if (ok && rep.witness.empty()) rep.witness = "ok";
    return rep;
}

EstimateReport distribution_decay(const GridFunction& u, int points) {
    EstimateReport rep;
    rep.kind = "distribution_decay";
    rep.table_name = "decay";
    if (points < 4) throw ContractViolation("distribution_decay: need at least 4 levels");
    const CubeCatalog cat = make_catalog(u.grid().n);
    const double total = region_measure(u.grid(), cat.J1);
    const double sup = sup_over(u, cat.J1);
    const double inf = inf_over(u, cat.J1);
    rep.assumed["points"] = points;
    rep.fitted["sup_J1"] = sup;
    rep.fitted["inf_J1"] = inf;
    rep.fitted["measure_J1"] = total;

    if (!(sup > 0.0)) {
        rep.fitted["degenerate"] = 1.0;
        rep.fitted["beta0"] = 0.0;
        rep.pass = true;
        rep.witness = "no positive values over J1; decay fit degenerate";
        return rep;
    }
    double lo = std::max(inf, sup * 1e-4);
    if (!(lo > 0.0)) lo = sup * 1e-4;

    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < points; ++i) {
        const double s =
            lo * std::pow(sup / lo, static_cast<double>(i) / (points - 1));
        pts.push_back({s, superlevel_measure(u, cat.J1, s)});
    }
    rep.table = pts;

    std::vector<std::array<double, 2>> informative;
    for (const auto& row : pts)
        if (row[1] > 0.0 && row[1] < total * (1.0 - 1e-12)) informative.push_back(row);
    rep.fitted["informative_points"] = static_cast<double>(informative.size());

    if (informative.size() < 3) {
        rep.fitted["degenerate"] = 1.0;
        rep.fitted["beta0"] = 0.0;
        rep.pass = true;
        rep.witness = "fewer than 3 informative levels; decay fit degenerate (step-like field)";
        return rep;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : informative) {
        const double X = std::log(row[0]), Y = std::log(row[1]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double N = static_cast<double>(informative.size());
    const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / N;
    const double beta0 = -slope;
    const double a_ls = std::exp(intercept);

    double a_env = 0.0;
    for (const auto& row : pts)
        if (row[1] > 0.0) a_env = std::max(a_env, row[1] * std::pow(row[0], beta0));
    double resid = 0.0;
    for (const auto& row : informative)
        resid = std::max(resid,
                         std::fabs(std::log(row[1]) - (intercept + slope * std::log(row[0]))));

    rep.fitted["beta0"] = beta0;
    rep.fitted["A0_ls"] = a_ls;
    rep.fitted["A0_envelope"] = a_env;
    rep.fitted["fit_residual_log"] = resid;
    if (beta0 < 0.0) {
        rep.pass = false;
        rep.witness = "superlevel measure grows with the level (negative decay exponent)";
    } else {
        rep.pass = true;
        rep.witness = "ok";
    }
    return rep;
}

EstimateReport holder_report(const GridFunction& u, const EquationSpec& spec, int max_decades,
                             std::uint64_t seminorm_seed) {
    EstimateReport rep;
    rep.kind = "holder";
    rep.table_name = "oscillation";
    const SpaceTimeGrid& g = u.grid();
    const int n = g.n;
    const double p = require_p(spec, "holder_report");
    const double alpha0 = 2.0 - (n + 2.0) / p;
    if (!(alpha0 > 0.0))
        throw ConfigError("holder_report: needs p > (n+2)/2 for a positive exponent cap");
    rep.assumed["p"] = p;
    rep.assumed["alpha0"] = alpha0;

    std::vector<double> radii, osc;
    for (int j = 0; j <= max_decades; ++j) {
        const double r = std::pow(10.0, -j);
        const ParabolicCube cube = make_catalog(n).Q_r(r);
        // Usable: at least 3 nodes and >= 2 distinct spatial coordinates.
        if (nodes_in_region(g, cube) < 3) break;
        int distinct = 0;
        for (int i = 0; i < g.nx; ++i)
            if (g.x(i, 0) > cube.lo(0) && g.x(i, 0) < cube.hi(0)) ++distinct;
        if (distinct < 2) break;
        radii.push_back(r);
        osc.push_back(sup_over(u, cube) - inf_over(u, cube));
    }
    if (radii.size() < 3)
        throw ContractViolation(
            "holder_report: fewer than 3 usable oscillation radii at this resolution");
    for (std::size_t j = 0; j < radii.size(); ++j) rep.table.push_back({radii[j], osc[j]});

    bool all_zero = true;
    for (double w : osc) all_zero = all_zero && w == 0.0;
    double alpha;
    if (all_zero) {
        rep.fitted["degenerate_constant"] = 1.0;
        rep.fitted["gamma_hat"] = 0.0;
        alpha = alpha0;
        rep.pass = true;
        rep.witness = "zero oscillation at every radius; exponent capped at alpha0";
    } else {
        double gamma_hat = 0.0;
        for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
            if (osc[j] <= 0.0) continue;
            const double val = (osc[j + 1] - std::pow(radii[j], alpha0)) / osc[j];
            gamma_hat = std::max(gamma_hat, std::max(0.0, val));
        }
        rep.fitted["gamma_hat"] = gamma_hat;
        if (gamma_hat >= 1.0) {
            rep.pass = false;
            rep.witness = "no oscillation decay: recursion factor >= 1";
            alpha = 0.0;
        } else {
            const double fit = gamma_hat > 0.0 ? -std::log10(gamma_hat)
                                               : std::numeric_limits<double>::infinity();
            alpha = std::min(fit, alpha0);
            rep.pass = alpha > 0.0;
            rep.witness = rep.pass ? "ok" : "non-positive fitted exponent";
        }
    }
    rep.fitted["alpha"] = alpha;
    if (alpha > 0.0) {
        const double a_semi = std::min(alpha, 2.0);
        rep.fitted["seminorm_Qhalf"] =
            holder_seminorm(u, make_catalog(n).Q_r(0.5), a_semi, CounterRng(seminorm_seed));
    }
    return rep;
}

EstimateReport local_max_report(const GridFunction& u, const EquationSpec& spec, double eps0,
                                double tol_factor) {
    EstimateReport rep;
    rep.kind = "local_max";
    if (!(eps0 > 0.0)) throw ContractViolation("local_max_report: eps0 must be positive");
    const double p = require_p(spec, "local_max_report");
    const CubeCatalog cat = make_catalog(u.grid().n);
    const ResidualAudit audit = residual_audit(spec, u, tol_factor);
    rep.assumed["eps0"] = eps0;
    rep.assumed["p"] = p;
    rep.assumed["tol_factor"] = tol_factor;
    rep.assumed["residual_tolerance"] = audit.tolerance;

    bool ok = true;
    if (!audit.subsolution_ok) {
        ok = false;
        std::ostringstream w;
        w << "subsolution audit failed: max residual " << audit.max_residual << " > "
          << audit.tolerance;
        rep.witness = w.str();
    }
    const double sup3 = sup_over(u, cat.J3);
    const double mass = lp_norm_positive_part(u, cat.J1, eps0);
    const double f_norm = field_lq_norm(spec.f, u.grid(), u.grid().box, p);
    rep.fitted["sup_J3"] = sup3;
    rep.fitted["mass_J1"] = mass;
    rep.fitted["f_norm"] = f_norm;
    const double den = mass + f_norm;
    if (den > 0.0) {
        rep.fitted["C3"] = sup3 / den;
    } else if (sup3 <= 0.0) {
        rep.fitted["C3"] = 0.0;
    } else {
        ok = false;
        if (rep.witness.empty())
            rep.witness = "positive supremum with zero mass and zero source";
    }
    rep.pass = ok;
    if (ok && rep.witness.empty()) rep.witness = "ok";
    return rep;
}

EstimateReport harnack_report(const GridFunction& u, const EquationSpec& super_spec,
                              const EquationSpec& sub_spec, double tol_factor) {
    EstimateReport rep;
    rep.kind = "harnack";
    const double p = require_p(super_spec, "harnack_report");
    const CubeCatalog cat = make_catalog(u.grid().n);
    if (u.min_value() < -1e-10)
        throw ContractViolation("harnack_report: field has negative values");

    const ResidualAudit sup_audit = residual_audit(super_spec, u, tol_factor);
    const ResidualAudit sub_audit = residual_audit(sub_spec, u, tol_factor);
    rep.assumed["p"] = p;
    rep.assumed["tol_factor"] = tol_factor;

    bool ok = true;
    if (!sup_audit.supersolution_ok) {
        ok = false;
        std::ostringstream w;
        w << "supersolution audit failed: min residual " << sup_audit.min_residual << " < -"
          << sup_audit.tolerance;
        rep.witness = w.str();
    }
    if (!sub_audit.subsolution_ok && ok) {
        ok = false;
        std::ostringstream w;
        w << "subsolution audit failed: max residual " << sub_audit.max_residual << " > "
          << sub_audit.tolerance;
        rep.witness = w.str();
    }

    const double sup3 = sup_over(u, cat.J3);
    const double inf2 = inf_over(u, cat.J2);
    const double f_norm = field_lq_norm(super_spec.f, u.grid(), u.grid().box, p);
    rep.fitted["sup_J3"] = sup3;
    rep.fitted["inf_J2"] = inf2;
    rep.fitted["f_norm"] = f_norm;
    const double den = inf2 + f_norm;
    if (den > 0.0) {
        rep.fitted["C4"] = sup3 / den;
    } else if (sup3 <= 0.0) {
        rep.fitted["C4"] = 0.0;
    } else {
        ok = false;
        if (rep.witness.empty())
            rep.witness = "positive supremum with zero infimum and zero source";
    }
    rep.pass = ok;
    if (ok && rep.witness.empty()) rep.witness = "ok";
    return rep;
}

void BlowupParams::require_valid() const {
    if (!(A0 > 0.0) || !(beta0 > 0.0) || n < 1 || n > 2)
        throw ContractViolation("BlowupParams: need A0 > 0, beta0 > 0, n in {1,2}");
    if (!(alpha() > 1.0))
        throw ContractViolation("BlowupParams: alpha = 2 (2 A0)^{1/beta0} must exceed 1");
}

double BlowupParams::alpha() const { return 2.0 * std::pow(2.0 * A0, 1.0 / beta0); }

double BlowupParams::nu() const { return alpha() / (alpha() - 1.0); }

double BlowupParams::ell(int j) const {
    return 2.0 *
           std::pow(std::pow(2.0, beta0 + 1.0) * A0 * std::pow(nu(), -beta0 * j), 1.0 / (n + 2.0));
}

double BlowupParams::tail(int from) const {
    // ell_j = c rho^j with rho = nu^{-beta0/(n+2)} < 1.
    const double rho = std::pow(nu(), -beta0 / (n + 2.0));
    const double c = 2.0 * std::pow(std::pow(2.0, beta0 + 1.0) * A0, 1.0 / (n + 2.0));
    return c * std::pow(rho, from) / (1.0 - rho);
}

int BlowupParams::n0() const {
    require_valid();
    const double rho = std::pow(nu(), -beta0 / (n + 2.0));
    const double c = 2.0 * std::pow(std::pow(2.0, beta0 + 1.0) * A0, 1.0 / (n + 2.0));
    double guess = std::ceil(std::log(0.25 * (1.0 - rho) / c) / std::log(rho));
    int j = std::max(1, static_cast<int>(guess) - 2);
    while (tail(j) > 0.25) ++j;
    return j;
}

ChaseResult blowup_chase(const GridFunction& v, const BlowupParams& params,
                         const std::array<double, 3>& start_x, double start_t) {
    params.require_valid();
    const SpaceTimeGrid& g = v.grid();
    const int n = g.n;
    if (n != params.n) throw ContractViolation("blowup_chase: params dimension mismatch");
    const CubeCatalog cat = make_catalog(n);
    const double tol = 1e-12;
    for (int i = 0; i < n; ++i)
        if (std::fabs(start_x[i]) > cat.J3.half_width + tol)
            throw ContractViolation("blowup_chase: start point outside the closure of J3");
    if (start_t < cat.J3.t_bottom() - tol || start_t > cat.J3.t_top + tol)
        throw ContractViolation("blowup_chase: start time outside the closure of J3");

    ChaseResult out;
    const double nu = params.nu();
    const int n0 = params.n0();
    double threshold = std::pow(nu, n0 - 1);
    double value = v.value(start_x, start_t);
    if (value < threshold) {
        out.terminated_below_threshold = true;
        return out;
    }

    std::array<double, 3> x = start_x;
    double t = start_t;
    int level = n0;
    // Safe box [-3/4,3/4]^n x [1/8,1/2] (closed), recorded per step.
    auto in_safe = [&](const std::array<double, 3>& px, double pt) {
        for (int i = 0; i < n; ++i)
            if (std::fabs(px[i]) > 0.75 + tol) return false;
        return pt >= 0.125 - tol && pt <= 0.5 + tol;
    };

    for (int guard = 0; guard < 100000; ++guard) {
        out.trace.push_back({x, t, level, value, in_safe(x, t)});
        const double ell = params.ell(level);
        const double xlo[2] = {x[0] - ell, n == 2 ? x[1] - ell : 0.0};
        const double xhi[2] = {x[0] + ell, n == 2 ? x[1] + ell : 0.0};
        const double tlo = t - ell * ell / 10.0, thi = t;
        // Flag when the unclipped box leaves the hull.
        for (int a = 0; a < n; ++a)
            if (xlo[a] < g.box.lo(a) - tol || xhi[a] > g.box.hi(a) + tol)
                out.exited_domain = true;
        if (tlo < g.box.t_bottom() - tol) out.exited_domain = true;

        double best = -std::numeric_limits<double>::infinity();
        std::array<double, 3> bx{};
        double bt = 0.0;
        const int ny = n == 2 ? g.nx : 1;
        for (int k = 0; k <= g.nt; ++k) {
            const double tk = g.t(k);
            if (!(tk > tlo && tk <= thi)) continue;
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < g.nx; ++i) {
                    const auto px = g.point(i, j);
                    bool inside = px[0] > xlo[0] && px[0] < xhi[0];
                    if (n == 2) inside = inside && px[1] > xlo[1] && px[1] < xhi[1];
                    if (!inside) continue;
                    if (v.at(k, i, j) > best) {
                        best = v.at(k, i, j);
                        bx = px;
                        bt = tk;
                    }
                }
            }
        }
        threshold = std::pow(nu, level);
        if (!std::isfinite(best) || best < threshold) {
            out.terminated_below_threshold = true;
            return out;
        }
        x = bx;
        t = bt;
        value = best;
        ++level;
    }
    throw NumericalError("blowup_chase: recursion exceeded 1e5 levels");
}

}  // namespace pucci
