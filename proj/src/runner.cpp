#include "pucci/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pucci/barrier.hpp"
#include "pucci/cz.hpp"
#include "pucci/errors.hpp"
#include "pucci/estimators.hpp"
#include "pucci/expr.hpp"
#include "pucci/fields.hpp"
#include "pucci/fixed_point.hpp"
#include "pucci/geometry.hpp"
#include "pucci/norms.hpp"
#include "pucci/oracles.hpp"
#include "pucci/report.hpp"
#include "pucci/rng.hpp"
#include "pucci/scaling.hpp"

namespace pucci {
namespace {

using nlohmann::ordered_json;

BoundaryFn zero_data() {
    return [](const std::array<double, 3>&, double) { return 0.0; };
}

BoundaryFn constant_data(double c) {
    return [c](const std::array<double, 3>&, double) { return c; };
}

BoundaryFn expr_data(const std::string& text) {
    ExprFn fn = parse_expression(text);
    return [fn](const std::array<double, 3>& x, double t) { return fn(x[0], x[1], t); };
}

ScalarField field_sum(const ScalarField& a, const ScalarField& b) {
    ScalarField out;
    out.sample = [a, b](std::array<double, 3> x, double t) { return a(x, t) + b(x, t); };
    out.label = a.label + " + " + b.label;
    return out;
}

ScalarField field_negate(const ScalarField& a) {
    ScalarField out;
    out.sample = [a](std::array<double, 3> x, double t) { return -a(x, t); };
    out.label = "-(" + a.label + ")";
    return out;
}

/// Coefficient sup estimate on a coarse lattice (48 cells/axis); exact for
/// capped singular fields whose cap is attained at a lattice point.
double lattice_sup(const ScalarField& fld, const ParabolicCube& box, int n) {
    const int N = 48;
    double sup = 0.0;
    for (int k = 0; k <= N; ++k) {
        double t = box.t_bottom() + box.depth * k / N;
        if (k == 0) t = box.t_bottom() + box.depth * 1e-9;
        for (int i = 0; i <= N; ++i) {
            std::array<double, 3> x{box.center[0] - box.half_width + 2.0 * box.half_width * i / N,
                                    0.0, 0.0};
            if (n == 1) {
                sup = std::max(sup, std::fabs(fld(x, t)));
                continue;
            }
            for (int j = 0; j <= N; ++j) {
                x[1] = box.center[1] - box.half_width + 2.0 * box.half_width * j / N;
                sup = std::max(sup, std::fabs(fld(x, t)));
            }
        }
    }
    return sup;
}

GridFunction sample_onto(const ScalarField& fld, const SpaceTimeGrid& grid) {
    GridFunction u(grid);
    for (int k = 0; k <= grid.nt; ++k)
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < (grid.n == 2 ? grid.nx : 1); ++j)
                u.set(k, i, j, fld(grid.point(i, j), grid.t(k)));
    return u;
}

EstimateReport basic_report(std::string kind, bool pass, std::string witness) {
    EstimateReport rep;
    rep.kind = std::move(kind);
    rep.pass = pass;
    rep.witness = std::move(witness);
    return rep;
}

RunResult finish(const Scenario& sc, const std::string& kind, std::uint64_t seed, bool pass,
                 const std::vector<EstimateReport>& reports, const std::string& headline) {
    RunResult out;
    out.kind = kind;
    out.pass = pass;
    ordered_json doc;
    doc["schema"] = "pucci-lab-report-1";
    doc["kind"] = kind;
    doc["seed"] = seed;
    doc["config_digest"] = "fnv1a:" + hex64(fnv1a64(sc.source_text));
    doc["pass"] = pass;
    doc["headline"] = headline;
    ordered_json arr = ordered_json::array();
    for (const auto& rep : reports) arr.push_back(report_to_json(rep));
    doc["reports"] = arr;
    out.document = std::move(doc);
    out.summary = (pass ? "pass  " : "FAIL  ") + kind + ": " + headline;
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// scenario plumbing

struct GridConfig {
    int n = 1;
    int nx = 161;
    int store_levels = 512;
    ParabolicCube box;
};

GridConfig grid_config(const Scenario& sc) {
    GridConfig g;
    g.n = static_cast<int>(sc.number_or("grid", "n", 1));
    if (g.n != 1 && g.n != 2) throw ConfigError("[grid] n must be 1 or 2");
    g.nx = static_cast<int>(sc.number_or("grid", "nx", g.n == 1 ? 161 : 49));
    g.store_levels = static_cast<int>(sc.number_or("grid", "store_levels", g.n == 1 ? 512 : 256));
    g.box = box_from_scenario(sc, g.n);
    return g;
}

}  // namespace

ParabolicCube box_from_scenario(const Scenario& sc, int n) {
    const std::string name = sc.str_or("grid", "box", "ambient");
    if (name == "ambient") return make_catalog(n).Q;
    if (name == "unit") return ParabolicCube{n, {0.0, 0.0, 0.0}, 1.0, 1.0, 1.0};
    if (name == "custom") {
        ParabolicCube box;
        box.n = n;
        auto c = sc.numbers_or("grid", "center", {0.0, 0.0});
        box.center = {c.size() > 0 ? c[0] : 0.0, c.size() > 1 ? c[1] : 0.0, 0.0};
        box.half_width = sc.number("grid", "half_width");
        box.t_top = sc.number("grid", "t_top");
        box.depth = sc.number("grid", "depth");
        box.require_valid();
        return box;
    }
    throw ConfigError("[grid] box must be \"ambient\", \"unit\" or \"custom\", got \"" + name +
                      "\"");
}

EquationSpec equation_from_scenario(const Scenario& sc, int n, const ParabolicCube& box, int nx,
                                    std::uint64_t seed) {
    EquationSpec eq;
    const std::string branch = sc.str_or("equation", "branch", "minus");
    if (branch == "plus")
        eq.branch = Branch::plus;
    else if (branch == "minus")
        eq.branch = Branch::minus;
    else
        throw ConfigError("[equation] branch must be \"plus\" or \"minus\", got \"" + branch +
                          "\"");
    const double lam = sc.number_or("equation", "lambda", 1.0);
    const double Lam = sc.number_or("equation", "Lambda", lam);
    eq.pair = PucciPair{lam, Lam};
    eq.m = sc.number_or("equation", "m", 1.0);
    eq.p = sc.number_or("equation", "p", 0.0);
    eq.q = sc.number_or("equation", "q", 0.0);

    if (sc.has("equation", "mu")) eq.mu = make_expr_field(sc.str("equation", "mu"));
    if (sc.has("equation", "mu_singularity_exponent")) {
        const double a = sc.number("equation", "mu_singularity_exponent");
        const double strength = sc.number_or("equation", "mu_singularity_strength", 1.0);
        if (eq.q > 0.0 && a * eq.q >= n)
            throw ConfigError("[equation] power singularity with exponent * q >= n is not "
                              "q-integrable");
        const double h = 2.0 * box.half_width / (nx - 1);
        auto c = sc.numbers_or("equation", "mu_singularity_center", {0.0, 0.0});
        eq.mu = make_power_singularity(
            n, {c.size() > 0 ? c[0] : 0.0, c.size() > 1 ? c[1] : 0.0, 0.0}, a, strength, h);
    }

    if (sc.has("equation", "f")) eq.f = make_expr_field(sc.str("equation", "f"));
    if (sc.has("equation", "f_bumps")) {
        const int bumps = static_cast<int>(sc.number("equation", "f_bumps"));
        const double amp = sc.number_or("equation", "f_amplitude", 1.0);
        const double wmin = sc.number_or("equation", "f_bump_wmin", box.half_width * 0.15);
        const double wmax = sc.number_or("equation", "f_bump_wmax", box.half_width * 0.5);
        eq.f = make_bump_sum_field(n, box, bumps, amp, wmin, wmax,
                                   CounterRng(seed).stream(0xF1E1D));
    }

    const bool validate_default = eq.p > 0.0 && eq.q > 0.0;
    if (sc.flag_or("equation", "validate", validate_default)) eq.validate(n);
    return eq;
}

GridFunction march_on_box(const EquationSpec& spec, const ParabolicCube& box, int nx,
                          int store_levels, const BoundaryFn& data, double gmax_hint,
                          SolveStats* stats) {
    SpaceTimeGrid g{box.n, box, nx, 1};
    const double mu_sup = lattice_sup(spec.mu, box, box.n);
    double gfac = mu_sup;
    if (spec.m != 1.0)
        gfac = mu_sup * spec.m * std::pow(std::max(gmax_hint, 1e-30), spec.m - 1.0);
    gfac *= 1.05;
    g.nt = plan_march_steps(spec, g, gfac, store_levels);
    SolveOptions opts;
    opts.store_every = store_levels > 0 ? g.nt / store_levels : 1;
    opts.gmax_hint = gmax_hint;
    return solve_parabolic(spec, g, data, opts, stats);
}

GridFunction make_supersolution(const EquationSpec& spec, const ParabolicCube& box, int nx,
                                int store_levels, const BoundaryFn& data) {
    if (spec.branch != Branch::plus)
        throw ContractViolation("make_supersolution: plus-branch spec required");
    EquationSpec flip = spec;
    flip.f = field_negate(spec.f);
    return march_on_box(flip, box, nx, store_levels, data);
}

GridFunction make_subsolution(const EquationSpec& spec, const ParabolicCube& box, int nx,
                              int store_levels, const BoundaryFn& data) {
    if (spec.branch != Branch::minus)
        throw ContractViolation("make_subsolution: minus-branch spec required");
    EquationSpec flip = spec;
    flip.f = field_negate(spec.f);
    return march_on_box(flip, box, nx, store_levels, data);
}

namespace {

// ---------------------------------------------------------------------------
// kind: pucci_oracle

RunResult run_pucci_oracle(const Scenario& sc, std::uint64_t seed) {
    const int count = static_cast<int>(sc.number_or("params", "count", 200));
    const int rotations = static_cast<int>(sc.number_or("params", "rotations", 3000));
    const double ref_tol = sc.number_or("params", "ref_tol", 1e-10);
    const double dual_tol = sc.number_or("params", "dual_tol", 1e-12);
    const double enum_tol = sc.number_or("params", "enum_tol", 0.05);
    auto dims_d = sc.numbers_or("params", "dims", {1, 2, 3});
    auto pair_list = sc.numbers_or("params", "pairs", {1, 1, 1, 2, 1, 5});
    if (pair_list.size() % 2 != 0)
        throw ConfigError("[params] pairs must list lambda,Lambda couples");

    CounterRng root(seed);
    auto entries = root.stream(0x58);
    auto frames = root.stream(0x46);

    double worst_ref = 0.0, worst_dual = 0.0, worst_enum = 0.0, worst_onesided = 0.0;
    long checks = 0;
    for (double nd : dims_d) {
        const int n = static_cast<int>(nd);
        if (n < 1 || n > 3) throw ConfigError("[params] dims entries must be 1, 2 or 3");
        for (int c = 0; c < count; ++c) {
            SymMatrix X(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) X.set(i, j, entries.uniform(-3.0, 3.0));
            const double scale = 1.0 + X.max_abs();
            for (std::size_t pi = 0; pi + 1 < pair_list.size(); pi += 2) {
                PucciPair pair{pair_list[pi], pair_list[pi + 1]};
                for (Branch br : {Branch::plus, Branch::minus}) {
                    const double v = pucci_eval(pair, X, br);
                    const double r = pucci_reference(pair, X, br);
                    worst_ref = std::max(worst_ref, std::fabs(v - r) / scale);

                    const double dual = pucci_eval(pair, -X, br == Branch::plus ? Branch::minus
                                                                                : Branch::plus);
                    worst_dual = std::max(worst_dual, std::fabs(v + dual) / scale);

                    const double b = pucci_bruteforce(pair, X, br, rotations, frames);
                    // One-sided: every frame is admissible, so the enumeration
                    // bounds the true value (below for plus, above for minus).
                    const double side = br == Branch::plus ? b - v : v - b;
                    worst_onesided = std::max(worst_onesided, side / scale);
                    const double gap = std::fabs(v - b);
                    const double spread = std::max(pair.Lambda - pair.lambda, 1e-9);
                    worst_enum = std::max(worst_enum, gap / (scale * spread));
                    ++checks;
                }
            }
        }
    }

    EstimateReport rep = basic_report("pucci_oracle", true, "");
    rep.fitted["checks"] = static_cast<double>(checks);
    rep.fitted["worst_reference_dev"] = worst_ref;
    rep.fitted["worst_duality_dev"] = worst_dual;
    rep.fitted["worst_enumeration_gap"] = worst_enum;
    rep.fitted["worst_onesided_excess"] = worst_onesided;
    rep.assumed["ref_tol"] = ref_tol;
    rep.assumed["dual_tol"] = dual_tol;
    rep.assumed["enum_tol"] = enum_tol;
    rep.assumed["rotations"] = rotations;
    bool pass = true;
    if (worst_ref > ref_tol) pass = false, rep.witness = "spectral reference deviation";
    if (worst_dual > dual_tol) pass = false, rep.witness = "duality deviation";
    if (worst_onesided > 1e-9) pass = false, rep.witness = "enumeration crossed the true value";
    if (worst_enum > enum_tol) pass = false, rep.witness = "enumeration gap too wide";
    rep.pass = pass;
    return finish(sc, "pucci_oracle", seed, pass, {rep},
                  fmt(static_cast<double>(checks)) + " checks, ref dev " + fmt(worst_ref) +
                      ", enum gap " + fmt(worst_enum));
}

// ---------------------------------------------------------------------------
// kind: cz_random

RunResult run_cz_random(const Scenario& sc, std::uint64_t seed) {
    const int instances = static_cast<int>(sc.number_or("params", "instances", 50));
    const int n = static_cast<int>(sc.number_or("grid", "n", 1));
    const int resolution = static_cast<int>(sc.number_or("params", "resolution", 5));
    const double fill = sc.number_or("params", "fill", 0.45);
    CzParams params;
    params.m = static_cast<int>(sc.number_or("params", "cz_m", 1));
    params.sigma = Rational::parse(sc.str_or("params", "sigma", "1/2"));
    params.max_level = static_cast<int>(sc.number_or("params", "max_level", 8));

    CounterRng rng = CounterRng(seed).stream(0xC2);
    bool pass = true;
    std::string witness;
    double worst_ratio = 0.0;
    long dense_checked = 0;
    int conclusion_failures = 0;
    for (int i = 0; i < instances; ++i) {
        CzInstance inst = make_random_instance(n, resolution, params, fill, rng);
        CzVerdict v = cz_verdict(inst.A, inst.B, params);
        dense_checked += v.dense_cubes_checked;
        if (!v.hypotheses()) {
            pass = false;
            witness = "instance " + std::to_string(i) + ": hypothesis failed (" + v.witness + ")";
            break;
        }
        if (!v.conclusion) {
            pass = false;
            ++conclusion_failures;
            witness = "instance " + std::to_string(i) + ": measure conclusion failed (" +
                      v.measure_a + " vs " + v.measure_b + ")";
            break;
        }
        if (v.count_b > 0) {
            const double ratio = static_cast<double>(v.count_a) * params.m *
                                 static_cast<double>(params.sigma.den) /
                                 (static_cast<double>(v.count_b) * (params.m + 1) *
                                  static_cast<double>(params.sigma.num));
            worst_ratio = std::max(worst_ratio, ratio);
        }
    }

    EstimateReport rep = basic_report("cz_random", pass, witness);
    rep.fitted["instances"] = instances;
    rep.fitted["worst_measure_ratio"] = worst_ratio;
    rep.fitted["dense_cubes_checked"] = static_cast<double>(dense_checked);
    rep.assumed["m"] = params.m;
    rep.assumed["sigma"] = static_cast<double>(params.sigma.num) / params.sigma.den;
    rep.assumed["fill"] = fill;
    rep.assumed["resolution"] = resolution;
    return finish(sc, "cz_random", seed, pass, {rep},
                  std::to_string(instances) + " instances, worst measure ratio " +
                      fmt(worst_ratio));
}

// ---------------------------------------------------------------------------
// kind: convergence

RunResult run_convergence(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    auto nx_list_d = sc.numbers_or("grid", "nx_list", {81, 161, 321});
    const double order_min = sc.number_or("params", "order_min", 1.8);
    const std::string which = sc.str_or("params", "solution", "decaying_sine");
    EquationSpec eq = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);

    ExactSolution sol;
    if (which == "decaying_sine") {
        sol = make_decaying_sine(gc.n, eq.pair, eq.branch,
                                 sc.number_or("params", "amplitude", 1.0),
                                 sc.flag_or("params", "convex", false));
    } else if (which == "heat_kernel") {
        if (eq.pair.lambda != eq.pair.Lambda)
            throw ConfigError("[params] heat_kernel convergence needs lambda == Lambda");
        sol = make_heat_kernel(gc.n, eq.pair.lambda, sc.number_or("params", "t_shift", 1.0));
    } else {
        throw ConfigError("[params] solution must be \"decaying_sine\" or \"heat_kernel\"");
    }

    if (lattice_sup(eq.mu, gc.box, gc.n) > 0.0)
        throw ConfigError("[equation] convergence fixtures solve the problem without a gradient "
                          "term; leave mu unset");

    EstimateReport rep = basic_report("convergence", true, "");
    rep.table_name = "h_vs_error";

    // Keep dt / h^2 constant across a doubling chain: plan the coarsest level,
    // then scale the step count by 4 per refinement. A drifting ratio mixes
    // the Euler and stencil error constants and pollutes the observed order.
    bool chain = nx_list_d.size() > 1;
    for (std::size_t i = 0; i + 1 < nx_list_d.size(); ++i)
        chain = chain && static_cast<int>(nx_list_d[i + 1]) - 1 ==
                             2 * (static_cast<int>(nx_list_d[i]) - 1);
    int base_steps = 0;
    if (chain) {
        SpaceTimeGrid g0{gc.n, gc.box, static_cast<int>(nx_list_d.front()), 1};
        base_steps = plan_march_steps(eq, g0, 0.0, gc.store_levels);
    }

    std::vector<double> errs, hs;
    for (std::size_t li = 0; li < nx_list_d.size(); ++li) {
        const int nx = static_cast<int>(nx_list_d[li]);
        SpaceTimeGrid mg{gc.n, gc.box, nx, 1};
        mg.nt = chain ? base_steps << (2 * li) : plan_march_steps(eq, mg, 0.0, gc.store_levels);
        SolveOptions opts;
        opts.store_every = gc.store_levels > 0 ? mg.nt / gc.store_levels : 1;
        GridFunction u = solve_parabolic(eq, mg, sol.boundary(), opts);
        const SpaceTimeGrid& g = u.grid();
        double err = 0.0;
        for (int k = 0; k <= g.nt; ++k)
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < (g.n == 2 ? g.nx : 1); ++j)
                    err = std::max(err,
                                   std::fabs(u.at(k, i, j) - sol.value(g.point(i, j), g.t(k))));
        errs.push_back(err);
        hs.push_back(g.h());
        rep.table.push_back({g.h(), err});
    }

    bool pass = true;
    double min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        if (errs[i + 1] <= 0.0 || errs[i] <= 0.0) continue;  // exact: treat as passing
        const double order = std::log(errs[i] / errs[i + 1]) / std::log(hs[i] / hs[i + 1]);
        min_order = std::min(min_order, order);
        rep.fitted["order_" + std::to_string(i)] = order;
    }
    if (std::isfinite(min_order) && min_order < order_min) {
        pass = false;
        rep.witness = "observed order " + fmt(min_order) + " below " + fmt(order_min);
    }
    rep.fitted["finest_error"] = errs.back();
    rep.assumed["order_min"] = order_min;
    rep.pass = pass;
    return finish(sc, "convergence", seed, pass, {rep},
                  sol.label + ", finest error " + fmt(errs.back()) +
                      (std::isfinite(min_order) ? ", order " + fmt(min_order) : ""));
}

// ---------------------------------------------------------------------------
// kind: comparison

RunResult run_comparison(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    const int pairs = static_cast<int>(sc.number_or("params", "pairs", 10));
    const int bumps = static_cast<int>(sc.number_or("params", "bumps", 3));
    const double amplitude = sc.number_or("params", "amplitude", 1.0);
    const double tol = sc.number_or("params", "tol", 1e-12);
    EquationSpec base = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);
    const double s_b = branch_sign(base.branch);

    CounterRng root(seed);
    double worst = 0.0;
    bool pass = true;
    std::string witness;
    for (int pidx = 0; pidx < pairs && pass; ++pidx) {
        ScalarField f1 = make_bump_sum_field(gc.n, gc.box, bumps, amplitude,
                                             gc.box.half_width * 0.15, gc.box.half_width * 0.5,
                                             root.stream(2 * pidx));
        ScalarField extra = make_bump_sum_field(gc.n, gc.box, bumps, amplitude,
                                                gc.box.half_width * 0.15, gc.box.half_width * 0.5,
                                                root.stream(2 * pidx + 1));
        EquationSpec s1 = base, s2 = base;
        s1.f = f1;
        s2.f = field_sum(f1, extra);
        GridFunction u1 = march_on_box(s1, gc.box, gc.nx, gc.store_levels, zero_data());
        GridFunction u2 = march_on_box(s2, gc.box, gc.nx, gc.store_levels, zero_data());
        // Bigger source pushes the solution down on the plus branch (s = +1)
        // and up on the minus branch.
        const auto& a = u1.raw();
        const auto& b = u2.raw();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double viol = s_b > 0 ? b[i] - a[i] : a[i] - b[i];
            worst = std::max(worst, viol);
        }
        if (worst > tol) {
            pass = false;
            witness = "pair " + std::to_string(pidx) + ": ordering violated by " + fmt(worst);
        }
    }

    EstimateReport rep = basic_report("comparison", pass, witness);
    rep.fitted["pairs"] = pairs;
    rep.fitted["worst_violation"] = worst;
    rep.assumed["tol"] = tol;
    return finish(sc, "comparison", seed, pass, {rep},
                  std::to_string(pairs) + " ordered pairs, worst violation " + fmt(worst));
}

// ---------------------------------------------------------------------------
// kind: abp

RunResult run_abp(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    const int instances = static_cast<int>(sc.number_or("params", "instances", 5));
    const int bumps = static_cast<int>(sc.number_or("params", "bumps", 3));
    const double amplitude = sc.number_or("params", "amplitude", 1.0);
    const double tol_factor = sc.number_or("params", "tol_factor", 10.0);
    const bool do_refine = sc.flag_or("params", "refine", false);
    const bool do_rescale = sc.flag_or("params", "rescale", false);
    const bool superlinear = sc.flag_or("params", "superlinear", false);
    EquationSpec base = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);
    if (base.branch != Branch::minus)
        throw ConfigError("[equation] abp scenarios use the minus branch");

    // Full storage keeps the audit at march resolution (n = 1 scale).
    const int store = gc.n == 1 ? 0 : gc.store_levels;
    const double ghint = sc.number_or("params", "gmax_hint", 0.0);

    CounterRng root(seed);
    std::vector<EstimateReport> reps;
    bool pass = true;
    double worst_c1 = 0.0;
    GridFunction first_u{SpaceTimeGrid{1, ParabolicCube{1, {0, 0, 0}, 1, 1, 1}, 3, 1}};
    EquationSpec first_spec = base;
    for (int i = 0; i < instances; ++i) {
        EquationSpec spec = base;
        spec.f = make_bump_sum_field(gc.n, gc.box, bumps, amplitude, gc.box.half_width * 0.15,
                                     gc.box.half_width * 0.5, root.stream(0xAB0 + i));
        GridFunction u = march_on_box(spec, gc.box, gc.nx, store, zero_data(), ghint);
        EstimateReport rep = superlinear ? abp_superlinear_check(u, spec, tol_factor)
                                         : abp_check(u, spec, tol_factor);
        rep.kind += "/instance_" + std::to_string(i);
        pass = pass && rep.pass;
        if (rep.fitted.count("C1")) worst_c1 = std::max(worst_c1, rep.fitted["C1"]);
        if (rep.fitted.count("C_envelope"))
            worst_c1 = std::max(worst_c1, rep.fitted["C_envelope"]);
        if (i == 0) {
            first_u = u;
            first_spec = spec;
        }
        reps.push_back(std::move(rep));
    }

    // Zero-source control: the marched field is identically zero, so the
    // excess over the boundary must vanish exactly.
    {
        EquationSpec spec = base;
        spec.f = make_zero_field();
        GridFunction u = march_on_box(spec, gc.box, gc.nx, store, zero_data(), ghint);
        EstimateReport rep = basic_report("abp/zero_source_control", true, "");
        const double sup = u.max_value();
        rep.fitted["sup_u"] = sup;
        if (sup != 0.0) {
            rep.pass = false;
            rep.witness = "zero data produced nonzero field";
            pass = false;
        }
        reps.push_back(std::move(rep));
    }

    if (do_refine && instances > 0 && !superlinear) {
        const int nx2 = 2 * (gc.nx - 1) + 1;
        GridFunction u2 = march_on_box(first_spec, gc.box, nx2, store == 0 ? 0 : 2 * store,
                                       zero_data(), ghint);
        EstimateReport fine = abp_check(u2, first_spec, tol_factor);
        const double c = reps.front().fitted.at("C1");
        const double cf = fine.fitted.at("C1");
        EstimateReport rep = basic_report("abp/refinement", true, "");
        rep.fitted["C1_coarse"] = c;
        rep.fitted["C1_fine"] = cf;
        const double ratio = cf > 0 ? (c > 0 ? std::max(c / cf, cf / c) : 0.0) : 0.0;
        rep.fitted["ratio"] = ratio;
        rep.assumed["max_ratio"] = 2.0;
        if (!fine.pass || ratio > 2.0) {
            rep.pass = false;
            rep.witness = "refined constant drifted by factor " + fmt(ratio);
            pass = false;
        }
        reps.push_back(std::move(rep));
    }

    if (do_rescale && instances > 0 && !superlinear) {
        // Pull the first instance back through a parabolic scaling; the fitted
        // quotient is invariant, so the two constants must agree to roundoff.
        ScalingMap map;
        map.n = gc.n;
        map.r = sc.number_or("params", "rescale_r", 0.5);
        map.amplitude = sc.number_or("params", "rescale_amplitude", 2.0);
        map.x0 = {0.0, 0.0, 0.0};
        map.t0 = gc.box.t_bottom();
        map.t_ref = 0.0;
        SpaceTimeGrid pg = pullback_grid(map, first_u.grid());
        GridFunction v = apply_scaling(map, first_u, pg);
        EquationSpec scaled = transform_spec(map, first_spec);
        EstimateReport srep = abp_check(v, scaled, tol_factor);
        const double c = reps.front().fitted.at("C1");
        const double cs = srep.fitted.at("C1");
        EstimateReport rep = basic_report("abp/rescale_audit", true, "");
        rep.fitted["C1"] = c;
        rep.fitted["C1_scaled"] = cs;
        const double dev = std::fabs(cs - c) / std::max(c, 1e-300);
        rep.fitted["relative_dev"] = dev;
        rep.assumed["tol"] = 1e-8;
        if (!srep.pass || dev > 1e-8) {
            rep.pass = false;
            rep.witness = "scaling changed the fitted constant by " + fmt(dev);
            pass = false;
        }
        reps.push_back(std::move(rep));
    }

    return finish(sc, "abp", seed, pass, reps,
                  std::to_string(instances) + " instances, worst constant " + fmt(worst_c1));
}

// ---------------------------------------------------------------------------
// kind: weak_harnack

RunResult run_weak_harnack(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    auto nx_list_d = sc.numbers_or("grid", "nx_list", {161, 321});
    const int bumps = static_cast<int>(sc.number_or("params", "bumps", 3));
    const double amplitude = sc.number_or("params", "amplitude", 0.5);
    const double boundary_value = sc.number_or("params", "boundary_value", 1.0);
    const double tol_factor = sc.number_or("params", "tol_factor", 10.0);
    auto eps_grid = sc.numbers_or("params", "eps_grid", {0.25, 0.5, 0.75, 1.0});
    const bool check_decay = sc.flag_or("params", "check_decay", false);
    const double min_beta0 = sc.number_or("params", "min_beta0", 0.5);

    EquationSpec spec = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);
    if (spec.branch != Branch::plus)
        throw ConfigError("[equation] weak_harnack scenarios use the plus branch");
    if (!sc.has("equation", "f") && !sc.has("equation", "f_bumps"))
        spec.f = make_bump_sum_field(gc.n, gc.box, bumps, amplitude, gc.box.half_width * 0.15,
                                     gc.box.half_width * 0.5, CounterRng(seed).stream(0x17));

    BoundaryFn data = constant_data(boundary_value);
    if (sc.has("params", "boundary")) data = expr_data(sc.str("params", "boundary"));

    std::vector<GridFunction> levels;
    for (double nxd : nx_list_d) {
        const int nx = static_cast<int>(nxd);
        const int store = gc.n == 1 ? 0 : gc.store_levels;
        levels.push_back(make_supersolution(spec, gc.box, nx, store, data));
    }

    EstimateReport rep = weak_harnack_report(levels, spec, eps_grid, tol_factor);
    bool pass = rep.pass;
    std::vector<EstimateReport> reps{rep};

    if (check_decay) {
        EstimateReport dec = distribution_decay(levels.back());
        if (!dec.fitted.count("degenerate") && dec.pass) {
            if (dec.fitted.at("beta0") < min_beta0) {
                dec.pass = false;
                dec.witness = "decay exponent below " + fmt(min_beta0);
            }
        }
        pass = pass && dec.pass;
        reps.push_back(std::move(dec));
    }

    const double c0 = rep.fitted.count("C0") ? rep.fitted.at("C0") : 0.0;
    return finish(sc, "weak_harnack", seed, pass, reps, "C0 " + fmt(c0) + " over " +
                                                            std::to_string(levels.size()) +
                                                            " refinement levels");
}

// ---------------------------------------------------------------------------
// kind: barrier

RunResult run_barrier(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    auto targets = sc.numbers_or("params", "mu_targets", {0.0, 0.1, 0.5});
    const double phi_tol = sc.number_or("params", "phi_tol", 1e-6);
    const double q = sc.number_or("equation", "q", 6.0);
    const double lam = sc.number_or("equation", "lambda", 1.0);
    const double Lam = sc.number_or("equation", "Lambda", lam);
    PucciPair pair{lam, Lam};
    CubeCatalog cat = make_catalog(gc.n);

    std::vector<EstimateReport> reps;
    bool pass = true;
    for (double target : targets) {
        ScalarField mu = make_zero_field();
        if (target > 0.0) {
            if (!(q > 0.0)) throw ConfigError("[equation] q > 0 required for mu_targets > 0");
            const double c = target / std::pow(cat.Q.measure(), 1.0 / q);
            mu = make_constant_field(c);
            mu.label = "constant tuned to ||mu||_q = " + fmt(target);
        }

        SpaceTimeGrid g{gc.n, cat.Q, gc.nx, 1};
        EquationSpec aux;
        aux.branch = Branch::plus;
        aux.pair = pair;
        aux.mu = mu;
        const double mu_sup = lattice_sup(mu, cat.Q, gc.n);
        g.nt = plan_march_steps(aux, g, mu_sup * 1.05, gc.store_levels);
        BarrierOptions opts;
        opts.store_every = gc.store_levels > 0 ? g.nt / gc.store_levels : 1;

        EstimateReport rep = basic_report("barrier/mu_" + fmt(target), true, "");
        rep.assumed["mu_norm_target"] = target;
        rep.assumed["phi_tol"] = phi_tol;
        try {
            BarrierResult bar = build_barrier(pair, mu, g, opts);
            rep.fitted["sigma"] = bar.sigma;
            rep.fitted["M_hat"] = bar.M_hat;

            const SpaceTimeGrid& og = bar.phi.grid();
            double min_phi_k2 = std::numeric_limits<double>::infinity();
            double worst_boundary = 0.0;
            double worst_outside = 0.0;
            for (int k = 0; k <= og.nt; ++k) {
                const double t = og.t(k);
                for (int i = 0; i < og.nx; ++i) {
                    for (int j = 0; j < (og.n == 2 ? og.nx : 1); ++j) {
                        const auto x = og.point(i, j);
                        const double phi = bar.phi.at(k, i, j);
                        if (cat.K2.contains(x, t)) min_phi_k2 = std::min(min_phi_k2, phi);
                        if (k == 0 || og.boundary_node(i, j))
                            worst_boundary = std::max(worst_boundary, std::fabs(phi));
                        if (!cat.K1.contains(x, t))
                            worst_outside = std::max(worst_outside,
                                                     std::fabs(bar.g.at(k, i, j)));
                    }
                }
            }
            rep.fitted["min_phi_on_K2"] = min_phi_k2;
            rep.fitted["max_phi_on_boundary"] = worst_boundary;
            rep.fitted["max_g_outside_K1"] = worst_outside;
            if (min_phi_k2 < 2.0 - phi_tol) {
                rep.pass = false;
                rep.witness = "phi below 2 on K2";
            }
            if (worst_boundary != 0.0) {
                rep.pass = false;
                rep.witness = "phi not exactly zero on the parabolic boundary";
            }
            if (worst_outside != 0.0) {
                rep.pass = false;
                rep.witness = "g leaks outside K1";
            }
        } catch (const NumericalError& e) {
            rep.pass = false;
            rep.witness = e.what();
        }
        pass = pass && rep.pass;
        reps.push_back(std::move(rep));
    }

    return finish(sc, "barrier", seed, pass, reps,
                  std::to_string(targets.size()) + " coefficient levels");
}

// ---------------------------------------------------------------------------
// kind: holder

RunResult run_holder(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    const int max_decades = static_cast<int>(sc.number_or("params", "max_decades", 3));
    const std::uint64_t sem_seed =
        static_cast<std::uint64_t>(sc.number_or("params", "seminorm_seed", 77));
    EquationSpec spec = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);

    BoundaryFn data = zero_data();
    if (sc.has("params", "data")) data = expr_data(sc.str("params", "data"));

    const int store = gc.n == 1 ? 0 : gc.store_levels;
    GridFunction u = march_on_box(spec, gc.box, gc.nx, store, data);
    EstimateReport rep = holder_report(u, spec, max_decades, sem_seed);
    const double alpha = rep.fitted.count("alpha") ? rep.fitted.at("alpha") : 0.0;
    return finish(sc, "holder", seed, rep.pass, {rep}, "alpha " + fmt(alpha));
}

// ---------------------------------------------------------------------------
// kind: local_max

RunResult run_local_max(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    const int fields = static_cast<int>(sc.number_or("params", "fields", 3));
    const double eps0 = sc.number_or("params", "eps0", 0.5);
    const int bumps = static_cast<int>(sc.number_or("params", "bumps", 2));
    const double amplitude = sc.number_or("params", "amplitude", 0.5);
    const double tol_factor = sc.number_or("params", "tol_factor", 10.0);
    EquationSpec base = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);
    if (base.branch != Branch::minus)
        throw ConfigError("[equation] local_max scenarios use the minus branch");

    BoundaryFn data = constant_data(sc.number_or("params", "boundary_value", 1.0));
    if (sc.has("params", "boundary")) data = expr_data(sc.str("params", "boundary"));

    CounterRng root(seed);
    std::vector<EstimateReport> reps;
    bool pass = true;
    double worst_c3 = 0.0;
    const int store = gc.n == 1 ? 0 : gc.store_levels;
    for (int i = 0; i < fields; ++i) {
        EquationSpec spec = base;
        if (!sc.has("equation", "f") && !sc.has("equation", "f_bumps"))
            spec.f = make_bump_sum_field(gc.n, gc.box, bumps, amplitude,
                                         gc.box.half_width * 0.15, gc.box.half_width * 0.5,
                                         root.stream(0x10C + i));
        GridFunction u = make_subsolution(spec, gc.box, gc.nx, store, data);
        EstimateReport rep = local_max_report(u, spec, eps0, tol_factor);
        rep.kind += "/field_" + std::to_string(i);
        pass = pass && rep.pass;
        if (rep.fitted.count("C3")) worst_c3 = std::max(worst_c3, rep.fitted.at("C3"));
        reps.push_back(std::move(rep));
    }
    return finish(sc, "local_max", seed, pass, reps, "worst C3 " + fmt(worst_c3));
}

// ---------------------------------------------------------------------------
// kind: harnack

RunResult run_harnack(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    const int fields = static_cast<int>(sc.number_or("params", "fields", 3));
    const double eps0 = sc.number_or("params", "eps0", 0.5);
    const double base_value = sc.number_or("params", "base", 0.5);
    const double bump_amp = sc.number_or("params", "bump_amplitude", 0.5);
    const int bumps = static_cast<int>(sc.number_or("params", "bumps", 2));
    const double tol_factor = sc.number_or("params", "tol_factor", 10.0);
    const bool cross_check = sc.flag_or("params", "cross_check", true);

    const double lam = sc.number_or("equation", "lambda", 1.0);
    const double Lam = sc.number_or("equation", "Lambda", lam);
    const double p = sc.number_or("equation", "p", 4.0 + gc.n);
    EquationSpec super_spec;
    super_spec.branch = Branch::plus;
    super_spec.pair = PucciPair{lam, Lam};
    super_spec.p = p;
    EquationSpec sub_spec = super_spec;
    sub_spec.branch = Branch::minus;
    if (sc.has("equation", "mu")) {
        super_spec.mu = make_expr_field(sc.str("equation", "mu"));
        sub_spec.mu = super_spec.mu;
    }

    CounterRng root(seed);
    std::vector<EstimateReport> reps;
    bool pass = true;
    double worst_c4 = 0.0;
    const int store = gc.n == 1 ? 0 : gc.store_levels;
    for (int idx = 0; idx < fields; ++idx) {
        // Boundary data base + bumps stays >= base > 0, and with f = 0 the
        // marched plus-branch solution is also a minus-branch subsolution.
        ScalarField bump = make_bump_sum_field(gc.n, gc.box, bumps, bump_amp,
                                               gc.box.half_width * 0.15, gc.box.half_width * 0.5,
                                               root.stream(0x4A + idx));
        BoundaryFn data = [base_value, bump](const std::array<double, 3>& x, double t) {
            return base_value + bump(x, t);
        };
        GridFunction u = march_on_box(super_spec, gc.box, gc.nx, store, data);
        EstimateReport rep = harnack_report(u, super_spec, sub_spec, tol_factor);
        rep.kind += "/field_" + std::to_string(idx);
        pass = pass && rep.pass;
        const double c4 = rep.fitted.count("C4") ? rep.fitted.at("C4") : 0.0;
        worst_c4 = std::max(worst_c4, c4);

        if (cross_check && rep.pass) {
            // With zero source, C4 factors through the one-sided constants:
            // C4 = C3 * C0 exactly, so the composed bound must hold with slack.
            EstimateReport lm = local_max_report(u, sub_spec, eps0, tol_factor);
            CubeCatalog cat = make_catalog(gc.n);
            const double c0_num = lp_norm(u, cat.J1, eps0);
            const double c0_den = inf_over(u, cat.J2);
            const double c0 = c0_den > 0.0 ? c0_num / c0_den : 0.0;
            const double c3 = lm.fitted.count("C3") ? lm.fitted.at("C3") : 0.0;
            rep.fitted["C3"] = c3;
            rep.fitted["C0"] = c0;
            rep.fitted["C3_times_C0"] = c3 * c0;
            if (c4 > 3.0 * c3 * c0 + 1e-12) {
                rep.pass = false;
                rep.witness = "C4 exceeded 3 * C3 * C0";
                pass = false;
            }
        }
        reps.push_back(std::move(rep));
    }
    return finish(sc, "harnack", seed, pass, reps, "worst C4 " + fmt(worst_c4));
}

// ---------------------------------------------------------------------------
// kind: partition

RunResult run_partition(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    const double q = sc.number_or("equation", "q", 6.0);
    const double delta_hat = sc.number("params", "delta_hat");
    const int nt = static_cast<int>(sc.number_or("params", "nt", 512));
    EquationSpec spec = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);

    SpaceTimeGrid g{gc.n, gc.box, gc.nx, nt};
    TimePartition part = time_partition(spec.mu, q, delta_hat, g);

    EstimateReport rep = basic_report("partition", true, "");
    rep.fitted["count"] = part.count;
    rep.fitted["total_norm"] = part.total_norm;
    rep.assumed["delta_hat"] = delta_hat;
    rep.assumed["q"] = q;
    rep.table_name = "slab_right_endpoints";
    for (std::size_t i = 0; i < part.cuts.size(); ++i)
        rep.table.push_back({static_cast<double>(i), part.cuts[i]});
    bool pass = part.count_bound_ok;
    if (!pass) rep.witness = "slab count exceeded 1 + (total/delta_hat)^q";
    if (sc.has("params", "expected_k")) {
        const int expect = static_cast<int>(sc.number("params", "expected_k"));
        rep.assumed["expected_k"] = expect;
        if (part.count != expect) {
            pass = false;
            rep.witness = "expected " + std::to_string(expect) + " slabs, got " +
                          std::to_string(part.count);
        }
    }
    rep.pass = pass;
    return finish(sc, "partition", seed, pass, {rep},
                  std::to_string(part.count) + " slabs, total norm " + fmt(part.total_norm));
}

// ---------------------------------------------------------------------------
// kind: fixed_point

RunResult run_fixed_point(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    EquationSpec spec = equation_from_scenario(sc, gc.n, gc.box, gc.nx, seed);
    const std::string regime = sc.str_or("params", "regime", "small");
    if (regime != "zero_mu" && regime != "small" && regime != "diverge")
        throw ConfigError("[params] regime must be \"zero_mu\", \"small\" or \"diverge\"");
    FixedPointOptions opts;
    opts.tol = sc.number_or("params", "tol", 1e-7);
    opts.max_iterations = static_cast<int>(sc.number_or("params", "max_iterations", 50));
    opts.delta1 = sc.number_or("params", "delta1", 0.1);
    const double residual_target = sc.number_or("params", "residual_target", 1e-5);

    BoundaryFn psi = zero_data();
    if (sc.has("params", "boundary")) psi = expr_data(sc.str("params", "boundary"));

    // The iterates solve linear problems (the gradient term is frozen into the
    // source), so the step count plans with a zero gradient bound.
    SpaceTimeGrid g{gc.n, gc.box, gc.nx, 1};
    EquationSpec lin = spec;
    lin.mu = make_zero_field();
    g.nt = plan_march_steps(lin, g, 0.0, 0);

    EstimateReport rep = basic_report("fixed_point/" + regime, true, "");
    rep.assumed["tol"] = opts.tol;
    rep.assumed["delta1"] = opts.delta1;
    rep.assumed["residual_target"] = residual_target;
    rep.table_name = "iteration_sup_diffs";
    FixedPointLog log;
    bool pass = true;
    try {
        superlinear_fixed_point(spec, g, psi, opts, &log);
        rep.fitted["iterations"] = log.iterations;
        rep.fitted["final_residual"] = log.final_residual;
        rep.fitted["smallness_value"] = log.smallness_value;
        if (regime == "diverge") {
            pass = false;
            rep.witness = "expected divergence, iteration settled";
        } else if (!log.converged) {
            pass = false;
            rep.witness = "iteration did not settle within max_iterations";
        } else if (log.final_residual > residual_target) {
            pass = false;
            rep.witness = "final residual " + fmt(log.final_residual) + " above target";
        } else if (regime == "zero_mu" && log.iterations != 1) {
            pass = false;
            rep.witness = "zero coefficient should settle in one round";
        } else if (regime == "small" && !log.smallness_ok) {
            pass = false;
            rep.witness = "smallness certificate failed: " + fmt(log.smallness_value);
        }
    } catch (const NumericalError& e) {
        rep.fitted["iterations"] = log.iterations;
        if (regime == "diverge" && log.diverged) {
            rep.witness = e.what();
        } else {
            pass = false;
            rep.witness = std::string("numerical abort: ") + e.what();
        }
    }
    for (std::size_t i = 0; i < log.step_diffs.size(); ++i)
        rep.table.push_back({static_cast<double>(i + 1), log.step_diffs[i]});
    rep.pass = pass;
    return finish(sc, "fixed_point", seed, pass, {rep},
                  regime + ", " + std::to_string(log.iterations) + " iterations");
}

// ---------------------------------------------------------------------------
// kind: blowup

RunResult run_blowup(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    BlowupParams params;
    params.A0 = sc.number_or("params", "A0", 2.0);
    params.beta0 = sc.number_or("params", "beta0", 0.5);
    params.n = gc.n;
    params.require_valid();

    EstimateReport rep = basic_report("blowup", true, "");
    rep.fitted["alpha"] = params.alpha();
    rep.fitted["nu"] = params.nu();
    rep.fitted["n0"] = params.n0();
    rep.fitted["ell_n0"] = params.ell(params.n0());
    rep.fitted["tail_n0"] = params.tail(params.n0());
    rep.fitted["threshold"] = std::pow(params.nu(), params.n0() - 1);
    rep.assumed["A0"] = params.A0;
    rep.assumed["beta0"] = params.beta0;

    bool pass = true;
    if (sc.has("params", "field")) {
        ScalarField fld = make_expr_field(sc.str("params", "field"));
        SpaceTimeGrid g{gc.n, gc.box, gc.nx, static_cast<int>(sc.number_or("params", "nt", 256))};
        GridFunction v = sample_onto(fld, g);

        // Start at the J3 argmax unless the scenario pins the start point.
        CubeCatalog cat = make_catalog(gc.n);
        std::array<double, 3> sx{0.0, 0.0, 0.0};
        double st = cat.J3.t_top;
        if (sc.has("params", "start_x")) {
            auto v0 = sc.numbers("params", "start_x");
            sx = {v0.size() > 0 ? v0[0] : 0.0, v0.size() > 1 ? v0[1] : 0.0, 0.0};
            st = sc.number_or("params", "start_t", cat.J3.t_top);
        } else {
            double best = -std::numeric_limits<double>::infinity();
            for (int k = 0; k <= g.nt; ++k)
                for (int i = 0; i < g.nx; ++i)
                    for (int j = 0; j < (g.n == 2 ? g.nx : 1); ++j) {
                        const auto x = g.point(i, j);
                        const double t = g.t(k);
                        if (!cat.J3.contains(x, t)) continue;
                        if (v.at(k, i, j) > best) {
                            best = v.at(k, i, j);
                            sx = x;
                            st = t;
                        }
                    }
        }

        ChaseResult chase = blowup_chase(v, params, sx, st);
        rep.fitted["trace_steps"] = static_cast<double>(chase.trace.size());
        rep.fitted["start_value"] = chase.trace.empty() ? 0.0 : chase.trace.front().value;
        rep.table_name = "chase_level_vs_value";
        for (const auto& step : chase.trace)
            rep.table.push_back({static_cast<double>(step.level), step.value});
        const bool expect_chase = sc.flag_or("params", "expect_chase", true);
        if (expect_chase) {
            if (chase.terminated_below_threshold && chase.trace.empty()) {
                pass = false;
                rep.witness = "field never reached the chase threshold";
            } else if (chase.trace.empty()) {
                pass = false;
                rep.witness = "empty chase trace";
            }
            // A bounded sampled field must stop: endless growth would mean the
            // recursion certified unbounded values.
            if (!chase.terminated_below_threshold && !chase.exited_domain) {
                pass = false;
                rep.witness = "chase neither terminated nor exited the domain";
            }
        } else if (!chase.terminated_below_threshold || !chase.trace.empty()) {
            pass = false;
            rep.witness = "expected the start value to sit below the threshold";
        }
    }
    rep.pass = pass;
    return finish(sc, "blowup", seed, pass, {rep},
                  "alpha " + fmt(params.alpha()) + ", nu " + fmt(params.nu()) + ", n0 " +
                      std::to_string(params.n0()));
}

// ---------------------------------------------------------------------------
// kind: decay

RunResult run_decay(const Scenario& sc, std::uint64_t seed) {
    GridConfig gc = grid_config(sc);
    ScalarField fld = make_expr_field(sc.str("params", "field"));
    const int nt = static_cast<int>(sc.number_or("params", "nt", 256));
    const int points = static_cast<int>(sc.number_or("params", "points", 24));
    SpaceTimeGrid g{gc.n, gc.box, gc.nx, nt};
    GridFunction u = sample_onto(fld, g);
    EstimateReport rep = distribution_decay(u, points);
    bool pass = rep.pass;
    if (sc.has("params", "min_beta0") && rep.fitted.count("beta0")) {
        const double mb = sc.number("params", "min_beta0");
        rep.assumed["min_beta0"] = mb;
        if (rep.fitted.at("beta0") < mb) {
            pass = false;
            rep.witness = "fitted decay exponent below " + fmt(mb);
            rep.pass = false;
        }
    }
    const double beta0 = rep.fitted.count("beta0") ? rep.fitted.at("beta0") : 0.0;
    const double a0 = rep.fitted.count("A0_envelope") ? rep.fitted.at("A0_envelope") : 0.0;
    return finish(sc, "decay", seed, pass, {rep},
                  "beta0 " + fmt(beta0) + ", A0 envelope " + fmt(a0));
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
    const std::string kind = sc.str("run", "kind");
    const std::uint64_t seed = static_cast<std::uint64_t>(sc.number_or("run", "seed", 1));
    if (kind == "pucci_oracle") return run_pucci_oracle(sc, seed);
    if (kind == "cz_random") return run_cz_random(sc, seed);
    if (kind == "convergence") return run_convergence(sc, seed);
    if (kind == "comparison") return run_comparison(sc, seed);
    if (kind == "abp") return run_abp(sc, seed);
    if (kind == "weak_harnack") return run_weak_harnack(sc, seed);
    if (kind == "barrier") return run_barrier(sc, seed);
    if (kind == "holder") return run_holder(sc, seed);
    if (kind == "local_max") return run_local_max(sc, seed);
    if (kind == "harnack") return run_harnack(sc, seed);
    if (kind == "partition") return run_partition(sc, seed);
    if (kind == "fixed_point") return run_fixed_point(sc, seed);
    if (kind == "blowup") return run_blowup(sc, seed);
    if (kind == "decay") return run_decay(sc, seed);
    throw ConfigError("unknown scenario kind \"" + kind + "\"");
}

void validate_scenario(const Scenario& sc) {
    static const char* kinds[] = {"pucci_oracle", "cz_random", "convergence", "comparison",
                                  "abp",          "weak_harnack", "barrier",   "holder",
                                  "local_max",    "harnack",   "partition",   "fixed_point",
                                  "blowup",       "decay"};
    const std::string kind = sc.str("run", "kind");
    if (std::find_if(std::begin(kinds), std::end(kinds),
                     [&](const char* k) { return kind == k; }) == std::end(kinds))
        throw ConfigError("unknown scenario kind \"" + kind + "\"");
    GridConfig gc = grid_config(sc);
    equation_from_scenario(sc, gc.n, gc.box, gc.nx, 1);
    if (kind == "partition") sc.number("params", "delta_hat");
    if (kind == "decay") sc.str("params", "field");
    if (sc.has("params", "boundary")) parse_expression(sc.str("params", "boundary"));
    if (sc.has("params", "data")) parse_expression(sc.str("params", "data"));
    if (sc.has("params", "field")) parse_expression(sc.str("params", "field"));
}

Scenario refine_scenario(const Scenario& sc, int factor) {
    if (factor < 1) throw ConfigError("refine factor must be >= 1");
    Scenario out = sc;
    auto grid = out.sections.find("grid");
    if (grid == out.sections.end()) return out;
    auto scale_nx = [factor](double nx) {
        return static_cast<double>((static_cast<int>(nx) - 1) * factor + 1);
    };
    auto it = grid->second.find("nx");
    if (it != grid->second.end())
        if (auto* d = std::get_if<double>(&it->second)) *d = scale_nx(*d);
    it = grid->second.find("store_levels");
    if (it != grid->second.end())
        if (auto* d = std::get_if<double>(&it->second)) *d *= factor;
    it = grid->second.find("nx_list");
    if (it != grid->second.end())
        if (auto* v = std::get_if<std::vector<double>>(&it->second))
            for (double& d : *v) d = scale_nx(d);
    it = grid->second.find("store_list");
    if (it != grid->second.end())
        if (auto* v = std::get_if<std::vector<double>>(&it->second))
            for (double& d : *v) d *= factor;
    return out;
}

}  // namespace pucci
