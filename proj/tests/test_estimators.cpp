#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "pucci/estimators.hpp"
#include "pucci/geometry.hpp"
#include "pucci/oracles.hpp"

using namespace pucci;

namespace {

SpaceTimeGrid ambient_grid(int n, int nx, int nt) {
    SpaceTimeGrid g;
    g.n = n;
    g.box = make_catalog(n).Q;
    g.nx = nx;
    g.nt = nt;
    return g;
}

GridFunction constant_field_on(const SpaceTimeGrid& g, double c) {
    GridFunction u(g);
    u.fill([c](const std::array<double, 3>&, double) { return c; });
    return u;
}

ScalarField bump_source(double amplitude) {
    ScalarField f;
    f.label = "bump";
    f.sample = [amplitude](std::array<double, 3> x, double t) {
        double v = amplitude * std::exp(-4.0 * x[0] * x[0]);
        return v * (1.0 + 0.5 * t);
    };
    return f;
}

const BoundaryFn zero_wall = [](const std::array<double, 3>&, double) { return 0.0; };

}  // namespace

TEST_CASE("maximum principle check on marched fields") {
    EquationSpec spec;
    spec.branch = Branch::minus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.p = 3.0;
    SpaceTimeGrid g;
    g.n = 1;
    g.box = ParabolicCube{1, {0.0, 0.0, 0.0}, 1.0, 0.5, 0.5};
    g.nx = 33;
    g.nt = 1024;

    SUBCASE("zero source, zero data: zero slack and a clean pass") {
        const GridFunction u = solve_parabolic(spec, g, zero_wall);
        const EstimateReport rep = abp_check(u, spec);
        CHECK(rep.pass);
        CHECK(rep.witness == "ok");
        CHECK(rep.fitted.at("slack") == 0.0);
        CHECK(rep.fitted.at("C1") == 0.0);
        CHECK(rep.fitted.at("f_norm") == 0.0);
    }

    SUBCASE("nonnegative source lifts the interior and is certified") {
        spec.f = bump_source(1.0);
        const GridFunction u = solve_parabolic(spec, g, zero_wall);
        const EstimateReport rep = abp_check(u, spec);
        CHECK(rep.pass);
        CHECK(rep.fitted.at("slack") > 0.0);
        CHECK(rep.fitted.at("C1") > 0.0);
        CHECK(rep.fitted.at("f_norm") > 0.0);
        // restricting the source norm to the superlevel set can only shrink it
        CHECK(rep.fitted.at("f_norm_contact") <= rep.fitted.at("f_norm") * (1.0 + 1e-12));
        CHECK(rep.fitted.at("C1_contact") >= rep.fitted.at("C1") * (1.0 - 1e-12));
    }

    SUBCASE("interior excess with zero source is flagged") {
        GridFunction fake(g);
        fake.fill([](const std::array<double, 3>& x, double t) {
            return 2.0 * t * (1.0 - x[0] * x[0]);
        });
        const EstimateReport rep = abp_check(fake, spec);
        CHECK_FALSE(rep.pass);
        CHECK(rep.fitted.count("comparison_violation") == 1);
    }

    SUBCASE("missing source exponent is rejected") {
        spec.p = 0.0;
        const GridFunction u = solve_parabolic(spec, g, zero_wall);
        CHECK_THROWS_AS(abp_check(u, spec), ContractViolation);
    }
}

TEST_CASE("superlinear maximum principle variant") {
    EquationSpec spec;
    spec.branch = Branch::minus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.m = 2.0;
    spec.p = 6.0;
    spec.q = 8.0;
    spec.mu = make_constant_field(0.1);
    spec.f = bump_source(1.0);
    SpaceTimeGrid g;
    g.n = 1;
    g.box = ParabolicCube{1, {0.0, 0.0, 0.0}, 1.0, 0.5, 0.5};
    g.nx = 33;
    g.nt = 1152;  // headroom over the zero-gradient CFL count of 1024
    const GridFunction u = solve_parabolic(spec, g, zero_wall);

    const EstimateReport rep = abp_superlinear_check(u, spec);
    CHECK(rep.pass);
    CHECK(rep.fitted.at("C_envelope") > 0.0);
    const double fn = rep.fitted.at("f_norm");
    const double mn = rep.fitted.at("mu_norm");
    CHECK(rep.fitted.at("small_regime_product") ==
          doctest::Approx(mn * std::pow(fn, spec.m - 1.0)).epsilon(1e-12));
    const double envelope =
        std::pow(1.0 + std::pow(fn, (spec.m - 1.0) * spec.q) * std::pow(mn, spec.q),
                 (spec.p - 1.0) / spec.p) *
        fn;
    CHECK(rep.fitted.at("envelope") == doctest::Approx(envelope).epsilon(1e-12));

    EquationSpec linear = spec;
    linear.m = 1.0;
    CHECK_THROWS_AS(abp_superlinear_check(u, linear), ContractViolation);
    EquationSpec no_q = spec;
    no_q.q = 0.0;
    CHECK_THROWS_AS(abp_superlinear_check(u, no_q), ContractViolation);
}

TEST_CASE("time partition of the gradient coefficient") {
    SpaceTimeGrid g = ambient_grid(1, 41, 40);

    SUBCASE("constant coefficient, integer slab ratio") {
        // |mu|^q mass is 20 per unit time; delta^q = 50 cuts depth 10 into 4
        const TimePartition part =
            time_partition(make_constant_field(1.0), 3.0, std::cbrt(50.0), g);
        REQUIRE(part.count == 4);
        CHECK(part.cuts[0] == doctest::Approx(2.5).epsilon(1e-9));
        CHECK(part.cuts[1] == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(part.cuts[2] == doctest::Approx(7.5).epsilon(1e-9));
        CHECK(part.cuts[3] == 10.0);
        CHECK(part.total_norm == doctest::Approx(std::cbrt(200.0)).epsilon(1e-12));
        CHECK(part.count_bound_ok);
    }

    SUBCASE("non-integer ratio rounds the count up") {
        const TimePartition part =
            time_partition(make_constant_field(1.0), 3.0, std::cbrt(200.0 / 4.5), g);
        CHECK(part.count == 5);
        CHECK(part.cuts.back() == 10.0);
        CHECK(part.count_bound_ok);
    }

    SUBCASE("a single oversized slice refuses to partition") {
        CHECK_THROWS_WITH_AS(time_partition(make_constant_field(50.0), 3.0, 1e-3, g),
                             doctest::Contains("slice starting at"), ContractViolation);
    }

    SUBCASE("parameter guards") {
        CHECK_THROWS_AS(time_partition(make_constant_field(1.0), 0.5, 1.0, g),
                        ContractViolation);
        CHECK_THROWS_AS(time_partition(make_constant_field(1.0), 3.0, 0.0, g),
                        ContractViolation);
    }
}

TEST_CASE("weak Harnack quotient on constant families") {
    EquationSpec spec;
    spec.branch = Branch::plus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.p = 3.0;

    SUBCASE("u == 1 in one dimension gives C0 == 1 exactly") {
        std::vector<GridFunction> levels;
        levels.push_back(constant_field_on(ambient_grid(1, 41, 16), 1.0));
        levels.push_back(constant_field_on(ambient_grid(1, 81, 32), 1.0));
        const EstimateReport rep = weak_harnack_report(levels, spec, {0.5});
        CHECK(rep.pass);
        CHECK(rep.fitted.at("eps0") == 0.5);
        CHECK(rep.fitted.at("C0") == 1.0);
        CHECK(rep.fitted.at("stability_worst_ratio") == 1.0);
        CHECK(rep.fitted.at("scaling_dev") <= 1e-12);
    }

    SUBCASE("u == 1 in two dimensions gives C0 == |J1|^{1/eps0} == 4") {
        std::vector<GridFunction> levels;
        levels.push_back(constant_field_on(ambient_grid(2, 21, 16), 1.0));
        levels.push_back(constant_field_on(ambient_grid(2, 41, 32), 1.0));
        const EstimateReport rep = weak_harnack_report(levels, spec, {0.5});
        CHECK(rep.pass);
        CHECK(rep.fitted.at("C0") == 4.0);
    }

    SUBCASE("empty inputs are rejected") {
        std::vector<GridFunction> levels;
        CHECK_THROWS_AS(weak_harnack_report(levels, spec, {0.5}), ContractViolation);
        levels.push_back(constant_field_on(ambient_grid(1, 41, 16), 1.0));
        CHECK_THROWS_AS(weak_harnack_report(levels, spec, {}), ContractViolation);
    }
}

TEST_CASE("weak Harnack quotient on a marched supersolution family") {
    // Supersolution convention: march with the source negated, so the audited
    // residual is +2f >= 0.
    EquationSpec spec;
    spec.branch = Branch::plus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.p = 3.0;
    spec.f = bump_source(0.05);
    EquationSpec march = spec;
    march.f.sample = [inner = spec.f.sample](std::array<double, 3> x, double t) {
        return -inner(x, t);
    };
    const BoundaryFn base_one = [](const std::array<double, 3>&, double) { return 1.0; };

    std::vector<GridFunction> levels;
    levels.push_back(solve_parabolic(march, ambient_grid(1, 81, 1296), base_one));
    levels.push_back(solve_parabolic(march, ambient_grid(1, 161, 5184), base_one));

    const EstimateReport rep = weak_harnack_report(levels, spec, {0.25, 0.5, 1.0});
    CHECK(rep.pass);
    CHECK(rep.fitted.at("eps0") >= 0.5);
    CHECK(rep.fitted.at("C0") > 0.0);
    CHECK(rep.fitted.at("stability_worst_ratio") <= 2.0);
    CHECK(rep.fitted.at("scaling_dev") <= 1e-8);
}

TEST_CASE("superlevel measure decay fit") {
    SpaceTimeGrid g = ambient_grid(1, 641, 64);

    SUBCASE("inverse-square profile fits beta0 near 1/2") {
        GridFunction u(g);
        u.fill([](const std::array<double, 3>& x, double) {
            const double r = std::fabs(x[0]) + 0.01;
            return 1.0 / (r * r);
        });
        const EstimateReport rep = distribution_decay(u);
        CHECK(rep.pass);
        CHECK(rep.fitted.at("informative_points") >= 3.0);
        CHECK(rep.fitted.at("beta0") == doctest::Approx(0.5).epsilon(0.2));
        REQUIRE(rep.table.size() == 24);
        // the inflated amplitude really is an envelope for the whole table
        const double beta0 = rep.fitted.at("beta0");
        const double a_env = rep.fitted.at("A0_envelope");
        for (const auto& row : rep.table)
            if (row[1] > 0.0)
                CHECK(row[1] <= a_env * std::pow(row[0], -beta0) * (1.0 + 1e-12));
    }

    SUBCASE("constant field degenerates gracefully") {
        const EstimateReport rep = distribution_decay(constant_field_on(g, 2.0));
        CHECK(rep.pass);
        CHECK(rep.fitted.at("degenerate") == 1.0);
        CHECK(rep.fitted.at("beta0") == 0.0);
    }

    SUBCASE("nonpositive field degenerates gracefully") {
        const EstimateReport rep = distribution_decay(constant_field_on(g, -1.0));
        CHECK(rep.pass);
        CHECK(rep.fitted.at("beta0") == 0.0);
    }

    CHECK_THROWS_AS(distribution_decay(constant_field_on(g, 1.0), 3), ContractViolation);
}

TEST_CASE("oscillation decay fit") {
    EquationSpec spec;
    spec.branch = Branch::minus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.p = 3.0;  // alpha0 = 2 - 3/p = 1

    SUBCASE("affine field decays at the exponent cap") {
        SpaceTimeGrid g = ambient_grid(1, 321, 50);
        GridFunction u(g);
        u.fill([](const std::array<double, 3>& x, double t) { return 0.3 * x[0] + 0.05 * t; });
        const EstimateReport rep = holder_report(u, spec);
        CHECK(rep.pass);
        CHECK(rep.assumed.at("alpha0") == 1.0);
        CHECK(rep.fitted.at("gamma_hat") == 0.0);
        CHECK(rep.fitted.at("alpha") == 1.0);
        CHECK(rep.fitted.count("seminorm_Qhalf") == 1);
        REQUIRE(rep.table.size() >= 3);
        // radii are the decades 1, 1/10, 1/100 and oscillation shrinks
        CHECK(rep.table[0][0] == 1.0);
        CHECK(rep.table[1][0] == 0.1);
        CHECK(rep.table[0][1] > rep.table[1][1]);
        CHECK(rep.table[1][1] > rep.table[2][1]);
    }

    SUBCASE("constant field is degenerate at the cap") {
        SpaceTimeGrid g = ambient_grid(1, 321, 50);
        const EstimateReport rep = holder_report(constant_field_on(g, 5.0), spec);
        CHECK(rep.pass);
        CHECK(rep.fitted.at("degenerate_constant") == 1.0);
        CHECK(rep.fitted.at("alpha") == 1.0);
    }

    SUBCASE("coarse grids cannot fit three decades") {
        SpaceTimeGrid g = ambient_grid(1, 41, 50);
        CHECK_THROWS_WITH_AS(holder_report(constant_field_on(g, 1.0), spec),
                             doctest::Contains("fewer than 3 usable"), ContractViolation);
    }

    SUBCASE("exponent cap must be positive") {
        SpaceTimeGrid g = ambient_grid(1, 321, 50);
        EquationSpec bad = spec;
        bad.p = 1.5;
        CHECK_THROWS_AS(holder_report(constant_field_on(g, 1.0), bad), ConfigError);
    }
}

TEST_CASE("local maximum principle quotients") {
    EquationSpec spec;
    spec.branch = Branch::minus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.p = 3.0;

    SUBCASE("u == 1: C3 is exactly |J1|^{-1/eps0}") {
        const EstimateReport r1 =
            local_max_report(constant_field_on(ambient_grid(1, 41, 20), 1.0), spec, 0.5);
        CHECK(r1.pass);
        CHECK(r1.fitted.at("C3") == 1.0);

        const EstimateReport r2 =
            local_max_report(constant_field_on(ambient_grid(2, 21, 20), 1.0), spec, 0.5);
        CHECK(r2.pass);
        CHECK(r2.fitted.at("C3") == 0.25);
    }

    SUBCASE("marched subsolution instance") {
        // minus branch: the marched equation carries -f, so f >= 0 lifts u
        spec.f = bump_source(1.0);
        SpaceTimeGrid g = ambient_grid(1, 161, 5184);
        const GridFunction u = solve_parabolic(spec, g, zero_wall);
        const EstimateReport rep = local_max_report(u, spec, 0.5);
        CHECK(rep.pass);
        CHECK(rep.fitted.at("sup_J3") > 0.0);
        CHECK(rep.fitted.at("C3") > 0.0);
    }

    CHECK_THROWS_AS(
        local_max_report(constant_field_on(ambient_grid(1, 41, 20), 1.0), spec, 0.0),
        ContractViolation);
}

TEST_CASE("Harnack quotients") {
    EquationSpec super_spec;
    super_spec.branch = Branch::plus;
    super_spec.pair = PucciPair{1.0, 2.0};
    super_spec.p = 3.0;
    EquationSpec sub_spec = super_spec;
    sub_spec.branch = Branch::minus;

    SUBCASE("u == 1: the quotient is exactly one and factors exactly") {
        for (int n : {1, 2}) {
            CAPTURE(n);
            const GridFunction u = constant_field_on(ambient_grid(n, n == 1 ? 41 : 21, 20), 1.0);
            const EstimateReport rep = harnack_report(u, super_spec, sub_spec);
            CHECK(rep.pass);
            CHECK(rep.fitted.at("C4") == 1.0);

            // C4 == C3 * C0 when the source vanishes
            const EstimateReport lm = local_max_report(u, sub_spec, 0.5);
            std::vector<GridFunction> fam{u, u};
            const EstimateReport wh = weak_harnack_report(fam, super_spec, {0.5});
            CHECK(rep.fitted.at("C4") ==
                  doctest::Approx(lm.fitted.at("C3") * wh.fitted.at("C0")).epsilon(1e-12));
        }
    }

    SUBCASE("a marched plus-branch solution is also a minus-branch subsolution") {
        const BoundaryFn data = [](const std::array<double, 3>& x, double) {
            return 1.0 + 0.5 * std::cos(0.05 * 3.14159265358979323846 * x[0]);
        };
        SpaceTimeGrid g = ambient_grid(1, 161, 5184);
        const GridFunction u = solve_parabolic(super_spec, g, data);
        const EstimateReport rep = harnack_report(u, super_spec, sub_spec);
        CHECK(rep.pass);
        CHECK(rep.fitted.at("C4") >= 1.0 - 1e-12);
        CHECK(rep.fitted.at("C4") <= 10.0);
    }

    SUBCASE("negative values are rejected") {
        CHECK_THROWS_AS(
            harnack_report(constant_field_on(ambient_grid(1, 41, 20), -0.5), super_spec,
                           sub_spec),
            ContractViolation);
    }
}

TEST_CASE("doubling recursion parameters") {
    SUBCASE("shallow decay: huge threshold level") {
        BlowupParams p;  // A0 = 2, beta0 = 0.5, n = 1
        CHECK(p.alpha() == 32.0);
        CHECK(p.nu() == 32.0 / 31.0);
        CHECK(p.n0() == 1494);
        CHECK(std::pow(p.nu(), p.n0() - 1) ==
              doctest::Approx(3.8539736148172505e+20).epsilon(1e-12));
        CHECK(p.ell(0) == doctest::Approx(3.563594872561357).epsilon(1e-14));
    }

    SUBCASE("steep decay: desk-scale threshold level") {
        BlowupParams p;
        p.beta0 = 3.0;
        CHECK(p.alpha() == doctest::Approx(3.1748021039363987).epsilon(1e-14));
        CHECK(p.nu() == doctest::Approx(1.4598119517127544).epsilon(1e-14));
        CHECK(p.ell(12) == doctest::Approx(0.0677928162107362).epsilon(1e-12));
        CHECK(p.tail(12) == doctest::Approx(0.21522877553761877).epsilon(1e-12));
        CHECK(p.n0() == 12);
        CHECK(p.tail(p.n0()) <= 0.25);
        CHECK(p.tail(p.n0() - 1) > 0.25);
        CHECK(std::pow(p.nu(), p.n0() - 1) ==
              doctest::Approx(64.16025253106328).epsilon(1e-12));

        BlowupParams q = p;
        q.n = 2;
        CHECK(q.n0() == 16);
    }

    SUBCASE("parameter guards") {
        BlowupParams bad;
        bad.A0 = 0.0;
        CHECK_THROWS_AS(bad.require_valid(), ContractViolation);
        BlowupParams flat;
        flat.A0 = 0.2;
        flat.beta0 = 1.0;  // alpha = 0.8 <= 1
        CHECK_THROWS_AS(flat.require_valid(), ContractViolation);
    }
}

TEST_CASE("chase along a planted staircase terminates with a full trace") {
    BlowupParams params;
    params.beta0 = 3.0;  // nu ~ 1.46, n0 = 12
    const double nu = params.nu();
    REQUIRE(params.n0() == 12);

    SpaceTimeGrid g = ambient_grid(1, 2561, 80);  // h = 1/128, dt = 1/8
    GridFunction v(g);
    const int k_top = 4;  // t = 0.5, the top of J3
    REQUIRE(g.t(k_top) == 0.5);

    // Rungs at t = 0.5: each next rung sits 0.9 ell_j to the right (snapped
    // down to the lattice) and certifies the next level with 2% headroom.
    std::vector<int> rung_i;
    std::vector<double> rung_val;
    int i = (g.nx - 1) / 2;  // x = 0
    for (int j = 0; j <= 6; ++j) {
        rung_i.push_back(i);
        rung_val.push_back(std::pow(nu, 11 + j) * 1.02);
        v.set(k_top, i, rung_val.back());
        const double step = 0.9 * params.ell(12 + j);
        i = static_cast<int>(std::floor((g.x(i) + step - g.box.lo(0)) / g.h()));
    }

    const ChaseResult res = blowup_chase(v, params, {0.0, 0.0, 0.0}, 0.5);
    CHECK(res.terminated_below_threshold);
    CHECK_FALSE(res.exited_domain);
    REQUIRE(res.trace.size() == 7);
    for (std::size_t s = 0; s < res.trace.size(); ++s) {
        const ChaseStep& st = res.trace[s];
        CHECK(st.level == 12 + static_cast<int>(s));
        CHECK(st.t == 0.5);
        CHECK(st.x[0] == g.x(rung_i[s]));
        CHECK(st.value == rung_val[s]);
        CHECK(st.value >= std::pow(nu, st.level - 1));
        CHECK(st.inside_safe_box);
    }

    SUBCASE("a start below the entry threshold yields an empty trace") {
        const ChaseResult flat = blowup_chase(v, params, {0.3, 0.0, 0.0}, 0.45);
        CHECK(flat.terminated_below_threshold);
        CHECK(flat.trace.empty());
    }

    SUBCASE("start point and dimension guards") {
        CHECK_THROWS_WITH_AS(blowup_chase(v, params, {0.6, 0.0, 0.0}, 0.5),
                             doctest::Contains("outside the closure of J3"), ContractViolation);
        CHECK_THROWS_AS(blowup_chase(v, params, {0.0, 0.0, 0.0}, 0.1), ContractViolation);
        BlowupParams two = params;
        two.n = 2;
        CHECK_THROWS_AS(blowup_chase(v, two, {0.0, 0.0, 0.0}, 0.5), ContractViolation);
    }
}
