#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pucci/geometry.hpp"
#include "pucci/norms.hpp"
#include "pucci/pucci_core.hpp"
#include "pucci/rng.hpp"
#include "pucci/scaling.hpp"

using namespace pucci;

namespace {

void check_cube(const ParabolicCube& c, int n, double cx, double half, double top, double depth) {
    CHECK(c.n == n);
    for (int i = 0; i < n; ++i) CHECK(c.center[i] == cx);
    CHECK(c.half_width == half);
    CHECK(c.t_top == top);
    CHECK(c.depth == depth);
}

std::array<double, 3> pt(double x0, double x1 = 0.0, double x2 = 0.0) {
    return {x0, x1, x2};
}

}  // namespace

TEST_CASE("catalog cubes have the documented coordinates") {
    for (int n : {1, 2}) {
        CAPTURE(n);
        const CubeCatalog cat = make_catalog(n);
        CHECK(cat.n == n);
        check_cube(cat.Q, n, 0.0, 10.0, 10.0, 10.0);
        check_cube(cat.J1, n, 0.0, 1.0, 0.5, 0.5);
        check_cube(cat.J2, n, 0.0, 1.0, 10.0, 1.0);
        check_cube(cat.J3, n, 0.0, 0.5, 0.5, 0.25);
        check_cube(cat.K1, n, 0.0, 1.0, 1.0, 1.0);
        check_cube(cat.K2, n, 0.0, 3.0, 10.0, 9.0);
        check_cube(cat.K14, n, 0.0, 0.5, 0.25, 0.25);
    }
}

TEST_CASE("cube measures and parabolic diameters are exact") {
    const CubeCatalog c1 = make_catalog(1);
    CHECK(c1.Q.measure() == 200.0);
    CHECK(c1.J1.measure() == 1.0);
    CHECK(c1.J2.measure() == 2.0);
    CHECK(c1.J3.measure() == 0.25);
    CHECK(c1.K1.measure() == 2.0);
    CHECK(c1.K2.measure() == 54.0);
    CHECK(c1.K14.measure() == 0.25);
    CHECK(c1.Q.par_diameter() == std::sqrt(410.0));

    const CubeCatalog c2 = make_catalog(2);
    CHECK(c2.Q.measure() == 4000.0);
    CHECK(c2.J1.measure() == 2.0);
    CHECK(c2.J3.measure() == 0.25);
    CHECK(c2.K2.measure() == 324.0);
    CHECK(c2.Q.par_diameter() == std::sqrt(810.0));
}

TEST_CASE("contains is open laterally and half-open in time") {
    const ParabolicCube J1 = make_catalog(1).J1;  // (-1,1) x (0, 1/2]
    CHECK(J1.contains(pt(0.0), 0.5));             // top face included
    CHECK(J1.contains(pt(0.999), 0.25));
    CHECK_FALSE(J1.contains(pt(0.0), 0.0));   // bottom face excluded
    CHECK_FALSE(J1.contains(pt(1.0), 0.25));  // lateral face excluded
    CHECK_FALSE(J1.contains(pt(-1.0), 0.25));
    CHECK_FALSE(J1.contains(pt(0.0), 0.5000001));

    const ParabolicCube J1b = make_catalog(2).J1;
    CHECK(J1b.contains(pt(0.5, -0.5), 0.5));
    CHECK_FALSE(J1b.contains(pt(0.5, 1.0), 0.25));  // second axis checked too
}

TEST_CASE("invalid cubes are rejected") {
    ParabolicCube c;
    c.half_width = 0.0;
    CHECK_THROWS_AS(c.require_valid(), ContractViolation);
    c.half_width = 1.0;
    c.depth = -1.0;
    CHECK_THROWS_AS(c.require_valid(), ContractViolation);
    c.depth = 1.0;
    c.n = 4;
    CHECK_THROWS_AS(c.require_valid(), ContractViolation);
}

TEST_CASE("Q_r reproduces Q at r = 1 and shrinks anchored at the top") {
    const CubeCatalog cat = make_catalog(1);
    const ParabolicCube full = cat.Q_r(1.0);
    check_cube(full, 1, 0.0, 10.0, 10.0, 10.0);

    const ParabolicCube half = cat.Q_r(0.5);
    check_cube(half, 1, 0.0, 5.0, 10.0, 2.5);
    CHECK(half.t_bottom() == 7.5);

    const ParabolicCube at = CubeCatalog::Q_r_at(2, pt(0.25, -0.5), 0.75, 0.5);
    CHECK(at.n == 2);
    CHECK(at.center[0] == 0.25);
    CHECK(at.center[1] == -0.5);
    CHECK(at.half_width == 0.5);
    CHECK(at.t_top == 0.75);
    CHECK(at.depth == 0.25);
}

TEST_CASE("level-1 dyadic cubes partition the covering root") {
    for (int n : {1, 2}) {
        CAPTURE(n);
        const auto cubes = level1_cubes(n);
        CHECK(cubes.size() == static_cast<std::size_t>(1) << (n + 2));
        double total = 0.0;
        for (const auto& c : cubes) {
            CHECK(c.level == 1);
            CHECK(c.side() == 1.0);
            CHECK(c.tdepth() == 0.25);
            CHECK(c.measure() == (n == 1 ? 0.25 : 0.25 * 0.25 * 4.0));
            total += c.measure();
        }
        const ParabolicCube K1 = make_catalog(n).K1;
        CHECK(total == K1.measure());

        // every sampled interior point of K1 lies in exactly one level-1 cube
        CounterRng rng(2024);
        for (int s = 0; s < 200; ++s) {
            std::array<double, 3> x{0.0, 0.0, 0.0};
            for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
            const double t = rng.uniform(1e-9, 1.0);
            int hits = 0;
            for (const auto& c : cubes)
                if (c.box().contains(x, t)) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("children split a cube 2^n in space and 4 in time") {
    for (int n : {1, 2}) {
        CAPTURE(n);
        DyadicCube parent;
        parent.n = n;
        parent.level = 1;
        parent.sx = {n == 1 ? 1 : 0, 0, 0};
        parent.tj = 2;
        const auto kids = parent.children();
        CHECK(kids.size() == static_cast<std::size_t>(1) << (n + 2));
        const ParabolicCube pbox = parent.box();
        double total = 0.0;
        for (const auto& k : kids) {
            CHECK(k.level == 2);
            CHECK(k.side() == 0.5);
            CHECK(k.tdepth() == 0.0625);
            for (int i = 0; i < n; ++i) {
                CHECK(k.box().lo(i) >= pbox.lo(i));
                CHECK(k.box().hi(i) <= pbox.hi(i));
            }
            CHECK(k.box().t_top <= pbox.t_top);
            CHECK(k.box().t_bottom() >= pbox.t_bottom());
            CHECK(k.predecessor() == parent);
            total += k.measure();
        }
        CHECK(total == doctest::Approx(pbox.measure()).epsilon(1e-14));
    }
}

TEST_CASE("dyadic boxes sit on the documented lattice") {
    DyadicCube c;  // n=1, level 1, sx=0, tj=0
    check_cube(c.box(), 1, -0.5, 0.5, 0.25, 0.25);

    DyadicCube d;
    d.level = 2;
    d.sx = {3, 0, 0};
    d.tj = 5;  // cell (-1 + 3/2, -1 + 4/2) x (5/16, 6/16]
    check_cube(d.box(), 1, 0.75, 0.25, 0.375, 0.0625);

    DyadicCube e;
    e.n = 2;
    e.level = 1;
    e.sx = {0, 1, 0};
    e.tj = 3;
    const ParabolicCube eb = e.box();
    CHECK(eb.lo(0) == -1.0);
    CHECK(eb.hi(0) == 0.0);
    CHECK(eb.lo(1) == 0.0);
    CHECK(eb.hi(1) == 1.0);
    CHECK(eb.t_top == 1.0);
    CHECK(eb.depth == 0.25);
}

TEST_CASE("dyadic validity guards") {
    DyadicCube c;
    c.level = 0;
    CHECK_THROWS_AS(c.require_valid(), ContractViolation);
    c.level = 1;
    c.sx = {2, 0, 0};  // out of [0, 2^1)
    CHECK_THROWS_AS(c.require_valid(), ContractViolation);
    c.sx = {0, 0, 0};
    c.tj = 4;  // out of [0, 4^1)
    CHECK_THROWS_AS(c.require_valid(), ContractViolation);

    DyadicCube level1;
    CHECK_FALSE(level1.has_predecessor());
    CHECK_THROWS_AS(level1.predecessor(), ContractViolation);
}

TEST_CASE("stacked predecessor sits directly on top of the predecessor") {
    DyadicCube c;  // level 2 child of the first level-1 cube
    c.level = 2;
    c.sx = {0, 0, 0};
    c.tj = 0;
    // predecessor box (-1,0) x (0, 1/4]; two stacked copies: (-1,0) x (1/4, 3/4]
    const ParabolicCube s = stacked_predecessor(c, 2);
    check_cube(s, 1, -0.5, 0.5, 0.75, 0.5);

    CHECK_THROWS_AS(stacked_predecessor(DyadicCube{}, 2), ContractViolation);
    CHECK_THROWS_AS(stacked_predecessor(c, 0), ContractViolation);
}

TEST_CASE("stacks of up to 36 copies stay inside the ambient box") {
    // the binding case: a level-2 cube in the last time row, predecessor
    // bottom 3/4, stack top 3/4 + (m+1)/4 = 10 exactly at m = 36
    DyadicCube top;
    top.level = 2;
    top.sx = {0, 0, 0};
    top.tj = 15;
    CHECK(stacked_predecessor(top, 36).t_top == 10.0);
    CHECK(stack_fits_ambient(top, 36));
    CHECK_FALSE(stack_fits_ambient(top, 37));

    DyadicCube deep;
    deep.level = 3;
    deep.sx = {0, 0, 0};
    deep.tj = 63;
    CHECK(stack_fits_ambient(deep, 36));
}

TEST_CASE("growing cubes reproduce the barrier target at the first step") {
    // ell=1, j=0 anchored at the origin: (x0, 1) + 3*K1 = (-3,3)^n x (1,10]
    for (int n : {1, 2}) {
        CAPTURE(n);
        const ParabolicCube g = growing_cube(n, pt(0.0), 0.0, 0, 1);
        const ParabolicCube K2 = make_catalog(n).K2;
        check_cube(g, n, K2.center[0], K2.half_width, K2.t_top, K2.depth);
    }

    // ell=2, j=1: s = 9/2, time offset (81-1)/8 * 1/4 = 5/2
    const ParabolicCube g = growing_cube(1, pt(0.5), 0.25, 1, 2);
    check_cube(g, 1, 0.5, 4.5, 23.0, 20.25);

    CHECK_THROWS_AS(growing_cube(1, pt(0.0), 0.0, -1, 1), ContractViolation);
    CHECK_THROWS_AS(growing_cube(1, pt(0.0), 0.0, 0, 0), ContractViolation);
}

TEST_CASE("paraboloid membership separates the steep and shallow shells") {
    const auto origin = pt(0.0);
    // j=0: S- needs t > (9|x|^2 - 1)/8, S+ needs t > (|x|^2 - 1)/8
    CHECK(paraboloid_membership(1, pt(0.0), 0.1, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));
    CHECK(paraboloid_membership(1, pt(1.0), 0.9, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));
    CHECK_FALSE(paraboloid_membership(1, pt(1.0), 0.9, origin, 0.0, 0, Paraboloid::s_minus, 0.0, 1.0));
    CHECK_FALSE(paraboloid_membership(1, pt(3.0), 0.9, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));

    // relative time window (alpha, beta]
    CHECK(paraboloid_membership(1, pt(0.0), 1.0, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));
    CHECK_FALSE(paraboloid_membership(1, pt(0.0), 0.0, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));
    CHECK_FALSE(paraboloid_membership(1, pt(0.0), 1.1, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));

    // anchored shells translate with the anchor
    CHECK(paraboloid_membership(1, pt(0.5), 0.35, pt(0.5), 0.25, 0, Paraboloid::s_minus, 0.0, 1.0));

    // sup-norm in space at n=2: both axes count
    CHECK_FALSE(paraboloid_membership(2, pt(0.1, 3.0), 0.9, origin, 0.0, 0, Paraboloid::s_plus, 0.0, 1.0));

    // larger j shrinks the vertex offset 4^-j/8; at j=2 it is 1/128
    CHECK(paraboloid_membership(1, pt(0.0), -0.005, origin, 0.0, 2, Paraboloid::s_plus, -1.0, 1.0));
    CHECK_FALSE(paraboloid_membership(1, pt(0.0), -0.01, origin, 0.0, 2, Paraboloid::s_plus, -1.0, 1.0));
    CHECK_FALSE(paraboloid_membership(1, pt(0.5), -0.005, origin, 0.0, 2, Paraboloid::s_plus, -1.0, 1.0));

    CHECK_THROWS_AS(
        paraboloid_membership(1, pt(0.0), 0.1, origin, 0.0, -1, Paraboloid::s_plus, 0.0, 1.0),
        ContractViolation);
}

TEST_CASE("scaling maps move points as documented") {
    ScalingMap s;
    s.n = 1;
    s.x0 = pt(2.0);
    s.t0 = 5.0;
    s.r = 0.5;
    s.t_ref = 1.0;
    CHECK(s.map_x(pt(4.0))[0] == 4.0);  // 2 + 0.5*4
    CHECK(s.map_t(5.0) == 6.0);         // 5 + 0.25*(5-1)

    ScalingMap bad;
    bad.r = 0.0;
    CHECK_THROWS_AS(bad.require_valid(), ContractViolation);
}

TEST_CASE("composition chains the point maps and multiplies amplitudes") {
    CounterRng rng(91);
    for (int trial = 0; trial < 25; ++trial) {
        ScalingMap o, i;
        o.n = i.n = 2;
        for (int a = 0; a < 2; ++a) {
            o.x0[a] = rng.uniform(-1.0, 1.0);
            i.x0[a] = rng.uniform(-1.0, 1.0);
        }
        o.t0 = rng.uniform(-1.0, 1.0);
        i.t0 = rng.uniform(-1.0, 1.0);
        o.r = rng.uniform(0.25, 2.0);
        i.r = rng.uniform(0.25, 2.0);
        o.amplitude = rng.uniform(0.5, 3.0);
        i.amplitude = rng.uniform(0.5, 3.0);
        o.t_ref = rng.uniform(-1.0, 1.0);
        i.t_ref = rng.uniform(-1.0, 1.0);

        const ScalingMap c = compose(o, i);
        CHECK(c.r == doctest::Approx(i.r * o.r).epsilon(1e-15));
        CHECK(c.amplitude == doctest::Approx(o.amplitude * i.amplitude).epsilon(1e-15));

        // apply(compose(o,i), u) == apply(o, apply(i, u)) pointwise for a test field
        const auto u = [](const std::array<double, 3>& x, double t) {
            return std::sin(x[0]) + 0.5 * std::cos(x[1]) + t;
        };
        for (int s = 0; s < 4; ++s) {
            const auto x = pt(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            const double t = rng.uniform(-2.0, 2.0);
            const double via_compose = c.amplitude * u(c.map_x(x), c.map_t(t));
            const auto xi = o.map_x(x);
            const double ti = o.map_t(t);
            const double nested = o.amplitude * (i.amplitude * u(i.map_x(xi), i.map_t(ti)));
            CHECK(via_compose == doctest::Approx(nested).epsilon(1e-12));
        }
    }

    ScalingMap a, b;
    a.n = 1;
    b.n = 2;
    CHECK_THROWS_AS(compose(a, b), ContractViolation);
}

TEST_CASE("identity map resamples a grid function bitwise") {
    SpaceTimeGrid g;
    g.n = 1;
    g.box = make_catalog(1).J1;
    g.box.n = 1;
    g.nx = 17;
    g.nt = 8;
    GridFunction u(g);
    u.fill([](const std::array<double, 3>& x, double t) { return std::sin(3.0 * x[0]) + t * t; });

    const ScalingMap id;  // r = 1, amplitude = 1, origin fixed
    const GridFunction v = apply_scaling(id, u, g);
    REQUIRE(v.data().size() == u.data().size());
    for (std::size_t k = 0; k < u.data().size(); ++k) CHECK(v.data()[k] == u.data()[k]);
}

TEST_CASE("pullback grids visit exactly the source nodes") {
    SpaceTimeGrid g;
    g.n = 1;
    g.box = ParabolicCube{1, {0.0, 0.0, 0.0}, 1.0, 0.5, 0.5};  // (-1,1) x (0, 1/2]
    g.nx = 33;
    g.nt = 16;
    GridFunction u(g);
    u.fill([](const std::array<double, 3>& x, double t) { return x[0] * x[0] + 2.0 * t; });

    ScalingMap map;
    map.n = 1;
    map.r = 0.5;
    map.amplitude = 2.0;
    map.x0 = pt(0.0);
    map.t0 = 0.0;
    map.t_ref = 0.0;

    const SpaceTimeGrid back = pullback_grid(map, g);
    CHECK(back.nx == g.nx);
    CHECK(back.nt == g.nt);
    // map(back box) == source box: x in (-2,2), t in (0,2]
    CHECK(back.box.half_width == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(back.box.depth == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(map.map_t(back.box.t_top) == doctest::Approx(g.box.t_top).epsilon(1e-15));

    const GridFunction v = apply_scaling(map, u, back);
    for (int k = 0; k <= g.nt; k += 4)
        for (int i = 0; i < g.nx; i += 4)
            CHECK(v.at(k, i) == doctest::Approx(2.0 * u.at(k, i)).epsilon(1e-13));

    // mapped nodes must land inside the source hull
    ScalingMap off = map;
    off.x0 = pt(5.0);
    CHECK_THROWS_AS(apply_scaling(off, u, back), ContractViolation);
}

TEST_CASE("transformed coefficients follow the rescaling rules") {
    EquationSpec spec;
    spec.branch = Branch::minus;
    spec.pair = PucciPair{1.0, 2.0};
    spec.m = 1.0;
    spec.p = 4.0;
    spec.q = 6.0;
    spec.mu = make_constant_field(3.0);
    spec.f = ScalarField{[](std::array<double, 3> x, double t) { return 1.0 + x[0] * x[0] + t; },
                         "poly", 0.0, false};

    ScalingMap map;
    map.n = 1;
    map.r = 0.5;
    map.amplitude = 2.0;

    const EquationSpec out = transform_spec(map, spec);
    CHECK(out.branch == spec.branch);
    CHECK(out.m == spec.m);
    CHECK(out.p == spec.p);
    CHECK(out.q == spec.q);
    CHECK(out.pair.lambda == spec.pair.lambda);
    CHECK(out.pair.Lambda == spec.pair.Lambda);

    // m = 1: mu' = a^0 r^1 mu = 1.5; f' = a r^2 f(map)
    CHECK(out.mu(pt(0.3), 0.2) == doctest::Approx(1.5).epsilon(1e-15));
    const auto x = pt(0.4);
    const double t = 0.3;
    CHECK(out.f(x, t) ==
          doctest::Approx(2.0 * 0.25 * spec.f(map.map_x(x), map.map_t(t))).epsilon(1e-15));

    // m = 3: mu' = a^-2 r^-1 mu
    EquationSpec cubic = spec;
    cubic.m = 3.0;
    cubic.p = 6.0;
    cubic.q = 8.0;
    const EquationSpec out3 = transform_spec(map, cubic);
    CHECK(out3.mu(pt(0.0), 0.1) ==
          doctest::Approx(3.0 * std::pow(2.0, -2.0) * std::pow(0.5, -1.0)).epsilon(1e-14));
}

TEST_CASE("rescaled source norms obey the homogeneity identity") {
    // || f' ||_{L^p(pullback)} = a r^{2 - (n+2)/p} || f ||_{L^p(source)},
    // exact discretely because pullback nodes map onto source nodes and the
    // dual-cell weights scale by r^{n+2}.
    SpaceTimeGrid g;
    g.n = 1;
    g.box = ParabolicCube{1, {0.0, 0.0, 0.0}, 2.0, 1.0, 1.0};
    g.nx = 65;
    g.nt = 32;

    EquationSpec spec;
    spec.p = 3.0;
    spec.f = ScalarField{
        [](std::array<double, 3> x, double t) { return std::exp(-x[0] * x[0]) * (1.0 + t); },
        "gauss", 0.0, false};

    ScalingMap map;
    map.n = 1;
    map.r = 0.5;
    map.amplitude = 2.0;
    map.x0 = pt(0.25);
    map.t0 = 0.5;
    map.t_ref = 0.0;

    const SpaceTimeGrid back = pullback_grid(map, g);
    const EquationSpec out = transform_spec(map, spec);
    const double lhs = field_lq_norm(out.f, back, back.box, spec.p);
    const double rhs = map.amplitude * std::pow(map.r, 2.0 - (1.0 + 2.0) / spec.p) *
                       field_lq_norm(spec.f, g, g.box, spec.p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}
