#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pucci/oracles.hpp"
#include "pucci/rng.hpp"

using namespace pucci;

namespace {

SymMatrix random_sym(int n, CounterRng& rng, double scale = 3.0) {
    SymMatrix X(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) X.set(i, j, rng.uniform(-scale, scale));
    return X;
}

// Central finite differences of a jet-carrying solution; independent check
// that the stored derivatives describe the stored values.
void check_jet_consistency(const ExactSolution& sol, const std::array<double, 3>& x, double t) {
    const double h = 1e-5;
    const Jet jet = sol.jet(x, t);

    auto at = [&](std::array<double, 3> p, double tt) { return sol.value(p, tt); };
    const double ut_fd = (at(x, t + h) - at(x, t - h)) / (2.0 * h);
    CHECK(ut_fd == doctest::Approx(jet.ut).epsilon(5e-5).scale(1.0));

    for (int a = 0; a < sol.n; ++a) {
        std::array<double, 3> xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const double g_fd = (at(xp, t) - at(xm, t)) / (2.0 * h);
        CHECK(g_fd == doctest::Approx(jet.grad[a]).epsilon(5e-5).scale(1.0));
        const double h_fd = (at(xp, t) - 2.0 * at(x, t) + at(xm, t)) / (h * h);
        CHECK(h_fd == doctest::Approx(jet.hess(a, a)).epsilon(5e-4).scale(1.0));
    }
    if (sol.n == 2) {
        std::array<double, 3> pp = x, pm = x, mp = x, mm = x;
        pp[0] += h; pp[1] += h;
        pm[0] += h; pm[1] -= h;
        mp[0] -= h; mp[1] += h;
        mm[0] -= h; mm[1] -= h;
        const double xy_fd = (at(pp, t) - at(pm, t) - at(mp, t) + at(mm, t)) / (4.0 * h * h);
        CHECK(xy_fd == doctest::Approx(jet.hess(0, 1)).epsilon(5e-4).scale(1.0));
    }
}

}  // namespace

TEST_CASE("spectral reference agrees with the production evaluator") {
    CounterRng rng(101);
    for (int n = 1; n <= 3; ++n) {
        for (const auto& [lam, Lam] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {0.5, 5.0}}) {
            PucciPair pair{lam, Lam};
            for (int i = 0; i < 200; ++i) {
                SymMatrix X = random_sym(n, rng);
                const double scale = 1.0 + X.max_abs();
                for (Branch br : {Branch::plus, Branch::minus}) {
                    const double a = pucci_eval(pair, X, br);
                    const double b = pucci_reference(pair, X, br);
                    CHECK(std::fabs(a - b) <= 1e-10 * scale);
                }
            }
        }
    }
}

TEST_CASE("frame enumeration bounds the true value") {
    PucciPair pair{1.0, 2.0};
    CounterRng entries(202), frames(203);
    for (int n = 1; n <= 3; ++n) {
        for (int i = 0; i < 25; ++i) {
            SymMatrix X = random_sym(n, entries);
            const double scale = 1.0 + X.max_abs();
            const double vp = pucci_eval(pair, X, Branch::plus);
            const double bp = pucci_bruteforce(pair, X, Branch::plus, 800, frames);
            CHECK(bp <= vp + 1e-9 * scale);  // sup over frames: lower bound
            const double vm = pucci_eval(pair, X, Branch::minus);
            const double bm = pucci_bruteforce(pair, X, Branch::minus, 800, frames);
            CHECK(bm >= vm - 1e-9 * scale);  // inf over frames: upper bound
            if (n == 1) {
                // only one frame exists
                CHECK(bp == doctest::Approx(vp).epsilon(1e-14));
                CHECK(bm == doctest::Approx(vm).epsilon(1e-14));
            }
            if (n == 2) {
                // a dense 1-parameter angle sweep gets very close
                CHECK(std::fabs(bp - vp) <= 2e-4 * scale * (pair.Lambda - pair.lambda + 1.0));
            }
        }
    }
}

TEST_CASE("decaying sine solves its equation exactly") {
    PucciPair pair{1.0, 2.0};
    for (int n = 1; n <= 2; ++n) {
        for (bool convex : {false, true}) {
            for (Branch br : {Branch::plus, Branch::minus}) {
                ExactSolution sol = make_decaying_sine(n, pair, br, 1.0, convex);
                EquationSpec spec;
                spec.branch = br;
                spec.pair = pair;
                CounterRng rng(31);
                for (int i = 0; i < 40; ++i) {
                    std::array<double, 3> x{rng.uniform(-9.5, 9.5),
                                            n == 2 ? rng.uniform(-9.5, 9.5) : 0.0, 0.0};
                    const double t = rng.uniform(0.1, 10.0);
                    CHECK(std::fabs(exact_residual(sol, spec, x, t)) <= 1e-13);
                }
            }
        }
    }
}

TEST_CASE("decaying sine jet is self-consistent") {
    PucciPair pair{1.0, 2.0};
    ExactSolution sol = make_decaying_sine(2, pair, Branch::plus);
    check_jet_consistency(sol, {1.3, -2.1, 0.0}, 0.7);
    check_jet_consistency(sol, {-4.0, 6.5, 0.0}, 3.0);
}

TEST_CASE("affine solutions") {
    ExactSolution sol = make_affine(2, 0.5, {1.0, -2.0, 0.0}, 0.25);
    // u_t = 0.25, D^2 u = 0: canonical source f = -s * 0.25 balances it.
    for (Branch br : {Branch::plus, Branch::minus}) {
        EquationSpec spec;
        spec.branch = br;
        spec.pair = PucciPair{1.0, 3.0};
        spec.f = make_constant_field(-branch_sign(br) * 0.25);
        CHECK(std::fabs(exact_residual(sol, spec, {0.3, 0.4, 0.0}, 1.0)) <= 1e-15);
    }
    CHECK(sol.value({1.0, 1.0, 0.0}, 2.0) == doctest::Approx(0.5 + 1.0 - 2.0 + 0.5));
    check_jet_consistency(sol, {0.2, 0.9, 0.0}, 1.5);
}

TEST_CASE("quadratic solutions have constant Hessian") {
    ExactSolution sol = make_quadratic(2, {0.25, -0.5, 0.0}, 0.0);
    Jet j = sol.jet({1.0, 2.0, 0.0}, 0.5);
    CHECK(j.hess(0, 0) == doctest::Approx(0.5));
    CHECK(j.hess(1, 1) == doctest::Approx(-1.0));
    CHECK(j.hess(0, 1) == 0.0);
    check_jet_consistency(sol, {0.4, -0.7, 0.0}, 0.3);

    // matched constant source turns it into an exact steady solution
    EquationSpec spec;
    spec.branch = Branch::minus;
    spec.pair = PucciPair{1.0, 2.0};
    const double pv = pucci_eval(spec.pair, SymMatrix::diag(2, 0.5, -1.0), Branch::minus);
    spec.f = make_constant_field(-branch_sign(Branch::minus) * pv);
    CHECK(std::fabs(exact_residual(sol, spec, {1.0, -1.0, 0.0}, 2.0)) <= 1e-14);
}

TEST_CASE("heat kernel solves the isotropic equation") {
    for (int n = 1; n <= 2; ++n) {
        const double kappa = 0.7;
        ExactSolution sol = make_heat_kernel(n, kappa, 1.0);
        EquationSpec spec;
        spec.branch = Branch::plus;
        spec.pair = PucciPair{kappa, kappa};
        CounterRng rng(77);
        for (int i = 0; i < 40; ++i) {
            std::array<double, 3> x{rng.uniform(-3.0, 3.0), n == 2 ? rng.uniform(-3.0, 3.0) : 0.0,
                                    0.0};
            const double t = rng.uniform(0.0, 5.0);
            CHECK(std::fabs(exact_residual(sol, spec, x, t)) <= 1e-12);
        }
        check_jet_consistency(sol, {0.9, n == 2 ? -0.4 : 0.0, 0.0}, 0.8);
    }
}

TEST_CASE("boundary callback samples the solution") {
    ExactSolution sol = make_affine(1, 1.0, {2.0, 0.0, 0.0}, 0.0);
    BoundaryFn b = sol.boundary();
    CHECK(b({0.5, 0.0, 0.0}, 3.0) == doctest::Approx(sol.value({0.5, 0.0, 0.0}, 3.0)));
}
