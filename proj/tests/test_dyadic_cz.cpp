#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "pucci/cz.hpp"
#include "pucci/discrete_set.hpp"
#include "pucci/rational.hpp"
#include "pucci/rng.hpp"

using namespace pucci;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

// A = every resolution cell of one dyadic cube.
void fill_cube(DiscreteSet& A, const DyadicCube& cube) {
    const int shift = A.resolution() - cube.level;
    const std::int64_t span = std::int64_t{1} << shift;
    const std::int64_t tspan = std::int64_t{1} << (2 * shift);
    for (std::int64_t t = cube.tj * tspan; t < (cube.tj + 1) * tspan; ++t)
        for (std::int64_t a0 = cube.sx[0] * span; a0 < (cube.sx[0] + 1) * span; ++a0) {
            if (A.n() == 1) {
                A.set(A.cell_index(a0, 0, t), true);
            } else {
                for (std::int64_t a1 = cube.sx[1] * span; a1 < (cube.sx[1] + 1) * span; ++a1)
                    A.set(A.cell_index(a0, a1, t), true);
            }
        }
}

}  // namespace

TEST_CASE("rational literals parse exactly") {
    CHECK(Rational::parse("3/10") == Rational(3, 10));
    CHECK(Rational::parse("0.3") == Rational(3, 10));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("1.50") == Rational(3, 2));
    CHECK(Rational::parse("1") == Rational(1, 1));
    CHECK(Rational::parse("-1/2") == Rational(-1, 2));
    CHECK(Rational::parse(" 2/4 ") == Rational(1, 2));  // normalized
    CHECK(Rational::parse("7").to_double() == 7.0);

    for (const char* bad : {"", "x", "1/0", "1..2", "3/10 junk", "1234567890123456"}) {
        CAPTURE(bad);
        CHECK_THROWS_WITH_AS(Rational::parse(bad), doctest::Contains("cannot read"),
                             ContractViolation);
    }
}

TEST_CASE("rational comparisons are exact at ties") {
    // 0.333333333333333 < 1/3 though the doubles coincide
    const Rational close = Rational::parse("0.333333333333333");
    const Rational third(1, 3);
    CHECK(close.to_double() == doctest::Approx(third.to_double()).epsilon(1e-15));
    CHECK(rational_lt(close, third));
    CHECK_FALSE(rational_lt(third, close));

    // density threshold: exactly sigma |L| is NOT dense (strict >)
    CHECK_FALSE(count_exceeds_fraction(3, Rational(3, 10), 10));
    CHECK(count_exceeds_fraction(4, Rational(3, 10), 10));

    // conclusion comparator: equality passes (<=)
    CHECK(counts_leq_scaled(3, 1, Rational(3, 10), 10, 1));
    CHECK_FALSE(counts_leq_scaled(4, 1, Rational(3, 10), 10, 1));

    CHECK_THROWS_AS(Rational(1, 0), ContractViolation);
}

TEST_CASE("discrete sets count cells over the dyadic lattice") {
    DiscreteSet A(1, 3);
    CHECK(A.side_cells() == 8);
    CHECK(A.time_cells() == 64);
    CHECK(A.total_cells() == 512);
    // cell measure 2^-(n(K-1)+2K) recovers |K1| = 2
    CHECK(A.cell_measure() * static_cast<double>(A.total_cells()) == 2.0);
    CHECK(A.measure_string(3) == "3 * 2^-8");

    CHECK(A.cell_index(5, 0, 7) == 7 * 8 + 5);
    A.set(A.cell_index(5, 0, 7), true);
    CHECK(A.get(A.cell_index(5, 0, 7)));
    CHECK(A.count() == 1);
    A.set(A.cell_index(5, 0, 7), false);
    CHECK(A.count() == 0);

    // ranges across word boundaries
    A.set_bits(60, 70);
    CHECK(A.count() == 10);
    CHECK(A.count_bits(0, 128) == 10);
    CHECK(A.all_bits(60, 70));
    CHECK_FALSE(A.all_bits(59, 70));
    CHECK(A.first_unset(60, 128) == 70);
    CHECK(A.first_unset(60, 70) == -1);

    DiscreteSet B(2, 3);
    CHECK(B.total_cells() == 64 * 64);
    CHECK(B.cell_index(2, 3, 5) == (5 * 8 + 2) * 8 + 3);

    CHECK_THROWS_AS(DiscreteSet(3, 3), ContractViolation);
    CHECK_THROWS_AS(DiscreteSet(1, 1), ContractViolation);
    CHECK_THROWS_AS(DiscreteSet(1, 11), ContractViolation);
}

TEST_CASE("count_cube agrees with direct enumeration") {
    DiscreteSet A(1, 4);
    DyadicCube L;
    L.level = 2;
    L.sx = {1, 0, 0};
    L.tj = 3;
    fill_cube(A, L);
    // level-2 cube at K=4: shift 2, 2^2 * 4^2 = 64 cells
    CHECK(A.count() == 64);
    CHECK(A.count_cube(L) == 64);

    DyadicCube parent = L.predecessor();
    CHECK(A.count_cube(parent) == 64);
    DyadicCube elsewhere;
    elsewhere.level = 2;
    elsewhere.sx = {0, 0, 0};
    elsewhere.tj = 0;
    CHECK(A.count_cube(elsewhere) == 0);

    // level-3 children at K=4: shift 1, 2^1 * 4^1 = 8 cells each
    for (const DyadicCube& child : L.children())
        CHECK(A.count_cube(child) == 8);
}

TEST_CASE("rle round trip is lossless") {
    CounterRng rng(77);
    DiscreteSet A(1, 5);
    for (std::int64_t i = 0; i < A.total_cells(); ++i)
        if (rng.unit() < 0.37) A.set(i, true);
    const auto path = temp_file("cz_roundtrip.pcz");
    A.export_rle(path);
    const DiscreteSet back = DiscreteSet::import_rle(path);
    CHECK(back == A);

    DiscreteSet empty(2, 3);
    empty.export_rle(path);
    CHECK(DiscreteSet::import_rle(path) == empty);

    DiscreteSet full(1, 3);
    full.set_bits(0, full.total_cells());
    full.export_rle(path);
    CHECK(DiscreteSet::import_rle(path) == full);
    std::filesystem::remove(path);
}

TEST_CASE("selection returns the maximal dense eligible cubes") {
    DiscreteSet A(1, 4);
    DyadicCube L;
    L.level = 2;
    L.sx = {0, 0, 0};
    L.tj = 0;
    fill_cube(A, L);

    CzParams p;
    p.sigma = Rational(1, 2);
    p.m = 1;
    p.max_level = 8;
    const auto sel = cz_select(A, p);
    // L has density 1; its level-1 ancestor only 1/8; children are shadowed
    REQUIRE(sel.size() == 1);
    CHECK(sel[0].cube == L);
    CHECK(sel[0].cells_in_set == 64);
    CHECK(sel[0].cells_total == 64);

    // a cube at exactly sigma density is not selected (strict threshold);
    // cap the level so the half-filled cells are not picked up individually
    DiscreteSet H(1, 4);
    const std::int64_t half = 32;  // half of L's 64 cells
    std::int64_t placed = 0;
    for (std::int64_t t = 0; t < 16 && placed < half; ++t)
        for (std::int64_t a0 = 0; a0 < 4 && placed < half; ++a0, ++placed)
            H.set(H.cell_index(a0, 0, t), true);
    CzParams shallow = p;
    shallow.max_level = 2;
    CHECK(cz_select(H, shallow).empty());
    CHECK_FALSE(cz_select(H, p).empty());  // at full depth the single cells are dense
}

TEST_CASE("verdict on a single dense cube instance") {
    DiscreteSet A(1, 4);
    DyadicCube L;
    L.level = 2;
    L.sx = {0, 0, 0};
    L.tj = 0;
    fill_cube(A, L);

    CzParams p;
    p.sigma = Rational(1, 2);
    p.m = 1;
    p.max_level = 2;  // only level-2 cubes are inspected
    const DiscreteSet B = cz_close(A, p);
    // B = A (64 cells) plus one stacked copy of the level-1 predecessor (512)
    CHECK(B.count() == 64 + 512);

    const CzVerdict v = cz_verdict(A, B, p);
    CHECK(v.subset_ok);
    CHECK(v.hyp_root);
    CHECK(v.hyp_stack);
    CHECK(v.hypotheses());
    CHECK(v.conclusion);
    CHECK(v.witness.empty());
    CHECK(v.count_a == 64);
    CHECK(v.count_b == 576);
    CHECK(v.dense_cubes_checked == 1);
    CHECK(v.measure_a == "64 * 2^-11");
    REQUIRE(v.selected.size() == 1);
    CHECK(v.selected[0].cube == L);
}

TEST_CASE("verdict flags each broken hypothesis") {
    DiscreteSet A(1, 4);
    DyadicCube L;
    L.level = 2;
    L.sx = {0, 0, 0};
    L.tj = 0;
    fill_cube(A, L);
    CzParams p;
    p.sigma = Rational(1, 2);
    p.m = 1;
    p.max_level = 2;
    const DiscreteSet B = cz_close(A, p);

    SUBCASE("a missing stack cell breaks hypothesis (ii)") {
        DiscreteSet holed = B;
        // first stacked row lives at time cell 64 (level-1 predecessor top)
        const std::int64_t idx = holed.cell_index(3, 0, 70);
        REQUIRE(holed.get(idx));
        REQUIRE_FALSE(A.get(idx));  // keep A subset of B
        holed.set(idx, false);
        const CzVerdict v = cz_verdict(A, holed, p);
        CHECK(v.subset_ok);
        CHECK_FALSE(v.hyp_stack);
        CHECK_FALSE(v.hypotheses());
        CHECK(v.witness.find("hypothesis (ii)") != std::string::npos);
    }

    SUBCASE("a missing A cell breaks the subset hypothesis") {
        DiscreteSet holed = B;
        holed.set(holed.cell_index(0, 0, 0), false);
        const CzVerdict v = cz_verdict(A, holed, p);
        CHECK_FALSE(v.subset_ok);
        CHECK(v.witness.find("subset") != std::string::npos);
    }

    SUBCASE("an overfull A breaks the root hypothesis") {
        DiscreteSet big(1, 4);
        big.set_bits(0, 3000);  // 3000 > 2048 = half of 4096
        const CzVerdict v = cz_verdict(big, big, p);
        CHECK_FALSE(v.hyp_root);
        CHECK(v.witness.find("hypothesis (i)") != std::string::npos);
    }
}

TEST_CASE("empty instance passes trivially") {
    DiscreteSet A(2, 3);
    CzParams p;
    const CzVerdict v = cz_verdict(A, A, p);
    CHECK(v.hypotheses());
    CHECK(v.conclusion);
    CHECK(v.dense_cubes_checked == 0);
    CHECK(cz_select(A, p).empty());
}

TEST_CASE("random instances satisfy the covering bound") {
    CounterRng rng(4242);
    for (int n : {1, 2}) {
        for (int m : {1, 2, 36}) {
            for (const char* sig : {"3/10", "1/2"}) {
                CAPTURE(n);
                CAPTURE(m);
                CAPTURE(sig);
                CzParams p;
                p.sigma = Rational::parse(sig);
                p.m = m;
                p.max_level = 6;
                // resolution floor: the conclusion's slack sigma(m+1)/m must
                // exceed the bottom time slab no stack can reach, which needs
                // fine time rows once m is large
                const int K = n == 1 ? 5 : 4;
                const CzInstance inst = make_random_instance(n, K, p, 0.4, rng);
                const CzVerdict v = cz_verdict(inst.A, inst.B, p);
                CHECK(v.hypotheses());
                CHECK(v.conclusion);
                CHECK(v.witness.empty());
                // conclusion with slack measured exactly:
                // m * den * |A| <= (m+1) * num * |B|
                const __int128 lhs = static_cast<__int128>(v.count_a) * m * p.sigma.den;
                const __int128 rhs = static_cast<__int128>(v.count_b) * (m + 1) * p.sigma.num;
                CHECK(lhs <= rhs);
            }
        }
    }
}

TEST_CASE("parameter guards") {
    CzParams p;
    p.sigma = Rational(0, 1);
    CHECK_THROWS_AS(p.require_valid(), ContractViolation);
    p.sigma = Rational(1, 1);
    CHECK_THROWS_AS(p.require_valid(), ContractViolation);
    p.sigma = Rational(1, 2);
    p.m = 0;
    CHECK_THROWS_AS(p.require_valid(), ContractViolation);
    p.m = 1;
    p.max_level = 1;
    CHECK_THROWS_AS(p.require_valid(), ContractViolation);

    DiscreteSet A(1, 3), B(1, 4);
    CzParams ok;
    CHECK_THROWS_AS(cz_verdict(A, B, ok), ContractViolation);

    CounterRng rng(1);
    CHECK_THROWS_AS(make_random_instance(1, 3, ok, 0.0, rng), ContractViolation);
}
