#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pucci/discrete_set.hpp"
#include "pucci/geometry.hpp"
#include "pucci/rational.hpp"
#include "pucci/rng.hpp"

namespace pucci {

/// Parameters of the covering argument: density threshold sigma (exact
/// rational in (0,1)), stack height m >= 1, and the deepest level selection
/// may descend to (capped by the set resolution).
struct CzParams {
    Rational sigma{1, 2};
    int m = 1;
    int max_level = 8;

    void require_valid() const;
};

struct SelectedCube {
    DyadicCube cube;
    std::int64_t cells_in_set = 0;   // |A cap L| in resolution cells
    std::int64_t cells_total = 0;    // |L| in resolution cells
};

/// Maximal dense cubes: every cube L of level >= 2 with stack inside the
/// ambient box, |A cap L| > sigma |L| exactly, and no eligible dense strict
/// ancestor. Level-1 cubes have no predecessor, are never eligible, and are
/// always descended. Deterministic traversal order (time-major children).
std::vector<SelectedCube> cz_select(const DiscreteSet& A, const CzParams& params);

struct CzVerdict {
    bool subset_ok = false;       // A subset of B
    bool hyp_root = false;        // (i)  |A| <= sigma |K1|
    bool hyp_stack = false;       // (ii) every dense eligible L has its stack (clipped to K1) inside B
    bool conclusion = false;      //      |A| <= sigma (m+1)/m |B|
    bool hypotheses() const { return subset_ok && hyp_root && hyp_stack; }

    std::int64_t count_a = 0;
    std::int64_t count_b = 0;
    std::int64_t total_cells = 0;
    std::int64_t dense_cubes_checked = 0;
    std::string measure_a, measure_b;   // exact "count * 2^-e" strings
    std::string witness;                // first violated hypothesis / cube, empty if all hold
    std::vector<SelectedCube> selected;
};

/// Exact verdict on a discrete instance. Hypothesis (ii) is checked for every
/// dense eligible cube down to min(max_level, resolution) - a superset of the
/// maximal family - because the covering lemma quantifies over all of C(m).
/// Cells of a stack above the top of K1 are ignored (ambient-box convention).
CzVerdict cz_verdict(const DiscreteSet& A, const DiscreteSet& B, const CzParams& params);

/// Smallest superset of A satisfying hypothesis (ii): density is measured
/// against A (fixed), so one pass suffices: B = A union the K1-clipped stacks
/// of every dense eligible cube.
DiscreteSet cz_close(const DiscreteSet& A, const CzParams& params);

/// Seeded random instance: A = uniform cells at the given density, trimmed to
/// satisfy hypothesis (i); B = cz_close(A).
struct CzInstance {
    DiscreteSet A;
    DiscreteSet B;
};
CzInstance make_random_instance(int n, int resolution, const CzParams& params,
                                double fill, CounterRng& rng);

}  // namespace pucci
