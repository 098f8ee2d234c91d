#include "pucci/cz.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace pucci {

void CzParams::require_valid() const {
    if (!(sigma.num > 0 && rational_lt(sigma, Rational{1, 1})))
        throw ContractViolation("CzParams: sigma must lie in (0,1)");
    if (m < 1) throw ContractViolation("CzParams: m must be >= 1");
    if (max_level < 2) throw ContractViolation("CzParams: max_level must be >= 2");
}

namespace {

// |A cap L| > sigma |L|, exactly.
bool dense(const DiscreteSet& A, const DyadicCube& cube, const Rational& sigma,
           std::int64_t* count_out = nullptr, std::int64_t* cells_out = nullptr) {
    const int shift = A.resolution() - cube.level;
    const std::int64_t cells = std::int64_t{1} << (cube.n * shift + 2 * shift);
    const std::int64_t count = A.count_cube(cube);
    if (count_out) *count_out = count;
    if (cells_out) *cells_out = cells;
    return count_exceeds_fraction(count, sigma, cells);
}

bool eligible(const DyadicCube& cube, int m) {
    return cube.has_predecessor() && stack_fits_ambient(cube, m);
}

// Resolution-cell ranges covered by the stacked predecessor, clipped to K1.
// Returns false when the whole stack lies above K1.
struct StackRange {
    std::int64_t t0, t1;                 // time slabs [t0, t1)
    std::array<std::int64_t, 2> xlo{}, xhi{};
};

bool stack_cells(const DiscreteSet& A, const DyadicCube& cube, int m, StackRange& out) {
    const DyadicCube pred = cube.predecessor();
    const int shift = A.resolution() - pred.level;
    const std::int64_t span = std::int64_t{1} << shift;
    const std::int64_t tspan = std::int64_t{1} << (2 * shift);
    out.t0 = (pred.tj + 1) * tspan;
    out.t1 = (pred.tj + 1 + m) * tspan;
    const std::int64_t cap = A.time_cells();
    if (out.t0 >= cap) return false;
    out.t1 = std::min(out.t1, cap);
    for (int i = 0; i < cube.n; ++i) {
        out.xlo[static_cast<std::size_t>(i)] = pred.sx[i] * span;
        out.xhi[static_cast<std::size_t>(i)] = (pred.sx[i] + 1) * span;
    }
    return true;
}

// Visit rows of a stack range; f(base+lo, base+hi) gets contiguous index runs.
template <typename F>
void for_stack_rows(const DiscreteSet& S, const StackRange& r, F&& f) {
    const std::int64_t side = S.side_cells();
    if (S.n() == 1) {
        for (std::int64_t t = r.t0; t < r.t1; ++t) {
            const std::int64_t base = t * side;
            if (!f(base + r.xlo[0], base + r.xhi[0])) return;
        }
    } else {
        for (std::int64_t t = r.t0; t < r.t1; ++t) {
            for (std::int64_t a0 = r.xlo[0]; a0 < r.xhi[0]; ++a0) {
                const std::int64_t base = (t * side + a0) * side;
                if (!f(base + r.xlo[1], base + r.xhi[1])) return;
            }
        }
    }
}

void select_rec(const DiscreteSet& A, const CzParams& p, const DyadicCube& cube,
                std::vector<SelectedCube>& out) {
    std::int64_t count = 0, cells = 0;
    const bool is_dense = dense(A, cube, p.sigma, &count, &cells);
    if (count == 0) return;  // nothing below either
    if (is_dense && eligible(cube, p.m)) {
        out.push_back({cube, count, cells});
        return;  // maximality: children of a selected cube are not descended
    }
    if (cube.level >= std::min(p.max_level, A.resolution())) return;
    for (const DyadicCube& child : cube.children()) select_rec(A, p, child, out);
}

template <typename F>
void dense_rec(const DiscreteSet& A, const CzParams& p, const DyadicCube& cube, F&& f) {
    std::int64_t count = 0, cells = 0;
    const bool is_dense = dense(A, cube, p.sigma, &count, &cells);
    if (count == 0) return;
    if (is_dense && eligible(cube, p.m)) f(cube, count, cells);
    if (cube.level >= std::min(p.max_level, A.resolution())) return;
    for (const DyadicCube& child : cube.children()) dense_rec(A, p, child, f);
}

// All 2^(n+2) siblings share a predecessor and hence a stack; checking each
// stack once keeps the verdict linear in the number of distinct predecessors.
std::uint64_t pred_key(const DyadicCube& pred) {
    return (static_cast<std::uint64_t>(pred.level) << 56) |
           (static_cast<std::uint64_t>(pred.sx[0]) << 44) |
           (static_cast<std::uint64_t>(pred.sx[1]) << 32) |
           static_cast<std::uint64_t>(pred.tj);
}

std::string cube_str(const DyadicCube& c) {
    std::ostringstream os;
    os << "level=" << c.level << " sx=[" << c.sx[0];
    if (c.n == 2) os << "," << c.sx[1];
    os << "] tj=" << c.tj;
    return os.str();
}

}  // namespace

std::vector<SelectedCube> cz_select(const DiscreteSet& A, const CzParams& params) {
    params.require_valid();
    std::vector<SelectedCube> out;
    for (const DyadicCube& top : level1_cubes(A.n())) select_rec(A, params, top, out);
    return out;
}

DiscreteSet cz_close(const DiscreteSet& A, const CzParams& params) {
    params.require_valid();
    DiscreteSet B = A;
    std::unordered_set<std::uint64_t> done;
    for (const DyadicCube& top : level1_cubes(A.n())) {
        dense_rec(A, params, top, [&](const DyadicCube& cube, std::int64_t, std::int64_t) {
            if (!done.insert(pred_key(cube.predecessor())).second) return;
            StackRange r;
            if (!stack_cells(A, cube, params.m, r)) return;
            for_stack_rows(B, r, [&](std::int64_t lo, std::int64_t hi) {
                B.set_bits(lo, hi);
                return true;
            });
        });
    }
    return B;
}

CzVerdict cz_verdict(const DiscreteSet& A, const DiscreteSet& B, const CzParams& params) {
    params.require_valid();
    if (A.n() != B.n() || A.resolution() != B.resolution())
        throw ContractViolation("cz_verdict: A and B must share resolution");
    CzVerdict v;
    v.count_a = A.count();
    v.count_b = B.count();
    v.total_cells = A.total_cells();
    v.measure_a = A.measure_string(v.count_a);
    v.measure_b = B.measure_string(v.count_b);
    v.selected = cz_select(A, params);

    v.subset_ok = A.is_subset_of(B);
    if (!v.subset_ok) v.witness = "A is not a subset of B";

    // (i) |A| <= sigma |K1|.
    v.hyp_root = counts_leq_scaled(v.count_a, 1, params.sigma, v.total_cells, 1);
    if (!v.hyp_root && v.witness.empty())
        v.witness = "hypothesis (i): |A| = " + v.measure_a + " exceeds sigma |K1|";

    // (ii) over every dense eligible cube, not only the maximal ones. Siblings
    // share their predecessor's stack, so each distinct stack is scanned once.
    v.hyp_stack = true;
    std::unordered_set<std::uint64_t> seen;
    for (const DyadicCube& top : level1_cubes(A.n())) {
        dense_rec(A, params, top, [&](const DyadicCube& cube, std::int64_t, std::int64_t) {
            ++v.dense_cubes_checked;
            if (!v.hyp_stack) return;
            if (!seen.insert(pred_key(cube.predecessor())).second) return;
            StackRange r;
            if (!stack_cells(A, cube, params.m, r)) return;  // stack fully above K1: ignored
            for_stack_rows(B, r, [&](std::int64_t lo, std::int64_t hi) {
                const std::int64_t miss = B.first_unset(lo, hi);
                if (miss >= 0) {
                    v.hyp_stack = false;
                    if (v.witness.empty())
                        v.witness = "hypothesis (ii): stack of dense cube (" + cube_str(cube) +
                                    ") misses B at cell index " + std::to_string(miss);
                    return false;
                }
                return true;
            });
        });
    }

    // Conclusion |A| <= sigma (m+1)/m |B|  <=>  m den |A| <= (m+1) num |B|.
    v.conclusion = counts_leq_scaled(v.count_a, params.m, params.sigma, v.count_b, params.m + 1);
    return v;
}

CzInstance make_random_instance(int n, int resolution, const CzParams& params,
                                double fill, CounterRng& rng) {
    params.require_valid();
    if (!(fill > 0.0 && fill < 1.0))
        throw ContractViolation("make_random_instance: fill must lie in (0,1)");
    DiscreteSet A(n, resolution);
    const std::int64_t total = A.total_cells();
    for (std::int64_t i = 0; i < total; ++i)
        if (rng.unit() < fill) A.set(i, true);

    // Trim until hypothesis (i) holds, clearing uniformly random set cells so
    // A stays spread out. A contiguous trim would carve out a time slab and
    // concentrate A; stacks of a high slab get clipped at the top of K1 and
    // the covering bound genuinely fails for such concentrated sets.
    const __int128 cap128 = static_cast<__int128>(params.sigma.num) * total / params.sigma.den;
    const std::int64_t cap = static_cast<std::int64_t>(cap128);
    std::int64_t excess = A.count() - cap;
    while (excess > 0) {
        const std::int64_t i = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
        if (A.get(i)) {
            A.set(i, false);
            --excess;
        }
    }
    DiscreteSet B = cz_close(A, params);
    return {std::move(A), std::move(B)};
}

}  // namespace pucci
