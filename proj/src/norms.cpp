#include "pucci/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pucci {

namespace {

// Overlap of [c - w/2, c + w/2] with [lo, hi].
double overlap(double c, double w, double lo, double hi) {
    const double a = std::max(c - 0.5 * w, lo);
    const double b = std::min(c + 0.5 * w, hi);
    return b > a ? b - a : 0.0;
}

struct Weights {
    std::vector<double> wt;               // per time level
    std::array<std::vector<double>, 2> wx;  // per axis, per node
    int k0, k1;                            // time level range with nonzero weight
    std::array<int, 2> i0{}, i1{};         // node ranges per axis
    bool empty;
};

Weights make_weights(const SpaceTimeGrid& g, const ParabolicCube& region) {
    g.require_valid();
    region.require_valid();
    if (region.n != g.n) throw ContractViolation("norms: region dimension mismatch");
    Weights w;
    w.wt.assign(static_cast<std::size_t>(g.nt) + 1, 0.0);
    const double dt = g.dt();
    for (int k = 0; k <= g.nt; ++k)
        w.wt[k] = overlap(g.t(k), dt, region.t_bottom(), region.t_top);
    for (int axis = 0; axis < g.n; ++axis) {
        auto& wx = w.wx[axis];
        wx.assign(static_cast<std::size_t>(g.nx), 0.0);
        for (int i = 0; i < g.nx; ++i)
            wx[i] = overlap(g.x(i, axis), g.h(), region.lo(axis), region.hi(axis));
    }
    auto span = [](const std::vector<double>& v, int& a, int& b) {
        a = 0;
        while (a < static_cast<int>(v.size()) && v[a] == 0.0) ++a;
        b = static_cast<int>(v.size()) - 1;
        while (b >= 0 && v[b] == 0.0) --b;
    };
    span(w.wt, w.k0, w.k1);
    for (int axis = 0; axis < g.n; ++axis) span(w.wx[axis], w.i0[axis], w.i1[axis]);
    w.empty = w.k0 > w.k1;
    for (int axis = 0; axis < g.n; ++axis) w.empty = w.empty || w.i0[axis] > w.i1[axis];
    return w;
}

template <typename F>
double weighted_sum(const GridFunction& u, const ParabolicCube& region, F&& value) {
    const SpaceTimeGrid& g = u.grid();
    const Weights w = make_weights(g, region);
    if (w.empty) throw ContractViolation("norms: region does not meet the grid box");
    double total = 0.0;
    for (int k = w.k0; k <= w.k1; ++k) {
        double level = 0.0;
        for (int i = w.i0[0]; i <= w.i1[0]; ++i) {
            if (g.n == 1) {
                level += w.wx[0][i] * value(k, i, 0);
            } else {
                double row = 0.0;
                for (int j = w.i0[1]; j <= w.i1[1]; ++j) row += w.wx[1][j] * value(k, i, j);
                level += w.wx[0][i] * row;
            }
        }
        total += w.wt[k] * level;
    }
    return total;
}

}  // namespace

double region_measure(const SpaceTimeGrid& g, const ParabolicCube& region) {
    const Weights w = make_weights(g, region);
    if (w.empty) throw ContractViolation("norms: region does not meet the grid box");
    auto sum = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    };
    double m = sum(w.wt) * sum(w.wx[0]);
    if (g.n == 2) m *= sum(w.wx[1]);
    return m;
}

double lp_norm(const GridFunction& u, const ParabolicCube& region, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ContractViolation("lp_norm: p must be finite positive");
    const double s = weighted_sum(u, region, [&](int k, int i, int j) {
        return std::pow(std::fabs(u.at(k, i, j)), p);
    });
    return std::pow(s, 1.0 / p);
}

double lp_norm_positive_part(const GridFunction& u, const ParabolicCube& region, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ContractViolation("lp_norm: p must be finite positive");
    const double s = weighted_sum(u, region, [&](int k, int i, int j) {
        const double v = u.at(k, i, j);
        return v > 0.0 ? std::pow(v, p) : 0.0;
    });
    return std::pow(s, 1.0 / p);
}

namespace {

template <typename Reduce>
double extreme_over(const GridFunction& u, const ParabolicCube& region, double init, Reduce&& r) {
    const SpaceTimeGrid& g = u.grid();
    double best = init;
    bool found = false;
    for (int k = 0; k <= g.nt; ++k) {
        const double t = g.t(k);
        if (!(t > region.t_bottom() && t <= region.t_top)) continue;
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < (g.n == 2 ? g.nx : 1); ++j) {
                const auto p = g.point(i, j);
                bool inside = true;
                for (int a = 0; a < g.n; ++a)
                    inside = inside && p[a] > region.lo(a) && p[a] < region.hi(a);
                if (!inside) continue;
                best = r(best, u.at(k, i, j));
                found = true;
            }
        }
    }
    if (!found) throw ContractViolation("sup/inf: no grid node inside region");
    return best;
}

}  // namespace

double sup_over(const GridFunction& u, const ParabolicCube& region) {
    return extreme_over(u, region, -std::numeric_limits<double>::infinity(),
                        [](double a, double b) { return std::max(a, b); });
}

double inf_over(const GridFunction& u, const ParabolicCube& region) {
    return extreme_over(u, region, std::numeric_limits<double>::infinity(),
                        [](double a, double b) { return std::min(a, b); });
}

double superlevel_measure(const GridFunction& u, const ParabolicCube& region, double s) {
    return weighted_sum(u, region,
                        [&](int k, int i, int j) { return u.at(k, i, j) >= s ? 1.0 : 0.0; });
}

namespace {

// Central differences in the interior, one-sided on faces; index clamping
// keeps every stencil inside the grid.
double d_t(const GridFunction& u, int k, int i, int j) {
    const int nt = u.grid().nt;
    const double dt = u.grid().dt();
    if (k == 0) return (u.at(1, i, j) - u.at(0, i, j)) / dt;
    if (k == nt) return (u.at(nt, i, j) - u.at(nt - 1, i, j)) / dt;
    return (u.at(k + 1, i, j) - u.at(k - 1, i, j)) / (2.0 * dt);
}

double d_x(const GridFunction& u, int axis, int k, int i, int j) {
    const int nx = u.grid().nx;
    const double h = u.grid().h();
    const int c = axis == 0 ? i : j;
    auto at_off = [&](int o) { return axis == 0 ? u.at(k, i + o, j) : u.at(k, i, j + o); };
    if (c == 0) return (at_off(1) - at_off(0)) / h;
    if (c == nx - 1) return (at_off(0) - at_off(-1)) / h;
    return (at_off(1) - at_off(-1)) / (2.0 * h);
}

double d_xx(const GridFunction& u, int axis, int k, int i, int j) {
    const int nx = u.grid().nx;
    const double h = u.grid().h();
    int c = axis == 0 ? i : j;
    int shift = 0;
    if (c == 0) shift = 1;
    if (c == nx - 1) shift = -1;
    auto at_off = [&](int o) {
        o += shift;
        return axis == 0 ? u.at(k, i + o, j) : u.at(k, i, j + o);
    };
    return (at_off(1) - 2.0 * at_off(0) + at_off(-1)) / (h * h);
}

double d_xy(const GridFunction& u, int k, int i, int j) {
    const int nx = u.grid().nx;
    const double h = u.grid().h();
    const int si = i == 0 ? 1 : (i == nx - 1 ? -1 : 0);
    const int sj = j == 0 ? 1 : (j == nx - 1 ? -1 : 0);
    auto at_off = [&](int oi, int oj) { return u.at(k, i + si + oi, j + sj + oj); };
    return (at_off(1, 1) - at_off(1, -1) - at_off(-1, 1) + at_off(-1, -1)) / (4.0 * h * h);
}

}  // namespace

double w21p_norm(const GridFunction& u, const ParabolicCube& region, double p) {
    double total = lp_norm(u, region, p);
    auto term = [&](auto&& deriv) {
        const double s = weighted_sum(u, region, [&](int k, int i, int j) {
            return std::pow(std::fabs(deriv(k, i, j)), p);
        });
        return std::pow(s, 1.0 / p);
    };
    total += term([&](int k, int i, int j) { return d_t(u, k, i, j); });
    for (int axis = 0; axis < u.grid().n; ++axis)
        total += term([&](int k, int i, int j) { return d_x(u, axis, k, i, j); });
    for (int axis = 0; axis < u.grid().n; ++axis)
        total += term([&](int k, int i, int j) { return d_xx(u, axis, k, i, j); });
    if (u.grid().n == 2) {
        // Off-diagonal pair counted twice (symmetric Hessian).
        total += 2.0 * term([&](int k, int i, int j) { return d_xy(u, k, i, j); });
    }
    return total;
}

namespace {

struct NodeRef {
    int k, i, j;
};

std::vector<NodeRef> region_nodes(const SpaceTimeGrid& g, const ParabolicCube& region) {
    std::vector<NodeRef> nodes;
    for (int k = 0; k <= g.nt; ++k) {
        const double t = g.t(k);
        if (!(t > region.t_bottom() && t <= region.t_top)) continue;
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < (g.n == 2 ? g.nx : 1); ++j) {
                const auto p = g.point(i, j);
                bool inside = true;
                for (int a = 0; a < g.n; ++a)
                    inside = inside && p[a] > region.lo(a) && p[a] < region.hi(a);
                if (inside) nodes.push_back({k, i, j});
            }
        }
    }
    return nodes;
}

}  // namespace

std::int64_t nodes_in_region(const SpaceTimeGrid& g, const ParabolicCube& region) {
    return static_cast<std::int64_t>(region_nodes(g, region).size());
}

double holder_seminorm(const GridFunction& u, const ParabolicCube& region, double alpha,
                       CounterRng rng, int random_pairs) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ContractViolation("holder_seminorm: alpha in (0,2]");
    const SpaceTimeGrid& g = u.grid();
    const auto nodes = region_nodes(g, region);
    if (nodes.size() < 2) throw ContractViolation("holder_seminorm: fewer than 2 nodes in region");

    auto dist = [&](const NodeRef& a, const NodeRef& b) {
        double s = 0.0;
        const auto pa = g.point(a.i, a.j), pb = g.point(b.i, b.j);
        for (int ax = 0; ax < g.n; ++ax) s += (pa[ax] - pb[ax]) * (pa[ax] - pb[ax]);
        s += std::fabs(g.t(a.k) - g.t(b.k));
        return std::sqrt(s);
    };
    auto ratio = [&](const NodeRef& a, const NodeRef& b) {
        const double d = dist(a, b);
        if (d == 0.0) return 0.0;
        return std::fabs(u.at(a.k, a.i, a.j) - u.at(b.k, b.i, b.j)) / std::pow(d, alpha);
    };

    double best = 0.0;
    // Systematic short-range pairs: space and time neighbors inside the region.
    // These dominate for alpha near the regularity limit.
    auto index_of = [&](const NodeRef& r) {
        return (static_cast<std::int64_t>(r.k) * g.nx + r.i) * (g.n == 2 ? g.nx : 1) + r.j;
    };
    std::vector<std::int64_t> present(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a) present[a] = index_of(nodes[a]);
    for (std::size_t a = 0; a + 1 < nodes.size(); ++a) {
        const std::int64_t idx = present[a];
        for (std::size_t b = a + 1; b < std::min(nodes.size(), a + 4); ++b) {
            if (present[b] - idx <= 2 * static_cast<std::int64_t>(g.nx))
                best = std::max(best, ratio(nodes[a], nodes[b]));
        }
    }
    // Seeded long-range pairs.
    for (int s = 0; s < random_pairs; ++s) {
        const auto& a = nodes[rng.below(nodes.size())];
        const auto& b = nodes[rng.below(nodes.size())];
        best = std::max(best, ratio(a, b));
    }
    return best;
}

double field_lp_norm_superlevel(const ScalarField& field, const GridFunction& u,
                                const ParabolicCube& region, double p, double threshold) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw ContractViolation("field_lp_norm_superlevel: p must be finite positive");
    const SpaceTimeGrid& g = u.grid();
    const double s = weighted_sum(u, region, [&](int k, int i, int j) {
        if (!(u.at(k, i, j) > threshold)) return 0.0;
        return std::pow(std::fabs(field(g.point(i, j), g.t(k))), p);
    });
    return std::pow(s, 1.0 / p);
}

double field_lq_norm(const ScalarField& field, const SpaceTimeGrid& g,
                     const ParabolicCube& region, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (int k = 0; k <= g.nt; ++k)
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < (g.n == 2 ? g.nx : 1); ++j)
                    m = std::max(m, std::fabs(field(g.point(i, j), g.t(k))));
        return m;
    }
    GridFunction sampled(g);
    sampled.fill([&](const std::array<double, 3>& x, double t) { return field(x, t); });
    return lp_norm(sampled, region, q);
}

}  // namespace pucci
