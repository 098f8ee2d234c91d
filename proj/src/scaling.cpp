#include "pucci/scaling.hpp"

#include <cmath>
#include <sstream>

#include "pucci/errors.hpp"

namespace pucci {

GridFunction apply_scaling(const ScalingMap& map, const GridFunction& u,
                           const SpaceTimeGrid& target) {
    target.require_valid();
    const SpaceTimeGrid& src = u.grid();
    if (target.n != src.n) throw ContractViolation("apply_scaling: dimension mismatch");
    const int n = target.n;

    const double pad = 1e-9 * (1.0 + src.box.half_width + src.box.depth);
    auto check_inside = [&](const std::array<double, 3>& x, double t) {
        for (int a = 0; a < n; ++a) {
            const double lo = src.box.center[a] - src.box.half_width;
            const double hi = src.box.center[a] + src.box.half_width;
            if (x[a] < lo - pad || x[a] > hi + pad) return false;
        }
        return t >= src.box.t_bottom() - pad && t <= src.box.t_top + pad;
    };

    GridFunction out(target);
    const int ny = n == 2 ? target.nx : 1;
    for (int k = 0; k <= target.nt; ++k) {
        const double t = map.map_t(target.t(k));
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < target.nx; ++i) {
                const std::array<double, 3> x = map.map_x(target.point(i, j));
                if (!check_inside(x, t)) {
                    std::ostringstream msg;
                    msg << "apply_scaling: mapped node (" << x[0];
                    if (n == 2) msg << ", " << x[1];
                    msg << "; " << t << ") falls outside the source hull";
                    throw ContractViolation(msg.str());
                }
                out.raw()[out.index(k, i, j)] = map.amplitude * u.value(x, t);
            }
        }
    }
    return out;
}

SpaceTimeGrid pullback_grid(const ScalingMap& map, const SpaceTimeGrid& source) {
    if (map.r <= 0.0) throw ContractViolation("pullback_grid: scale factor must be positive");
    SpaceTimeGrid g = source;
    g.box.half_width = source.box.half_width / map.r;
    for (int a = 0; a < 3; ++a) g.box.center[a] = (source.box.center[a] - map.x0[a]) / map.r;
    g.box.t_top = map.t_ref + (source.box.t_top - map.t0) / (map.r * map.r);
    g.box.depth = source.box.depth / (map.r * map.r);
    return g;
}

EquationSpec transform_spec(const ScalingMap& map, const EquationSpec& spec) {
    if (map.r <= 0.0 || map.amplitude <= 0.0)
        throw ContractViolation("transform_spec: r and amplitude must be positive");
    EquationSpec out = spec;
    const double mu_factor =
        std::pow(map.amplitude, 1.0 - spec.m) * std::pow(map.r, 2.0 - spec.m);
    const double f_factor = map.amplitude * map.r * map.r;

    ScalarField mu_in = spec.mu;
    ScalarField f_in = spec.f;
    ScalingMap m2 = map;
    out.mu.sample = [m2, mu_in, mu_factor](std::array<double, 3> x, double t) {
        return mu_factor * mu_in(m2.map_x(x), m2.map_t(t));
    };
    out.mu.label = "scaled(" + spec.mu.label + ")";
    out.mu.has_cap = false;  // cap (if any) is applied before scaling
    out.f.sample = [m2, f_in, f_factor](std::array<double, 3> x, double t) {
        return f_factor * f_in(m2.map_x(x), m2.map_t(t));
    };
    out.f.label = "scaled(" + spec.f.label + ")";
    out.f.has_cap = false;
    return out;
}

}  // namespace pucci
