#include "pucci/fields.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "pucci/errors.hpp"

namespace pucci {

ScalarField make_power_singularity(int n, const std::array<double, 3>& center, double exponent,
                                   double strength, double cell_h) {
    if (n < 1 || n > 2) throw ContractViolation("make_power_singularity: n must be 1 or 2");
    if (!(exponent > 0.0) || !(exponent < n))
        throw ConfigError("make_power_singularity: exponent must lie in (0, n)");
    if (!(strength > 0.0) || !(cell_h > 0.0))
        throw ContractViolation("make_power_singularity: strength and cell_h must be positive");

    double cap_radius, cap_value;
    if (n == 1) {
        // Average of |x|^{-a} over (-h/2, h/2): (h/2)^{-a} / (1 - a).
        cap_radius = 0.5 * cell_h;
        cap_value = std::pow(cap_radius, -exponent) / (1.0 - exponent);
    } else {
        // Average over the disc of the same area as the h x h cell
        // (radius h/sqrt(pi)): 2 r^{-a} / (2 - a).
        cap_radius = cell_h / std::sqrt(3.14159265358979323846);
        cap_value = 2.0 * std::pow(cap_radius, -exponent) / (2.0 - exponent);
    }

    ScalarField out;
    std::ostringstream lbl;
    lbl << "power_singularity(a=" << exponent << ",s=" << strength << ")";
    out.label = lbl.str();
    out.sample = [n, center, exponent, strength, cap_value](std::array<double, 3> x, double) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        const double r = std::sqrt(r2);
        if (r == 0.0) return strength * cap_value;
        return strength * std::min(std::pow(r, -exponent), cap_value);
    };
    return out;
}

ScalarField make_bump_sum_field(int n, const ParabolicCube& box, int bumps, double amplitude,
                                double wmin, double wmax, CounterRng rng) {
    if (bumps < 1 || amplitude <= 0.0 || wmin <= 0.0 || wmax < wmin)
        throw ContractViolation("make_bump_sum_field: bad parameters");
    struct Bump {
        std::array<double, 3> c;
        double tc, w, tw, a;
    };
    std::vector<Bump> parts;
    parts.reserve(static_cast<std::size_t>(bumps));
    for (int b = 0; b < bumps; ++b) {
        Bump p{};
        for (int i = 0; i < n; ++i)
            p.c[i] = rng.uniform(box.center[i] - box.half_width, box.center[i] + box.half_width);
        p.tc = rng.uniform(box.t_bottom(), box.t_top);
        p.w = rng.uniform(wmin, wmax);
        p.tw = rng.uniform(wmin, wmax) * 0.5 * (box.depth / (2.0 * box.half_width)) +
               0.05 * box.depth;
        p.a = rng.uniform(0.2, 1.0) * amplitude;
        parts.push_back(p);
    }
    ScalarField out;
    out.label = "bump_sum(" + std::to_string(bumps) + ")";
    out.sample = [n, parts](std::array<double, 3> x, double t) {
        double v = 0.0;
        for (const Bump& p : parts) {
            double s2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = (x[i] - p.c[i]) / p.w;
                s2 += d * d;
            }
            const double dt = (t - p.tc) / p.tw;
            s2 += dt * dt;
            if (s2 >= 1.0) continue;
            const double q = 1.0 - s2;
            v += p.a * q * q * q;  // C^2 at the support edge
        }
        return v;
    };
    return out;
}

}  // namespace pucci
