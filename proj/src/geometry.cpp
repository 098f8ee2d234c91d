#include "pucci/geometry.hpp"

#include <cmath>

namespace pucci {

namespace {

ParabolicCube box(int n, double half, double t_top, double depth) {
    ParabolicCube c;
    c.n = n;
    c.center = {0.0, 0.0, 0.0};
    c.half_width = half;
    c.t_top = t_top;
    c.depth = depth;
    return c;
}

}  // namespace

ParabolicCube CubeCatalog::Q_r(double r) const {
    if (!(r > 0.0 && r <= 1.0)) throw ContractViolation("Q_r: r must lie in (0, 1]");
    return box(n, 10.0 * r, 10.0, 10.0 * r * r);
}

ParabolicCube CubeCatalog::Q_r_at(int n, const std::array<double, 3>& x, double t, double r) {
    if (!(r > 0.0)) throw ContractViolation("Q_r_at: r must be positive");
    ParabolicCube c = box(n, r, t, r * r);
    c.center = x;
    return c;
}

CubeCatalog make_catalog(int n) {
    if (n < 1 || n > 3) throw ContractViolation("make_catalog: n must be 1, 2 or 3");
    CubeCatalog c{n,
                  box(n, 10.0, 10.0, 10.0),   // Q
                  box(n, 1.0, 0.5, 0.5),      // J1
                  box(n, 1.0, 10.0, 1.0),     // J2
                  box(n, 0.5, 0.5, 0.25),     // J3
                  box(n, 1.0, 1.0, 1.0),      // K1
                  box(n, 3.0, 10.0, 9.0),     // K2
                  box(n, 0.5, 0.25, 0.25)};   // K14
    return c;
}

void DyadicCube::require_valid() const {
    if (n < 1 || n > 3) throw ContractViolation("DyadicCube: n must be 1, 2 or 3");
    if (level < 1 || level > 30) throw ContractViolation("DyadicCube: level out of range");
    const std::int64_t sx_max = std::int64_t{1} << level;
    const std::int64_t tj_max = std::int64_t{1} << (2 * level);
    for (int i = 0; i < n; ++i)
        if (sx[i] < 0 || sx[i] >= sx_max) throw ContractViolation("DyadicCube: space index out of K1");
    if (tj < 0 || tj >= tj_max) throw ContractViolation("DyadicCube: time index out of K1");
}

ParabolicCube DyadicCube::box() const {
    require_valid();
    const double s = side();
    ParabolicCube c;
    c.n = n;
    for (int i = 0; i < n; ++i) c.center[i] = -1.0 + (static_cast<double>(sx[i]) + 0.5) * s;
    c.half_width = 0.5 * s;
    c.depth = tdepth();
    c.t_top = (static_cast<double>(tj) + 1.0) * c.depth;
    return c;
}

std::vector<DyadicCube> DyadicCube::children() const {
    require_valid();
    std::vector<DyadicCube> out;
    out.reserve(std::size_t{1} << (n + 2));
    const int nspace = 1 << n;
    for (std::int64_t dt = 0; dt < 4; ++dt) {
        for (int ds = 0; ds < nspace; ++ds) {
            DyadicCube c;
            c.n = n;
            c.level = level + 1;
            for (int i = 0; i < n; ++i) c.sx[i] = 2 * sx[i] + ((ds >> i) & 1);
            c.tj = 4 * tj + dt;
            out.push_back(c);
        }
    }
    return out;
}

DyadicCube DyadicCube::predecessor() const {
    require_valid();
    if (!has_predecessor())
        throw ContractViolation("DyadicCube: level-1 cubes have no predecessor");
    DyadicCube p;
    p.n = n;
    p.level = level - 1;
    for (int i = 0; i < n; ++i) p.sx[i] = sx[i] / 2;
    p.tj = tj / 4;
    return p;
}

std::vector<DyadicCube> level1_cubes(int n) {
    std::vector<DyadicCube> out;
    const int nspace = 1 << n;
    for (std::int64_t tj = 0; tj < 4; ++tj) {
        for (int ds = 0; ds < nspace; ++ds) {
            DyadicCube c;
            c.n = n;
            c.level = 1;
            for (int i = 0; i < n; ++i) c.sx[i] = (ds >> i) & 1;
            c.tj = tj;
            out.push_back(c);
        }
    }
    return out;
}

ParabolicCube stacked_predecessor(const DyadicCube& cube, int m) {
    if (m < 1) throw ContractViolation("stacked_predecessor: m must be >= 1");
    const DyadicCube pred = cube.predecessor();  // throws at level 1
    ParabolicCube pb = pred.box();
    // Same spatial footprint; time shifts up by one predecessor depth and
    // stretches to m copies.
    ParabolicCube s = pb;
    s.depth = m * pb.depth;
    s.t_top = pb.t_top + s.depth;
    return s;
}

bool stack_fits_ambient(const DyadicCube& cube, int m) {
    if (!cube.has_predecessor()) return false;
    // Integer check: top of stack = (tj_pred + 1 + m) * 4^(1-level) <= 10.
    const DyadicCube pred = cube.predecessor();
    const std::int64_t units = pred.tj + 1 + m;                  // in units of 4^-pred.level
    const std::int64_t cap = std::int64_t{10} << (2 * pred.level);  // 10 * 4^pred.level
    return units <= cap;
}

ParabolicCube growing_cube(int n, const std::array<double, 3>& x0, double t0, int j, int ell) {
    if (j < 0 || ell < 1) throw ContractViolation("growing_cube: need j >= 0, ell >= 1");
    if (j > 30 || ell > 40) throw ContractViolation("growing_cube: index out of supported range");
    const double scale = std::pow(3.0, ell) / std::pow(2.0, j);          // 3^ell / 2^j
    const double offset = (std::pow(9.0, ell) - 1.0) / 8.0 * std::pow(4.0, -j);
    ParabolicCube c;
    c.n = n;
    c.center = x0;
    c.half_width = scale;
    c.depth = scale * scale;
    c.t_top = t0 + offset + c.depth;
    return c;
}

bool paraboloid_membership(int n, const std::array<double, 3>& x, double t,
                           const std::array<double, 3>& anchor_x, double anchor_t,
                           int j, Paraboloid kind, double alpha, double beta) {
    if (j < 0) throw ContractViolation("paraboloid_membership: j must be >= 0");
    const double tau = t - anchor_t;
    if (!(tau > alpha && tau <= beta)) return false;
    double sup = 0.0;
    for (int i = 0; i < n; ++i) sup = std::max(sup, std::fabs(x[i] - anchor_x[i]));
    const double c = kind == Paraboloid::s_minus ? 9.0 : 1.0;
    return tau > (c * sup * sup - std::pow(4.0, -j)) / 8.0;  // strict
}

ScalingMap compose(const ScalingMap& outer, const ScalingMap& inner) {
    if (outer.n != inner.n) throw ContractViolation("compose: dimension mismatch");
    outer.require_valid();
    inner.require_valid();
    // (S_o S_i u)(x,t) = a_o a_i u(x_i + r_i(x_o + r_o x), t_i + r_i^2(t_o + r_o^2(t - tref_o) - tref_i)).
    ScalingMap c;
    c.n = outer.n;
    c.r = inner.r * outer.r;
    c.amplitude = outer.amplitude * inner.amplitude;
    for (int i = 0; i < c.n; ++i) c.x0[i] = inner.x0[i] + inner.r * outer.x0[i];
    c.t0 = inner.t0 + inner.r * inner.r * (outer.t0 - inner.t_ref);
    c.t_ref = outer.t_ref;
    return c;
}

}  // namespace pucci
