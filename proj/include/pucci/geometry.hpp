#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pucci/errors.hpp"

namespace pucci {

/// Axis-aligned parabolic box: center + (-r, r)^n in space (open),
/// (t_top - depth, t_top] in time (half-open, closed at the top).
/// All coordinates used by the cube calculus are dyadic rationals and hence
/// exact in doubles; measure arithmetic on such boxes is exact.
struct ParabolicCube {
    int n = 1;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double half_width = 1.0;
    double t_top = 1.0;
    double depth = 1.0;

    double t_bottom() const { return t_top - depth; }

    bool contains(const std::array<double, 3>& x, double t) const {
        if (!(t > t_bottom() && t <= t_top)) return false;
        for (int i = 0; i < n; ++i)
            if (!(x[i] > center[i] - half_width && x[i] < center[i] + half_width)) return false;
        return true;
    }

    /// (2r)^n * depth.
    double measure() const {
        double m = depth;
        for (int i = 0; i < n; ++i) m *= 2.0 * half_width;
        return m;
    }

    /// Parabolic diameter sqrt((2r sqrt(n))^2 + depth).
    double par_diameter() const {
        const double d = 2.0 * half_width;
        return std::sqrt(d * d * n + depth);
    }

    /// Spatial intervals per axis.
    double lo(int axis) const { return center[axis] - half_width; }
    double hi(int axis) const { return center[axis] + half_width; }

    void require_valid() const {
        if (n < 1 || n > 3 || !(half_width > 0.0) || !(depth > 0.0))
            throw ContractViolation("ParabolicCube: invalid dimensions");
    }
};

/// The fixed cube family every estimate is phrased on, at dimension n:
///   Q  = (-10,10)^n x (0,10]         ambient box
///   J1 = (-1,1)^n x (0,1/2]          measure window
///   J2 = (-1,1)^n x (9,10]           infimum window at the top
///   J3 = (-1/2,1/2)^n x (1/4,1/2]    supremum window
///   K1 = (-1,1)^n x (0,1]            covering-lemma root
///   K2 = (-3,3)^n x (1,10]           barrier target
///   K14 = (-1/2,1/2)^n x (0,1/4]     barrier bump support
struct CubeCatalog {
    int n;
    ParabolicCube Q, J1, J2, J3, K1, K2, K14;

    /// Top-anchored shrinking box Q_r = (-10r,10r)^n x (10-10r^2, 10], r in (0,1].
    /// r = 1 reproduces Q exactly.
    ParabolicCube Q_r(double r) const;

    /// Translated copy Q_r(x,t) = (x,t) + (-r,r)^n x (-r^2, 0].
    static ParabolicCube Q_r_at(int n, const std::array<double, 3>& x, double t, double r);
};

CubeCatalog make_catalog(int n);

/// Node of the parabolic dyadic tree inside K1. Level k >= 1 has spatial side
/// 2^(1-k) and time depth 4^-k; splitting is 2^n in space and 4 in time, so a
/// cube has 2^(n+2) children. Indices: space a_i in [0, 2^k), time j in [0, 4^k):
///   cell = (-1 + a_i 2^(1-k), -1 + (a_i+1) 2^(1-k)) x ... x (j 4^-k, (j+1) 4^-k].
struct DyadicCube {
    int n = 1;
    int level = 1;
    std::array<std::int64_t, 3> sx{0, 0, 0};
    std::int64_t tj = 0;

    double side() const { return std::pow(2.0, 1 - level); }
    double tdepth() const { return std::pow(4.0, -level); }

    ParabolicCube box() const;

    /// 2^(n(1-k)) * 4^-k, exact in doubles at all desk levels.
    double measure() const { return box().measure(); }

    std::vector<DyadicCube> children() const;

    bool has_predecessor() const { return level >= 2; }
    DyadicCube predecessor() const;

    void require_valid() const;

    friend bool operator==(const DyadicCube& a, const DyadicCube& b) {
        return a.n == b.n && a.level == b.level && a.sx == b.sx && a.tj == b.tj;
    }
};

/// The 2^(n+2) level-1 cubes partitioning K1.
std::vector<DyadicCube> level1_cubes(int n);

/// m copies of the predecessor stacked directly on top of it:
/// predecessor J x (tau, tau + 4^(1-k)] gives J x (tau + 4^(1-k), tau + 4^(1-k)(m+1)].
/// Throws for level-1 cubes (no predecessor) and m < 1.
ParabolicCube stacked_predecessor(const DyadicCube& cube, int m);

/// True when the stacked predecessor stays inside Q (top <= 10). Holds for all
/// cubes of level >= 2 whenever m <= 36.
bool stack_fits_ambient(const DyadicCube& cube, int m);

/// Growing cube chain anchored at (x0, t0):
///   N_ell = (x0, t0 + (9^ell - 1)/8 * 4^-j) + (3^ell / 2^j) * K1
/// where s*K1 = (-s,s)^n x (0, s^2]. ell >= 1, j >= 0.
ParabolicCube growing_cube(int n, const std::array<double, 3>& x0, double t0, int j, int ell);

/// Paraboloid shells around the origin, sup-norm in space, strict inequality:
///   S-(j):  t > (9 |x|_inf^2 - 4^-j) / 8      (inner, steep)
///   S+(j):  t > (|x|_inf^2 - 4^-j) / 8        (outer, shallow)
/// restricted to the time window t in (alpha, beta].
enum class Paraboloid { s_minus, s_plus };

bool paraboloid_membership(int n, const std::array<double, 3>& x, double t,
                           const std::array<double, 3>& anchor_x, double anchor_t,
                           int j, Paraboloid kind, double alpha, double beta);

/// Parabolic scaling x -> x0 + r x, t -> t0 + r^2 (t - t_ref), with an output
/// amplitude factor. apply to a field u: (Su)(x,t) = amplitude * u(map(x,t)).
struct ScalingMap {
    int n = 1;
    std::array<double, 3> x0{0.0, 0.0, 0.0};
    double t0 = 0.0;
    double r = 1.0;
    double amplitude = 1.0;
    double t_ref = 0.0;

    std::array<double, 3> map_x(const std::array<double, 3>& x) const {
        std::array<double, 3> y{0.0, 0.0, 0.0};
        for (int i = 0; i < n; ++i) y[i] = x0[i] + r * x[i];
        return y;
    }
    double map_t(double t) const { return t0 + r * r * (t - t_ref); }

    void require_valid() const {
        if (!(r > 0.0)) throw ContractViolation("ScalingMap: r must be positive");
    }
};

/// compose(outer, inner) applies inner first as a field transform:
/// apply(compose(o,i), u) == apply(o, apply(i, u)). The composite has
/// r = r_i * r_o and amplitude = a_o * a_i; point maps chain accordingly.
ScalingMap compose(const ScalingMap& outer, const ScalingMap& inner);

}  // namespace pucci
