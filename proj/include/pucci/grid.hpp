#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "pucci/errors.hpp"
#include "pucci/geometry.hpp"

namespace pucci {

/// Uniform grid on a parabolic box. nx nodes per space axis (including both
/// lateral boundary nodes), nt time steps, so nt+1 stored levels; level 0 is
/// the initial (bottom) face t = t_bottom, level nt is t = t_top. The node set
/// includes the full parabolic boundary.
struct SpaceTimeGrid {
    int n = 1;
    ParabolicCube box;
    int nx = 3;
    int nt = 1;

    double h() const { return 2.0 * box.half_width / (nx - 1); }
    double dt() const { return box.depth / nt; }

    double x(int i, int axis = 0) const { return box.center[axis] - box.half_width + i * h(); }
    double t(int k) const { return box.t_bottom() + k * dt(); }

    std::array<double, 3> point(int i, int j = 0) const {
        std::array<double, 3> p{0.0, 0.0, 0.0};
        p[0] = x(i, 0);
        if (n == 2) p[1] = x(j, 1);
        return p;
    }

    std::int64_t nodes_per_level() const {
        std::int64_t s = nx;
        if (n == 2) s *= nx;
        return s;
    }
    std::int64_t node_count() const { return nodes_per_level() * (nt + 1); }

    bool boundary_node(int i, int j = 0) const {
        if (i == 0 || i == nx - 1) return true;
        return n == 2 && (j == 0 || j == nx - 1);
    }

    void require_valid() const {
        box.require_valid();
        if (n != box.n || n < 1 || n > 2) throw ContractViolation("SpaceTimeGrid: n must be 1 or 2");
        if (nx < 3 || nt < 1) throw ContractViolation("SpaceTimeGrid: need nx >= 3, nt >= 1");
    }

    friend bool operator==(const SpaceTimeGrid& a, const SpaceTimeGrid& b);
};

/// Scalar field sampled on a SpaceTimeGrid, time-major storage. Assigning a
/// non-finite value is a hard error at the assignment site.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const SpaceTimeGrid& g)
        : grid_(g), v_(static_cast<std::size_t>(g.node_count()), 0.0) {
        g.require_valid();
    }

    const SpaceTimeGrid& grid() const { return grid_; }

    double at(int k, int i, int j = 0) const { return v_[index(k, i, j)]; }
    void set(int k, int i, double value) { assign(index(k, i, 0), value); }
    void set(int k, int i, int j, double value) { assign(index(k, i, j), value); }

    std::size_t index(int k, int i, int j = 0) const {
        std::size_t idx = static_cast<std::size_t>(k) * static_cast<std::size_t>(grid_.nx) + i;
        if (grid_.n == 2) idx = idx * static_cast<std::size_t>(grid_.nx) + j;
        return idx;
    }

    /// Multilinear interpolation inside the grid box (clamped to the node hull).
    double value(const std::array<double, 3>& x, double t) const;

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& raw() { return v_; }  // bulk writers must keep values finite

    /// Fill from a callback g(x, t) over all nodes.
    void fill(const std::function<double(const std::array<double, 3>&, double)>& g);

    double max_value() const;
    double min_value() const;

    /// True if every stored value is finite.
    bool all_finite() const;

private:
    SpaceTimeGrid grid_;
    std::vector<double> v_;

    void assign(std::size_t idx, double value) {
        if (!std::isfinite(value))
            throw NumericalError("GridFunction: non-finite value assigned at node " +
                                 std::to_string(idx));
        v_[idx] = value;
    }
};

/// Flat binary layout: 88-byte header (magic "PGF1", u32 version, u32 n,
/// u32 nx, u32 nt, u32 pad, box as 8 doubles: center xyz, half_width, t_top,
/// depth, 2 reserved) followed by the node values in storage order. A JSON
/// sidecar <path>.json records the same metadata human-readably.
void write_grid_function(const GridFunction& u, const std::filesystem::path& path);
GridFunction read_grid_function(const std::filesystem::path& path);

}  // namespace pucci
