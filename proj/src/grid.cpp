#include "pucci/grid.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace pucci {

bool operator==(const SpaceTimeGrid& a, const SpaceTimeGrid& b) {
    return a.n == b.n && a.nx == b.nx && a.nt == b.nt && a.box.n == b.box.n &&
           a.box.center == b.box.center && a.box.half_width == b.box.half_width &&
           a.box.t_top == b.box.t_top && a.box.depth == b.box.depth;
}

double GridFunction::value(const std::array<double, 3>& x, double t) const {
    const SpaceTimeGrid& g = grid_;
    const double eps = 1e-12;
    auto locate = [eps](double v, double lo, double step, int count) {
        double s = (v - lo) / step;
        s = std::clamp(s, 0.0, static_cast<double>(count - 1));
        int i = static_cast<int>(std::floor(s));
        if (i >= count - 1) i = count - 2;
        double w = s - i;
        if (w < eps) w = 0.0;
        if (w > 1.0 - eps) w = 1.0;
        return std::pair<int, double>{i, w};
    };
    const auto [kt, wt] = locate(t, g.box.t_bottom(), g.dt(), g.nt + 1);
    const auto [i0, w0] = locate(x[0], g.box.lo(0), g.h(), g.nx);
    if (g.n == 1) {
        const double a = at(kt, i0) * (1 - w0) + at(kt, i0 + 1) * w0;
        const double b = at(kt + 1, i0) * (1 - w0) + at(kt + 1, i0 + 1) * w0;
        return a * (1 - wt) + b * wt;
    }
    const auto [i1, w1] = locate(x[1], g.box.lo(1), g.h(), g.nx);
    auto plane = [&](int k) {
        const double a = at(k, i0, i1) * (1 - w1) + at(k, i0, i1 + 1) * w1;
        const double b = at(k, i0 + 1, i1) * (1 - w1) + at(k, i0 + 1, i1 + 1) * w1;
        return a * (1 - w0) + b * w0;
    };
    return plane(kt) * (1 - wt) + plane(kt + 1) * wt;
}

void GridFunction::fill(const std::function<double(const std::array<double, 3>&, double)>& g) {
    const SpaceTimeGrid& gr = grid_;
    for (int k = 0; k <= gr.nt; ++k) {
        const double t = gr.t(k);
        for (int i = 0; i < gr.nx; ++i) {
            if (gr.n == 1) {
                set(k, i, g(gr.point(i), t));
            } else {
                for (int j = 0; j < gr.nx; ++j) set(k, i, j, g(gr.point(i, j), t));
            }
        }
    }
}

double GridFunction::max_value() const { return *std::max_element(v_.begin(), v_.end()); }
double GridFunction::min_value() const { return *std::min_element(v_.begin(), v_.end()); }

bool GridFunction::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

void write_grid_function(const GridFunction& u, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("write_grid_function: cannot open " + path.string());
    const SpaceTimeGrid& g = u.grid();
    const char magic[4] = {'P', 'G', 'F', '1'};
    const std::uint32_t version = 1, n = g.n, nx = g.nx, nt = g.nt, pad = 0;
    out.write(magic, 4);
    for (const std::uint32_t* v : {&version, &n, &nx, &nt, &pad})
        out.write(reinterpret_cast<const char*>(v), 4);
    const double header[8] = {g.box.center[0], g.box.center[1], g.box.center[2],
                              g.box.half_width, g.box.t_top, g.box.depth, 0.0, 0.0};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(u.data().data()),
              static_cast<std::streamsize>(u.data().size() * sizeof(double)));

    nlohmann::ordered_json side;
    side["format"] = "PGF1";
    side["n"] = g.n;
    side["nx"] = g.nx;
    side["nt"] = g.nt;
    side["box"] = {{"center", {g.box.center[0], g.box.center[1], g.box.center[2]}},
                   {"half_width", g.box.half_width},
                   {"t_top", g.box.t_top},
                   {"depth", g.box.depth}};
    side["values"] = "flat float64, time-major";
    std::ofstream meta(path.string() + ".json");
    meta << side.dump(2) << "\n";
}

GridFunction read_grid_function(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NumericalError("read_grid_function: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PGF1", 4) != 0)
        throw NumericalError("read_grid_function: bad magic");
    std::uint32_t version, n, nx, nt, pad;
    for (std::uint32_t* v : {&version, &n, &nx, &nt, &pad})
        in.read(reinterpret_cast<char*>(v), 4);
    double header[8];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || version != 1) throw NumericalError("read_grid_function: bad header");
    SpaceTimeGrid g;
    g.n = static_cast<int>(n);
    g.box.n = g.n;
    g.box.center = {header[0], header[1], header[2]};
    g.box.half_width = header[3];
    g.box.t_top = header[4];
    g.box.depth = header[5];
    g.nx = static_cast<int>(nx);
    g.nt = static_cast<int>(nt);
    GridFunction u(g);
    in.read(reinterpret_cast<char*>(u.raw().data()),
            static_cast<std::streamsize>(u.raw().size() * sizeof(double)));
    if (!in) throw NumericalError("read_grid_function: truncated values");
    if (!u.all_finite()) throw NumericalError("read_grid_function: non-finite values in file");
    return u;
}

}  // namespace pucci
