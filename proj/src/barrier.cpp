#include "pucci/barrier.hpp"

#include <cmath>
#include <sstream>

#include "pucci/errors.hpp"
#include "pucci/norms.hpp"

namespace pucci {
namespace {

// C^2 quintic smoothstep on [0,1]; first and second derivatives vanish at both ends.
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smoothstep_d(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 30.0 * u * u * (1.0 + u * (-2.0 + u));
}

double smoothstep_dd(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 60.0 * u * (1.0 + u * (-3.0 + 2.0 * u));
}

// Plateau profile: 1 for s <= a, 0 for s >= b, smooth monotone descent between.
double plateau(double s, double a, double b) { return smoothstep((b - s) / (b - a)); }
double plateau_d(double s, double a, double b) {
    const double w = b - a;
    return -smoothstep_d((b - s) / w) / w;
}
double plateau_dd(double s, double a, double b) {
    const double w = b - a;
    return smoothstep_dd((b - s) / w) / (w * w);
}

struct EtaDerivs {
    double value = 0.0;
    double dt = 0.0;
    std::array<double, 3> grad{};
    SymMatrix hess{1};
    bool flat = true;  // true when all derivatives vanish identically
};

// eta = 1 - T(t) * prod_i S(|x_i|) with S = plateau(.,1/2,1), T = plateau(.,1/4,1).
EtaDerivs eta_derivs(int n, const std::array<double, 3>& x, double t) {
    EtaDerivs out;
    out.hess = SymMatrix::zero(n);
    const double T = plateau(t, 0.25, 1.0);
    double S[3] = {1.0, 1.0, 1.0}, Sd[3] = {0.0, 0.0, 0.0}, Sdd[3] = {0.0, 0.0, 0.0};
    double prod = T;
    for (int i = 0; i < n; ++i) {
        const double s = std::abs(x[i]);
        S[i] = plateau(s, 0.5, 1.0);
        const double sgn = x[i] < 0.0 ? -1.0 : 1.0;
        Sd[i] = plateau_d(s, 0.5, 1.0) * sgn;  // chain rule through |x_i|; flat near 0
        Sdd[i] = plateau_dd(s, 0.5, 1.0);
        prod *= S[i];
    }
    out.value = 1.0 - prod;
    if (prod == 0.0) {
        // Some factor is exactly zero, so every first/second derivative carries
        // that zero factor unless the derivative hits the vanishing factor
        // itself -- but plateau and its derivatives vanish together outside the
        // transition band, so the whole jet is exactly zero there.
        bool band = (T != 0.0 || plateau_d(t, 0.25, 1.0) != 0.0);
        for (int i = 0; i < n; ++i)
            band = band && (S[i] != 0.0 || Sd[i] != 0.0);
        if (!band) return out;
    }
    out.flat = false;
    const double Td = plateau_d(t, 0.25, 1.0);
    double sprod = 1.0;
    for (int i = 0; i < n; ++i) sprod *= S[i];
    out.dt = -Td * sprod;
    for (int i = 0; i < n; ++i) {
        double rest = T;
        for (int j = 0; j < n; ++j)
            if (j != i) rest *= S[j];
        out.grad[i] = -Sd[i] * rest;
        out.hess.set(i, i, -Sdd[i] * rest);
        for (int j = i + 1; j < n; ++j) {
            double rest2 = T;
            for (int k = 0; k < n; ++k)
                if (k != i && k != j) rest2 *= S[k];
            out.hess.set(i, j, -Sd[i] * Sd[j] * rest2);
        }
    }
    if (out.dt == 0.0 && out.hess.max_abs() == 0.0) {
        bool gz = true;
        for (int i = 0; i < n; ++i) gz = gz && out.grad[i] == 0.0;
        out.flat = gz;
    }
    return out;
}

}  // namespace

double barrier_bump(int n, const std::array<double, 3>& x, double t) {
    double v = plateau(t, 0.0, 0.25);
    for (int i = 0; i < n; ++i) v *= plateau(std::abs(x[i]), 0.25, 0.5);
    return v;
}

double barrier_eta(int n, const std::array<double, 3>& x, double t) {
    double prod = plateau(t, 0.25, 1.0);
    for (int i = 0; i < n; ++i) prod *= plateau(std::abs(x[i]), 0.5, 1.0);
    return 1.0 - prod;
}

BarrierResult build_barrier(const PucciPair& pair, const ScalarField& mu,
                            const SpaceTimeGrid& grid, const BarrierOptions& options) {
    const ParabolicCube& box = grid.box;
    const int n = box.n;
    const CubeCatalog cat = make_catalog(n);
    if (std::abs(box.half_width - cat.Q.half_width) > 1e-12 ||
        std::abs(box.t_top - cat.Q.t_top) > 1e-12 || std::abs(box.depth - cat.Q.depth) > 1e-12 ||
        std::abs(box.center[0]) > 1e-12)
        throw ContractViolation("build_barrier: grid box must be the ambient box Q");
    if (options.xi_amplitude <= 0.0)
        throw ContractViolation("build_barrier: xi_amplitude must be positive");

    EquationSpec aux;
    aux.branch = Branch::plus;
    aux.pair = pair;
    aux.mu = mu;
    aux.m = 1.0;
    aux.f = make_zero_field();
    const double amp = options.xi_amplitude;
    BoundaryFn data = [n, amp](const std::array<double, 3>& x, double t) {
        return amp * barrier_bump(n, x, t);
    };

    BarrierResult out;
    SolveOptions sopt;
    sopt.store_every = options.store_every;
    out.psi = solve_parabolic(aux, grid, data, sopt, &out.stats);

    const double psi_min = out.psi.min_value();
    if (psi_min < -1e-10)
        throw NumericalError("build_barrier: psi lost nonnegativity (min " +
                             std::to_string(psi_min) + ")");
    out.sigma = inf_over(out.psi, cat.K2);
    if (out.sigma <= options.sigma_floor) {
        std::ostringstream msg;
        msg << "build_barrier: degenerate barrier, inf over K2 of psi = " << out.sigma
            << " <= floor " << options.sigma_floor;
        throw NumericalError(msg.str());
    }
    out.M_hat = 2.0 / out.sigma;

    const SpaceTimeGrid& sg = out.psi.grid();
    out.phi = GridFunction(sg);
    out.g = GridFunction(sg);
    const int nx = sg.nx;
    const double h = sg.h();
    const int ny = n >= 2 ? nx : 1;

    for (int k = 0; k <= sg.nt; ++k) {
        const double t = sg.t(k);
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                std::array<double, 3> xp{sg.x(ix, 0), n >= 2 ? sg.x(iy, 1) : 0.0, 0.0};
                const double psi = out.psi.at(k, ix, iy);
                const EtaDerivs eta = eta_derivs(n, xp, t);
                out.phi.raw()[out.phi.index(k, ix, iy)] = out.M_hat * eta.value * psi;
                if (eta.flat) {
                    out.g.raw()[out.g.index(k, ix, iy)] = 0.0;
                    continue;
                }
                // Discrete gradient of psi (central in the interior, one-sided
                // at the walls; eta is flat near the walls so the choice there
                // never contributes).
                std::array<double, 3> dpsi{};
                {
                    const int il = ix > 0 ? ix - 1 : ix, ir = ix < nx - 1 ? ix + 1 : ix;
                    dpsi[0] = (out.psi.at(k, ir, iy) - out.psi.at(k, il, iy)) / ((ir - il) * h);
                    if (n >= 2) {
                        const int jl = iy > 0 ? iy - 1 : iy, jr = iy < ny - 1 ? iy + 1 : iy;
                        dpsi[1] = (out.psi.at(k, ix, jr) - out.psi.at(k, ix, jl)) / ((jr - jl) * h);
                    }
                }
                SymMatrix M = SymMatrix::zero(n);
                for (int i = 0; i < n; ++i) {
                    M.set(i, i, psi * eta.hess(i, i) + 2.0 * eta.grad[i] * dpsi[i]);
                    for (int j = i + 1; j < n; ++j)
                        M.set(i, j,
                              psi * eta.hess(i, j) + eta.grad[i] * dpsi[j] + eta.grad[j] * dpsi[i]);
                }
                double etagrad = 0.0;
                for (int i = 0; i < n; ++i) etagrad += eta.grad[i] * eta.grad[i];
                etagrad = std::sqrt(etagrad);
                const double muv = mu(xp, t);
                const double gval =
                    out.M_hat * (psi * eta.dt + pucci_eval(pair, M, Branch::plus) + muv * psi * etagrad);
                out.g.raw()[out.g.index(k, ix, iy)] = gval;
            }
        }
    }
    if (!out.phi.all_finite() || !out.g.all_finite())
        throw NumericalError("build_barrier: non-finite phi or g");
    return out;
}

}  // namespace pucci
