#pragma once

#include "pucci/solver.hpp"

namespace pucci {

/// Output of the barrier construction on the ambient box Q:
///   psi    solution of psi_t + P+(D^2 psi) + mu |D psi| = 0 with bump data
///   phi    = M_hat * eta * psi, zero on the parabolic boundary, >= 2 on K2
///   g      source bound with support inside K1 (exactly zero outside)
///   sigma  = inf over K2 of psi (must be positive), M_hat = 2 / sigma
struct BarrierResult {
    GridFunction psi;
    GridFunction phi;
    GridFunction g;
    double sigma = 0.0;
    double M_hat = 0.0;
    SolveStats stats;
};

struct BarrierOptions {
    double xi_amplitude = 1.0;   // scales the initial bump (homogeneity checks)
    int store_every = 1;
    double sigma_floor = 1e-10;  // below this the construction is degenerate
};

/// Initial bump xi(x, t): product of per-axis C^2 plateaus (1 on |x_i| <= 1/4,
/// 0 from |x_i| >= 1/2) and a C^2 time cutoff vanishing for t >= 1/4.
/// Support inside the closure of K14; positive on (-1/2,1/2)^n at t = 0.
double barrier_bump(int n, const std::array<double, 3>& x, double t);

/// Cutoff eta: 1 outside K1, 0 on K14, C^2 monotone in between (closed forms;
/// eta and all its derivatives vanish nowhere -- they equal the constant-1
/// state -- outside K1, which keeps supp g inside K1 exact).
double barrier_eta(int n, const std::array<double, 3>& x, double t);

/// Solves the auxiliary problem on Q and assembles (phi, g). The grid box must
/// be the ambient Q for the catalog dimension. Throws NumericalError when
/// sigma degenerates below options.sigma_floor.
BarrierResult build_barrier(const PucciPair& pair, const ScalarField& mu,
                            const SpaceTimeGrid& grid, const BarrierOptions& options = {});

}  // namespace pucci
