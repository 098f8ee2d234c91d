#pragma once

#include <functional>
#include <string>

#include "pucci/grid.hpp"
#include "pucci/pucci_core.hpp"
#include "pucci/rng.hpp"
#include "pucci/solver.hpp"
#include "pucci/sym_matrix.hpp"

namespace pucci {

/// Extremal-operator evaluation through an independent spectral path:
/// n=1 direct, n=2 single exact Jacobi rotation, n=3 trigonometric solution of
/// the characteristic cubic. Shares no eigenvalue code with pucci_eval.
double pucci_reference(const PucciPair& pair, const SymMatrix& X, Branch branch);

/// Enumeration bound: evaluates -tr(a X) over admissible a = Q diag(c) Q^T for
/// seeded random frames Q (plus the standard frame), picking the optimal corner
/// c in {lambda, Lambda}^n per frame. Returns a lower bound for the plus branch
/// and an upper bound for the minus branch; tightens as `rotations` grows.
double pucci_bruteforce(const PucciPair& pair, const SymMatrix& X, Branch branch,
                        int rotations, CounterRng& rng);

/// Full first/second order data of a reference solution at one point.
struct Jet {
    double value = 0.0;
    double ut = 0.0;
    std::array<double, 3> grad{};
    SymMatrix hess{1};
};

/// Closed-form solution with an exact space-time jet, used as convergence and
/// exactness oracles for the marching scheme.
struct ExactSolution {
    std::string label;
    int n = 1;
    std::function<Jet(const std::array<double, 3>&, double)> jet;

    double value(const std::array<double, 3>& x, double t) const { return jet(x, t).value; }
    BoundaryFn boundary() const;
};

/// u = amplitude * e^{-rate t} * sum_i sin(kappa (x_i + 10)), kappa = pi/20.
/// Concave and nonnegative on the ambient box; with convex=true the sign flips
/// and the decay rate switches from Lambda kappa^2 to lambda kappa^2. Solves
/// u_t + P_branch(D^2 u) = 0 for the branch passed here.
ExactSolution make_decaying_sine(int n, const PucciPair& pair, Branch branch,
                                 double amplitude = 1.0, bool convex = false);

/// u = a0 + b . x + c t; solves the equation with source f = -s_branch * c.
ExactSolution make_affine(int n, double a0, const std::array<double, 3>& b, double c = 0.0);

/// u = sum_i cxx_i x_i^2 + d t; constant Hessian diag(2 cxx).
ExactSolution make_quadratic(int n, const std::array<double, 3>& cxx, double d = 0.0);

/// u = (t + t_shift)^{-n/2} exp(-|x|^2 / (4 kappa (t + t_shift))); solves
/// u_t = kappa Laplace u, i.e. the extremal equation with lambda = Lambda = kappa.
ExactSolution make_heat_kernel(int n, double kappa, double t_shift);

/// Pointwise residual u_t + P_branch(D^2 u) + s mu |Du|^m + s f of the exact
/// jet under the given problem. Closed-form solutions matched to their spec
/// return values below 1e-12.
double exact_residual(const ExactSolution& sol, const EquationSpec& spec,
                      const std::array<double, 3>& x, double t);

}  // namespace pucci
