#include "pucci/oracles.hpp"

#include <cmath>

#include "pucci/errors.hpp"

namespace pucci {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Eigenvalues of a symmetric 2x2 by one exact Jacobi rotation: diagonalize with
// the angle that annihilates the off-diagonal entry, read off the diagonal.
void eigs2_rotation(const SymMatrix& X, double out[2]) {
    const double a = X(0, 0), b = X(0, 1), c = X(1, 1);
    if (b == 0.0) {
        out[0] = a;
        out[1] = c;
        return;
    }
    const double theta = 0.5 * std::atan2(2.0 * b, a - c);
    const double cs = std::cos(theta), sn = std::sin(theta);
    out[0] = cs * cs * a + 2.0 * cs * sn * b + sn * sn * c;
    out[1] = sn * sn * a - 2.0 * cs * sn * b + cs * cs * c;
}

double det3(const SymMatrix& X) {
    const double a = X(0, 0), b = X(0, 1), c = X(0, 2);
    const double d = X(1, 1), e = X(1, 2), f = X(2, 2);
    return a * (d * f - e * e) - b * (b * f - c * e) + c * (b * e - c * d);
}

// Trigonometric solution of the characteristic cubic of a symmetric 3x3.
void eigs3_cardano(const SymMatrix& X, double out[3]) {
    const double p1 = X(0, 1) * X(0, 1) + X(0, 2) * X(0, 2) + X(1, 2) * X(1, 2);
    if (p1 == 0.0) {
        out[0] = X(0, 0);
        out[1] = X(1, 1);
        out[2] = X(2, 2);
        return;
    }
    const double q = X.trace() / 3.0;
    const double p2 = (X(0, 0) - q) * (X(0, 0) - q) + (X(1, 1) - q) * (X(1, 1) - q) +
                      (X(2, 2) - q) * (X(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    SymMatrix B = X + SymMatrix::identity(3) * (-q);
    B = B * (1.0 / p);
    double r = det3(B) / 2.0;
    if (r < -1.0) r = -1.0;
    if (r > 1.0) r = 1.0;
    const double phi = std::acos(r) / 3.0;
    out[0] = q + 2.0 * p * std::cos(phi);
    out[2] = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
    out[1] = 3.0 * q - out[0] - out[2];
}

}  // namespace

double pucci_reference(const PucciPair& pair, const SymMatrix& X, Branch branch) {
    double e[3] = {0.0, 0.0, 0.0};
    switch (X.n()) {
        case 1: e[0] = X(0, 0); break;
        case 2: eigs2_rotation(X, e); break;
        default: eigs3_cardano(X, e); break;
    }
    double v = 0.0;
    for (int i = 0; i < X.n(); ++i) v += pucci_scalar(pair, e[i], branch);
    return v;
}

double pucci_bruteforce(const PucciPair& pair, const SymMatrix& X, Branch branch,
                        int rotations, CounterRng& rng) {
    const int n = X.n();
    // Per frame the optimal corner is separable: the best admissible a with
    // eigenvectors Q picks lambda or Lambda per rotated diagonal entry, which
    // is exactly the scalar rule applied to diag(Q^T X Q).
    auto frame_value = [&](const double Q[3][3]) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            double qi = 0.0;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) qi += Q[r][i] * X(r, c) * Q[c][i];
            v += pucci_scalar(pair, qi, branch);
        }
        return v;
    };

    double Q[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double best = frame_value(Q);
    auto gaussian = [&rng]() {
        double u1 = rng.unit();
        while (u1 <= 0.0) u1 = rng.unit();
        const double u2 = rng.unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    };
    for (int s = 0; s < rotations; ++s) {
        if (n == 1) break;
        if (n == 2) {
            const double th = 2.0 * kPi * rng.unit();
            const double cs = std::cos(th), sn = std::sin(th);
            double R[3][3] = {{cs, -sn, 0}, {sn, cs, 0}, {0, 0, 1}};
            best = branch == Branch::plus ? std::max(best, frame_value(R))
                                          : std::min(best, frame_value(R));
            continue;
        }
        // n = 3: orthonormalize a Gaussian sample (Gram-Schmidt).
        double R[3][3];
        for (int c = 0; c < 3; ++c) {
            for (int r = 0; r < 3; ++r) R[r][c] = gaussian();
            for (int prev = 0; prev < c; ++prev) {
                double dot = 0.0;
                for (int r = 0; r < 3; ++r) dot += R[r][c] * R[r][prev];
                for (int r = 0; r < 3; ++r) R[r][c] -= dot * R[r][prev];
            }
            double nrm = 0.0;
            for (int r = 0; r < 3; ++r) nrm += R[r][c] * R[r][c];
            nrm = std::sqrt(nrm);
            if (nrm < 1e-8) {  // degenerate draw; skip this frame
                R[0][0] = 0.0;
                break;
            }
            for (int r = 0; r < 3; ++r) R[r][c] /= nrm;
        }
        if (R[0][0] == 0.0 && R[1][0] == 0.0 && R[2][0] == 0.0) continue;
        best = branch == Branch::plus ? std::max(best, frame_value(R))
                                      : std::min(best, frame_value(R));
    }
    return best;
}

BoundaryFn ExactSolution::boundary() const {
    auto j = jet;
    return [j](const std::array<double, 3>& x, double t) { return j(x, t).value; };
}

ExactSolution make_decaying_sine(int n, const PucciPair& pair, Branch branch,
                                 double amplitude, bool convex) {
    const double kappa = kPi / 20.0;
    // Concave branch decays at the rate set by the eigenvalue the operator
    // applies to negative curvature directions; the convex mirror swaps it.
    double rate;
    if (branch == Branch::plus)
        rate = convex ? pair.lambda : pair.Lambda;
    else
        rate = convex ? pair.Lambda : pair.lambda;
    rate *= kappa * kappa;
    const double amp = convex ? -amplitude : amplitude;
    ExactSolution sol;
    sol.label = convex ? "decaying_sine_convex" : "decaying_sine";
    sol.n = n;
    sol.jet = [n, amp, rate, kappa](const std::array<double, 3>& x, double t) {
        Jet out;
        out.hess = SymMatrix::zero(n);
        const double decay = amp * std::exp(-rate * t);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double arg = kappa * (x[i] + 10.0);
            s += std::sin(arg);
            out.grad[i] = decay * kappa * std::cos(arg);
            out.hess.set(i, i, -decay * kappa * kappa * std::sin(arg));
        }
        out.value = decay * s;
        out.ut = -rate * out.value;
        return out;
    };
    return sol;
}

ExactSolution make_affine(int n, double a0, const std::array<double, 3>& b, double c) {
    ExactSolution sol;
    sol.label = "affine";
    sol.n = n;
    sol.jet = [n, a0, b, c](const std::array<double, 3>& x, double t) {
        Jet out;
        out.hess = SymMatrix::zero(n);
        out.value = a0 + c * t;
        for (int i = 0; i < n; ++i) {
            out.value += b[i] * x[i];
            out.grad[i] = b[i];
        }
        out.ut = c;
        return out;
    };
    return sol;
}

ExactSolution make_quadratic(int n, const std::array<double, 3>& cxx, double d) {
    ExactSolution sol;
    sol.label = "quadratic";
    sol.n = n;
    sol.jet = [n, cxx, d](const std::array<double, 3>& x, double t) {
        Jet out;
        out.hess = SymMatrix::zero(n);
        out.value = d * t;
        for (int i = 0; i < n; ++i) {
            out.value += cxx[i] * x[i] * x[i];
            out.grad[i] = 2.0 * cxx[i] * x[i];
            out.hess.set(i, i, 2.0 * cxx[i]);
        }
        out.ut = d;
        return out;
    };
    return sol;
}

ExactSolution make_heat_kernel(int n, double kappa, double t_shift) {
    if (kappa <= 0.0 || t_shift <= 0.0)
        throw ContractViolation("make_heat_kernel: kappa and t_shift must be positive");
    ExactSolution sol;
    sol.label = "heat_kernel";
    sol.n = n;
    sol.jet = [n, kappa, t_shift](const std::array<double, 3>& x, double t) {
        Jet out;
        out.hess = SymMatrix::zero(n);
        const double tau = t + t_shift;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
        const double u = std::pow(tau, -0.5 * n) * std::exp(-r2 / (4.0 * kappa * tau));
        out.value = u;
        for (int i = 0; i < n; ++i) out.grad[i] = -x[i] / (2.0 * kappa * tau) * u;
        for (int i = 0; i < n; ++i) {
            out.hess.set(i, i, (x[i] * x[i] / (4.0 * kappa * kappa * tau * tau) -
                                1.0 / (2.0 * kappa * tau)) *
                                   u);
            for (int j = i + 1; j < n; ++j)
                out.hess.set(i, j, x[i] * x[j] / (4.0 * kappa * kappa * tau * tau) * u);
        }
        out.ut = (-0.5 * n / tau + r2 / (4.0 * kappa * tau * tau)) * u;
        return out;
    };
    return sol;
}

double exact_residual(const ExactSolution& sol, const EquationSpec& spec,
                      const std::array<double, 3>& x, double t) {
    const Jet j = sol.jet(x, t);
    const double s = branch_sign(spec.branch);
    double r = j.ut + pucci_eval(spec.pair, j.hess, spec.branch);
    r += gradient_term(spec, std::span<const double>(j.grad.data(), sol.n), x, t);
    r += s * spec.f(x, t);
    return r;
}

}  // namespace pucci
