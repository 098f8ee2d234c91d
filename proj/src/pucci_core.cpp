#include "pucci/pucci_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pucci {

double pucci_eval(const PucciPair& pair, const SymMatrix& X, Branch branch) {
    const auto eig = X.eigenvalues();
    double pos = 0.0, neg = 0.0;
    for (int i = 0; i < X.n(); ++i) {
        if (eig[i] > 0.0) pos += eig[i];
        else neg += eig[i];
    }
    return branch == Branch::plus ? -pair.lambda * pos - pair.Lambda * neg
                                  : -pair.Lambda * pos - pair.lambda * neg;
}

ScalarField make_zero_field() {
    ScalarField f;
    f.sample = [](const std::array<double, 3>&, double) { return 0.0; };
    f.label = "zero";
    return f;
}

ScalarField make_constant_field(double c) {
    ScalarField f;
    f.sample = [c](const std::array<double, 3>&, double) { return c; };
    f.label = "constant(" + std::to_string(c) + ")";
    return f;
}

double grad_norm(std::span<const double> grad) {
    double s = 0.0;
    for (double g : grad) s += g * g;
    return std::sqrt(s);
}

double gradient_term(const EquationSpec& spec, std::span<const double> grad,
                     const std::array<double, 3>& x, double t) {
    if (spec.m < 1.0) throw ContractViolation("gradient_term: m < 1 is outside the supported range");
    const double mag = grad_norm(grad);
    const double power = spec.m == 1.0 ? mag : std::pow(mag, spec.m);
    return branch_sign(spec.branch) * spec.mu(x, t) * power;
}

void EquationSpec::validate(int n) const {
    const double np2 = n + 2.0;
    std::ostringstream err;
    if (m == 1.0) {
        if (!(q > np2)) {
            err << "(Apq1): q > n+2 violated (q = " << q << ", n+2 = " << np2 << ")";
            throw ConfigError(err.str());
        }
        if (!(p > np2 / 2.0)) {
            err << "(Apq1): p > (n+2)/2 violated (p = " << p << ", (n+2)/2 = " << np2 / 2.0 << ")";
            throw ConfigError(err.str());
        }
        if (!(p <= q)) {
            err << "(Apq1): p <= q violated (p = " << p << ", q = " << q << ")";
            throw ConfigError(err.str());
        }
        return;
    }
    if (m > 1.0) {
        const bool q_inf = std::isinf(q);
        // Case (i): n+1 < p < n+2, m(n+2-p) < n+2, q = inf.
        if (q_inf && p > n + 1.0 && p < np2 && m * (np2 - p) < np2) return;
        // Case (ii): p >= n+2, q = inf.
        if (q_inf && p >= np2) return;
        // Case (iii): n+2 < p = q < inf.
        if (!q_inf && p == q && p > np2) return;
        // Case (iv): n+1 < p < q, q > n+2, m q (n+2-p) < (n+2)(q-p).
        if (!q_inf && p > n + 1.0 && p < q && q > np2 && m * q * (np2 - p) < np2 * (q - p)) return;

        err << "(pqm): no admissible case for p = " << p << ", q = " << q << ", m = " << m
            << ", n = " << n << ". ";
        if (q_inf) {
            if (p <= n + 1.0) err << "(pqm)(i): p > n+1 violated";
            else if (p < np2) err << "(pqm)(i): m(n+2-p) < n+2 violated (m(n+2-p) = " << m * (np2 - p) << ")";
            else err << "(pqm)(ii): unreachable";
        } else if (p == q) {
            err << "(pqm)(iii): p = q > n+2 violated (p = " << p << ")";
        } else if (p >= q) {
            err << "(pqm)(iv): p < q violated";
        } else if (!(q > np2)) {
            err << "(pqm)(iv): q > n+2 violated";
        } else if (!(p > n + 1.0)) {
            err << "(pqm)(iv): p > n+1 violated";
        } else {
            err << "(pqm)(iv): m q (n+2-p) < (n+2)(q-p) violated (lhs = " << m * q * (np2 - p)
                << ", rhs = " << np2 * (q - p) << ")";
        }
        throw ConfigError(err.str());
    }
    throw ConfigError("EquationSpec: m < 1 is not admissible");
}

}  // namespace pucci
