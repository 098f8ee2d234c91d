#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>

#include "pucci/errors.hpp"
#include "pucci/sym_matrix.hpp"

namespace pucci {

/// Ellipticity pair 0 < lambda <= Lambda.
struct PucciPair {
    double lambda;
    double Lambda;

    PucciPair(double lam, double Lam) : lambda(lam), Lambda(Lam) {
        if (!(lam > 0.0) || !(Lam >= lam))
            throw ContractViolation("PucciPair: need 0 < lambda <= Lambda");
    }
};

/// Which extremal equation a problem uses. The branch selects P+ vs P- and
/// the sign both of the gradient term and of the source in the canonical form
///   u_t + P_branch(D^2 u) + s * mu |Du|^m + s * f = 0,   s = +1 (plus) / -1 (minus).
enum class Branch { plus, minus };

inline std::string branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }
inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

/// Extremal operator value.
///   P+(X) = -lambda * sum(positive eigenvalues) - Lambda * sum(negative eigenvalues)
///   P-(X) = -Lambda * sum(positive eigenvalues) - lambda * sum(negative eigenvalues)
/// Evaluated from the spectrum; duality P+(X) = -P-(-X) holds to roundoff.
double pucci_eval(const PucciPair& pair, const SymMatrix& X, Branch branch);

/// Exact scalar rule (n = 1 and per-direction wide stencils): the operator
/// applied to a 1x1 "matrix" s.
inline double pucci_scalar(const PucciPair& pair, double s, Branch branch) {
    const double sp = s > 0.0 ? s : 0.0;
    const double sn = s < 0.0 ? -s : 0.0;
    return branch == Branch::plus ? -pair.lambda * sp + pair.Lambda * sn
                                  : -pair.Lambda * sp + pair.lambda * sn;
}

/// Space-time scalar field as a sampling callback. `label` is carried into
/// reports; `cap` (if finite) clips samples pointwise and is recorded too.
struct ScalarField {
    std::function<double(std::array<double, 3>, double)> sample;
    std::string label = "zero";
    double cap = 0.0;       // 0 = no cap
    bool has_cap = false;

    double operator()(const std::array<double, 3>& x, double t) const {
        double v = sample ? sample(x, t) : 0.0;
        if (has_cap && v > cap) v = cap;
        return v;
    }
};

ScalarField make_zero_field();
ScalarField make_constant_field(double c);

/// Problem description for one extremal equation.
struct EquationSpec {
    Branch branch = Branch::minus;
    PucciPair pair{1.0, 1.0};
    ScalarField mu = make_zero_field();   // nonnegative coefficient of |Du|^m
    double q = 0.0;                       // integrability exponent attached to mu (0 = unused)
    double m = 1.0;                       // gradient power, m >= 1
    ScalarField f = make_zero_field();    // source
    double p = 0.0;                       // integrability exponent attached to f (0 = unused)

    /// Dimension-dependent admissibility:
    ///  m = 1: q > n+2, p > (n+2)/2, p <= q.
    ///  m > 1: one of the four exponent cases must hold (see validate message).
    /// Throws ConfigError naming the violated condition.
    void validate(int n) const;
};

/// Signed gradient term s_branch * mu(x,t) * |grad|^m.
/// m < 1 is rejected; mu is sampled at (x,t).
double gradient_term(const EquationSpec& spec, std::span<const double> grad,
                     const std::array<double, 3>& x, double t);

/// Euclidean norm of a gradient given per-axis components.
double grad_norm(std::span<const double> grad);

}  // namespace pucci
