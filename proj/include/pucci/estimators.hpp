#pragma once

#include <map>
#include <string>
#include <vector>

#include "pucci/geometry.hpp"
#include "pucci/norms.hpp"
#include "pucci/solver.hpp"

namespace pucci {

/// Uniform result shape for the quantitative checkers. `fitted` holds the
/// measured constants and diagnostics, `assumed` the tolerances and exponents
/// they were measured against, `table` an optional curve (radius/oscillation,
/// level/measure, ...). Serialization lives with the report writer.
struct EstimateReport {
    std::string kind;
    bool pass = false;
    std::string witness;  // first failing check, or a short note
    std::map<std::string, double> fitted;
    std::map<std::string, double> assumed;
    std::vector<std::array<double, 2>> table;
    std::string table_name;
};

/// Maximum-principle check for approximate subsolutions of the minus-branch
/// equation on its grid box: verifies the residual audit, then fits
///   C = (sup u - sup boundary u+) / (d^{2-(n+2)/p} ||f||_{L^p})
/// together with the variant restricted to the contact-like set {u > sup
/// boundary u+}. Zero source with positive interior excess raises the
/// comparison-violation flag and fails. Also reports the interior
/// W^{2,1}_p-to-source ratio as a diagnostic.
EstimateReport abp_check(const GridFunction& u, const EquationSpec& spec,
                         double tol_factor = 10.0);

/// Superlinear variant (m > 1, finite q): fits the excess against
///   (1 + ||f||_p^{(m-1)q} ||mu||_q^q)^{(p-1)/p} ||f||_p
/// and reports the small-regime product ||mu||_q ||f||_p^{m-1}.
EstimateReport abp_superlinear_check(const GridFunction& u, const EquationSpec& spec,
                                     double tol_factor = 10.0);

/// Greedy maximal partition of the time interval of `grid.box` into slabs with
/// ||mu||_{L^q(slab)} <= delta_hat each (left endpoints open). Throws
/// ContractViolation when a single quadrature slice already exceeds delta_hat.
struct TimePartition {
    std::vector<double> cuts;  // right endpoints, last == t_top
    int count = 0;
    double delta_hat = 0.0;
    double total_norm = 0.0;     // ||mu||_{L^q} over the whole box
    bool count_bound_ok = false; // count <= 1 + (total/delta_hat)^q
};
TimePartition time_partition(const ScalarField& mu, double q, double delta_hat,
                             const SpaceTimeGrid& grid);

/// Measure-to-infimum bound for a family of refinements of one nonnegative
/// supersolution of the plus-branch equation:
///   C0(eps) = (integral over J1 of u^eps)^{1/eps} / (inf over J2 of u + ||f||_p).
/// Scans eps over eps0_grid, keeps the largest value whose fitted constant is
/// stable (factor <= 2) across the refinement levels, and audits first-order
/// homogeneity of the quotient under u -> tau u, f -> tau f.
EstimateReport weak_harnack_report(const std::vector<GridFunction>& levels,
                                   const EquationSpec& spec, const std::vector<double>& eps0_grid,
                                   double tol_factor = 10.0);

/// Superlevel-measure decay over J1: measures m(s) = |{u > s}| on a geometric
/// grid of levels, fits m(s) ~ A0 s^{-beta0} by least squares over the
/// informative levels (0 < m < |J1|) and inflates A0 to a true envelope.
/// Fewer than 3 informative levels flags the fit degenerate (step-like field).
EstimateReport distribution_decay(const GridFunction& u, int points = 24);

/// Oscillation-decay fit on the shrinking boxes Q_r, r = 1, 10^-1, 10^-2, ...:
/// omega(r) = sup - inf over Q_r nodes; the recursion factor
///   gamma = max_j (omega(r_{j+1}) - r_j^{alpha0})+ / omega(r_j)
/// converts to alpha = min(-log10 gamma, alpha0) with alpha0 = 2 - (n+2)/p.
/// Needs at least 3 usable radii at the grid resolution, else ContractViolation.
EstimateReport holder_report(const GridFunction& u, const EquationSpec& spec,
                             int max_decades = 3, std::uint64_t seminorm_seed = 77);

/// Local maximum principle for subsolutions of the minus-branch equation:
///   C3 = sup over J3 of u / (||u+||_{L^{eps0}(J1)} + ||f||_{L^p(Q)}).
EstimateReport local_max_report(const GridFunction& u, const EquationSpec& spec, double eps0,
                                double tol_factor = 10.0);

/// Full Harnack quotient for nonnegative solutions: u must pass the
/// supersolution audit under `super_spec` (plus branch) and the subsolution
/// audit under `sub_spec` (minus branch);
///   C4 = sup over J3 of u / (inf over J2 of u + ||f||_{L^p(Q)})
/// with the source norm taken from super_spec.
EstimateReport harnack_report(const GridFunction& u, const EquationSpec& super_spec,
                              const EquationSpec& sub_spec, double tol_factor = 10.0);

/// Parameters of the doubling recursion used by the unboundedness argument:
///   alpha = 2 (2 A0)^{1/beta0},  nu = alpha/(alpha-1),
///   ell_j = 2 (2^{beta0+1} A0 nu^{-j beta0})^{1/(n+2)}  (geometric in j),
///   n0 = least level with sum_{j >= n0} ell_j <= 1/4.
struct BlowupParams {
    double A0 = 2.0;
    double beta0 = 0.5;
    int n = 1;

    void require_valid() const;
    double alpha() const;
    double nu() const;
    double ell(int j) const;
    double tail(int from) const;  // closed-form geometric tail sum_{j>=from} ell_j
    int n0() const;
};

struct ChaseStep {
    std::array<double, 3> x{};
    double t = 0.0;
    int level = 0;       // recursion level j
    double value = 0.0;  // field value certifying >= nu^{level-1}
    bool inside_safe_box = false;  // [-3/4,3/4]^n x [1/8,1/2]
};

struct ChaseResult {
    std::vector<ChaseStep> trace;
    bool terminated_below_threshold = false;  // recursion broke: no node beat nu^j
    bool exited_domain = false;               // a chase box left the grid hull
};

/// Follows the doubling recursion on a sampled field: from a start point in
/// the closure of J3 with v >= nu^{n0-1}, repeatedly takes the argmax node in
/// the box of half-width ell_j and depth ell_j^2/10 below the current point.
/// A bounded field must terminate; the trace records each certified level.
ChaseResult blowup_chase(const GridFunction& v, const BlowupParams& params,
                         const std::array<double, 3>& start_x, double start_t);

}  // namespace pucci
