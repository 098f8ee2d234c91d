#pragma once

#include <string>

#include "json.hpp"
#include "pucci/scenario.hpp"
#include "pucci/solver.hpp"

namespace pucci {

struct RunResult {
    std::string kind;
    bool pass = false;
    nlohmann::ordered_json document;  // deterministic report body
    std::string summary;              // one console line
};

/// Executes one parsed scenario end to end. ConfigError propagates for bad
/// configuration; NumericalError for aborted numerics (unless the scenario is
/// probing for exactly that outcome); estimator-level failures come back as
/// pass = false with the report attached.
RunResult run_scenario(const Scenario& sc);

/// Parses the configuration deeply enough to surface kind, grid and equation
/// errors (ConfigError) without running any numerics.
void validate_scenario(const Scenario& sc);

/// Doubles the spatial resolution (nx -> 2(nx-1)+1) and the stored depth of a
/// scenario `factor` times; number lists named nx_list / store_list scale too.
Scenario refine_scenario(const Scenario& sc, int factor);

/// Shared scenario plumbing.
ParabolicCube box_from_scenario(const Scenario& sc, int n);
EquationSpec equation_from_scenario(const Scenario& sc, int n, const ParabolicCube& box, int nx,
                                    std::uint64_t seed);

/// CFL-planned explicit march on a box: plans the step count from the
/// coefficient bound (plus hint for superlinear runs), keeps `store_levels`
/// levels.
GridFunction march_on_box(const EquationSpec& spec, const ParabolicCube& box, int nx,
                          int store_levels, const BoundaryFn& data, double gmax_hint = 0.0,
                          SolveStats* stats = nullptr);

/// Nonnegative discrete supersolution of the plus-branch problem carrying
/// source +f: marches the same problem with the source negated, so the
/// reported residual is +2f >= 0. Boundary data must be nonnegative.
GridFunction make_supersolution(const EquationSpec& spec, const ParabolicCube& box, int nx,
                                int store_levels, const BoundaryFn& data);

/// Minus-branch counterpart: discrete subsolution with reported residual
/// -2f <= 0.
GridFunction make_subsolution(const EquationSpec& spec, const ParabolicCube& box, int nx,
                              int store_levels, const BoundaryFn& data);

}  // namespace pucci
