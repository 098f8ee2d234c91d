#pragma once

#include "pucci/grid.hpp"
#include "pucci/pucci_core.hpp"
#include "pucci/rng.hpp"

namespace pucci {

/// Quadrature/measure convention shared by every norm below: each node owns
/// its dual cell (node-centered box of size h per space axis, dt in time) and
/// a region integral sums node values weighted by the exact overlap of dual
/// cell and region. Constants integrate exactly over any axis box inside the
/// grid box; the measure of a region is reproduced exactly.
double region_measure(const SpaceTimeGrid& g, const ParabolicCube& region);

/// (integral over region of |u|^p)^(1/p), midpoint rule on dual cells.
double lp_norm(const GridFunction& u, const ParabolicCube& region, double p);

/// As lp_norm but of the positive part u+.
double lp_norm_positive_part(const GridFunction& u, const ParabolicCube& region, double p);

/// Supremum / infimum of u over the nodes inside the region (open laterals,
/// half-open time window]. Throws when no node lies inside.
double sup_over(const GridFunction& u, const ParabolicCube& region);
double inf_over(const GridFunction& u, const ParabolicCube& region);

/// |{ (x,t) in region : u >= s }| with dual-cell weights.
double superlevel_measure(const GridFunction& u, const ParabolicCube& region, double s);

/// Discrete W^{2,1}_p norm: ||u||_p + ||du/dt||_p + sum_i ||d_i u||_p +
/// sum_{i,j} ||d_ij u||_p with central differences in the interior and
/// one-sided stencils on the faces.
double w21p_norm(const GridFunction& u, const ParabolicCube& region, double p);

/// Parabolic Holder seminorm sup |u(a)-u(b)| / d(a,b)^alpha with
/// d = sqrt(|x-y|^2 + |t-s|), maximized over all adjacent node pairs plus
/// `random_pairs` seeded long-range pairs inside the region.
double holder_seminorm(const GridFunction& u, const ParabolicCube& region, double alpha,
                       CounterRng rng, int random_pairs = 4000);

/// L^q norm of a coefficient field over a box, using the same dual-cell rule
/// on the given grid. q = inf gives the max of samples.
double field_lq_norm(const ScalarField& field, const SpaceTimeGrid& g,
                     const ParabolicCube& region, double q);

/// L^p norm of `field` over the part of the region where u > threshold
/// (node-wise restriction with the usual dual-cell weights).
double field_lp_norm_superlevel(const ScalarField& field, const GridFunction& u,
                                const ParabolicCube& region, double p, double threshold);

/// Count of nodes inside the region.
std::int64_t nodes_in_region(const SpaceTimeGrid& g, const ParabolicCube& region);

}  // namespace pucci
