#pragma once

#include "pucci/grid.hpp"
#include "pucci/pucci_core.hpp"

namespace pucci {

/// Resamples u through a scaling map: out(x,t) = amplitude * u(map(x,t)) on the
/// target grid. Every mapped node must land inside the hull of u's grid (up to
/// a small snap tolerance); otherwise ContractViolation.
GridFunction apply_scaling(const ScalingMap& map, const GridFunction& u,
                           const SpaceTimeGrid& target);

/// The grid whose image under the map is `source`: same node counts, box pulled
/// back through the map. apply_scaling on this grid visits exactly the source
/// nodes, which makes lattice-aligned audits exact.
SpaceTimeGrid pullback_grid(const ScalingMap& map, const SpaceTimeGrid& source);

/// Induced problem for the rescaled unknown v(x,t) = amplitude * u(map(x,t)):
///   mu'(x,t) = amplitude^(1-m) * r^(2-m) * mu(map(x,t))
///   f'(x,t)  = amplitude * r^2 * f(map(x,t))
/// with branch, ellipticity pair and exponents unchanged. If u solves the
/// equation then v solves the transformed one.
EquationSpec transform_spec(const ScalingMap& map, const EquationSpec& spec);

}  // namespace pucci
