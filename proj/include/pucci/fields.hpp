#pragma once

#include "pucci/geometry.hpp"
#include "pucci/pucci_core.hpp"
#include "pucci/rng.hpp"

namespace pucci {

/// Time-independent power singularity strength * |x - center|^{-exponent},
/// clipped at its exact average over the grid cell of spacing cell_h that
/// contains the singular point (1d: interval average; 2d: average over the
/// equal-area disc). Keeps node quadratures finite while preserving the L^q
/// character away from the cell. Requires exponent in (0, n) so the field
/// stays spatially integrable to some power > 1.
ScalarField make_power_singularity(int n, const std::array<double, 3>& center, double exponent,
                                   double strength, double cell_h);

/// Sum of `bumps` random nonnegative C^2 space-time bumps inside the box:
/// centers uniform in the box, spatial widths in [wmin, wmax] half-widths,
/// amplitudes in (0, amplitude]. Deterministic in the rng stream.
ScalarField make_bump_sum_field(int n, const ParabolicCube& box, int bumps, double amplitude,
                                double wmin, double wmax, CounterRng rng);

}  // namespace pucci
