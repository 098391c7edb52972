#pragma once

#include <span>

namespace mnls {

/// Composite Simpson on a uniform grid. An odd number of intervals is handled
/// with a 3/8 rule on the last three. Needs at least two samples.
double simpson(std::span<const double> f, double h);

/// Area of the unit sphere S^{N-1}: 2, 2*pi, 4*pi for N = 1, 2, 3.
double surface_measure(int dim);

}  // namespace mnls
