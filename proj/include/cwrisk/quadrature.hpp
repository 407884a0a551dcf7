#pragma once

#include <functional>
#include <vector>

namespace cwrisk {

// Adaptive Simpson integration of f over [a, b] to the given absolute
// tolerance.  The interval is pre-split at the supplied breakpoints (sorted
// or not; values outside (a, b) are ignored) so integrands with known jump
// locations converge; each piece receives a tolerance budget proportional to
// its length.  Segment endpoints are sampled a hair inside the segment
// (relative inset 1e-12), i.e. jumps placed exactly on a breakpoint are
// integrated with their one-sided limits; this floors the achievable
// accuracy near |f'| * 1e-12 * (b - a).  Throws NumericError if refinement
// hits max_depth without meeting the local budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, const std::vector<double>& breakpoints = {},
                 int max_depth = 48);

}  // namespace cwrisk
