#pragma once

// Manufactured-solution convergence studies for the elliptic and Rothe solvers.
//
// Exact solution  s(t) * X  with  X = cos(pi x + c1) cos(pi y + c2) cos(pi z + c3)
// on the unit cube, a = 1 + z/2, b = 1, alpha = 2, beta = 1. Forcing and Robin
// data are derived in closed form.

#include <string>
#include <vector>

#include "moist/rothe.hpp"

namespace moist {

struct LadderResult {
  std::vector<int> levels;     // cells per axis, or step counts
  std::vector<double> errors;  // discrete L2 error
  std::vector<double> orders;  // log2 ratios of consecutive errors
  double min_order() const;
  std::string to_text(const std::string& label) const;
};

/// Elliptic solve of the steady problem on n^3 grids.
LadderResult mms_elliptic_ladder(const std::vector<int>& sizes, const EllipticOptions& opts = {});

/// Rothe march of the steady manufactured solution from u0 = X, on n^3 grids.
LadderResult mms_parabolic_spatial_ladder(const std::vector<int>& sizes, int N, double horizon,
                                          const EllipticOptions& opts = {});

/// Rothe march of e^{-t} X with time-dependent Robin data on a fixed n^3 grid,
/// error at the final time for each step count.
LadderResult mms_temporal_ladder(int n, const std::vector<int>& steps, double horizon, const EllipticOptions& opts = {});

/// Problem set up for the manufactured solution with time factor exp(-decay * t).
LinearParabolicProblem mms_problem(int n, double decay, double horizon);

}  // namespace moist
