#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tlkit {

struct LadSolution {
  std::vector<double> coef;
  double objective = 0.0;  // sum_i |y_i - A_i coef|
  double dual_objective = 0.0;
  std::size_t iterations = 0;
  std::size_t bland_iterations = 0;
};

// Least absolute deviations: minimize sum_i |y_i - A_i c| over c, A row-major m x f.
//
// Solved through its LP dual, max y.mu s.t. A^T mu = 0, |mu_i| <= 1, with
// lambda = mu + 1 in [0, 2] so every variable is bounded. Revised simplex with a
// dense basis inverse (f x f): phase 1 on artificials, then Dantzig pricing with
// lowest-index ties, switching to Bland's rule after a run of degenerate pivots.
// The simplex multipliers at the optimum are the regression coefficients.
LadSolution solve_lad(std::span<const double> A, std::size_t m, std::size_t f,
                      std::span<const double> y);

}  // namespace tlkit
