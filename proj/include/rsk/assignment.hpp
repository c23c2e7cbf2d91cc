#pragma once

#include <optional>
#include <vector>

#include "rsk/matrix.hpp"
#include "rsk/preprocess.hpp"

namespace rsk {

/// Hard matching of rows to columns. mapping[i] is the matched column of
/// row i; every row is matched and no column is used twice.
struct AssignmentResult {
  std::vector<std::size_t> mapping;
  double objective = 0.0;
};

/// Exact minimum-cost assignment of every row of `cost` to a distinct
/// column (rows ≤ cols). Shortest augmenting path with row/column
/// potentials, O(rows²·cols). The objective is Σᵢ cost(i, mapping[i])
/// summed in row order.
AssignmentResult solve_assignment_min(const Matrix& cost);

/// Square minimum-cost assignment; throws DimensionError on non-square
/// input.
AssignmentResult solve_lap_min_cost(const CostMatrix& cost);

/// Maximum-score injective matching, solved as min-cost on negated scores.
/// Returned objective is the total score (not negated).
AssignmentResult solve_assignment_max(const Matrix& score);

/// √(min over permutations of Σᵢ ‖xᵢ − y_σ(i)‖²). Throws DimensionError
/// when unit counts differ.
double one_to_one_matching_distance(const ActivationMatrix& x, const ActivationMatrix& y);
/// Same as above, returning the optimal permutation as well.
AssignmentResult one_to_one_matching(const ActivationMatrix& x, const ActivationMatrix& y);

/// (1/N_x)·Σᵢ maxⱼ r(i, j). Asymmetric by construction.
double semi_matching_score(const CorrelationMatrix& r);

/// (1/N_x)·max over injective matchings of Σᵢ r(i, σ(i)); requires
/// N_y ≥ N_x, throws InfeasibleError otherwise.
double rectangular_matching_score(const CorrelationMatrix& r);
/// Witness-returning variant; objective is the mean score.
AssignmentResult rectangular_matching(const CorrelationMatrix& r);

}  // namespace rsk
