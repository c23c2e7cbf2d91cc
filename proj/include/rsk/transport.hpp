#pragma once

#include <cstdint>

#include "rsk/matrix.hpp"
#include "rsk/preprocess.hpp"

namespace rsk {

enum class Objective { kMinimize, kMaximize };

enum class TransportStatus {
  kOptimal,
  // Optimal basis has fewer than N_x + N_y − 1 positive entries.
  kDegenerateOptimal,
};

/// Element of the transportation polytope: nonnegative, rows sum to 1/N_x,
/// columns sum to 1/N_y.
struct TransportPlan {
  Matrix p;
};

struct TransportSolution {
  TransportPlan plan;
  double objective = 0.0;  // Σ pᵢⱼ·cᵢⱼ in the caller's (unnegated) costs
  std::uint64_t iterations = 0;
  std::uint64_t degenerate_pivots = 0;
  std::uint64_t bland_pivots = 0;
  TransportStatus status = TransportStatus::kOptimal;
  // Largest dual infeasibility over real arcs, in cost units, measured
  // after recomputing potentials from the final basis.
  double max_dual_violation = 0.0;
  std::size_t positive_entries = 0;
};

/// Exact optimal transport between uniform distributions on N_x rows and
/// N_y columns of `cost`, by primal network simplex.
///
/// Supplies are integers (N_y per source, N_x per sink), so feasibility is
/// exact and only costs carry round-off. Uses strongly feasible bases with
/// block-search pricing; after 50·(N_x + N_y) consecutive degenerate pivots
/// pricing switches to Bland's rule until the objective moves. Throws
/// SolverError if the pivot cap is reached or the final basis is not
/// dual feasible within 1e-9.
TransportSolution solve_uniform_transport(const Matrix& cost, Objective objective);
inline TransportSolution solve_uniform_transport(const CostMatrix& cost, Objective objective) {
  return solve_uniform_transport(cost.c, objective);
}

std::string_view to_string(TransportStatus s) noexcept;

/// √(min over the transportation polytope of Σ pᵢⱼ‖xᵢ − yⱼ‖²).
double soft_matching_distance(const ActivationMatrix& x, const ActivationMatrix& y);
TransportSolution soft_matching_distance_solution(const ActivationMatrix& x,
                                                  const ActivationMatrix& y);

/// max over the transportation polytope of Σ pᵢⱼ xᵢᵀyⱼ. Requires a
/// unit-column preprocessing on both inputs.
double soft_matching_correlation(const ActivationMatrix& x, const ActivationMatrix& y);
TransportSolution soft_matching_correlation_solution(const ActivationMatrix& x,
                                                     const ActivationMatrix& y);

}  // namespace rsk
