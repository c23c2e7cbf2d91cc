#include "rsk/assignment.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rsk/error.hpp"

namespace rsk {

// Shortest augmenting path with potentials (Kuhn-Munkres in the
// Jonker-Volgenant formulation). Rows are inserted one at a time; each
// insertion runs a Dijkstra-like search over columns using reduced costs
// c(i, j) − u(i) − v(j) ≥ 0. Column 0 is a sentinel, indices are 1-based.
AssignmentResult solve_assignment_min(const Matrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  if (n > m) {
    throw DimensionError("assignment: rows (" + std::to_string(n) + ") exceed columns (" +
                         std::to_string(m) + ")");
  }
  if (!all_finite(cost.data())) throw NumericalError("assignment: non-finite cost");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {  // strict: lowest column index wins ties
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult out;
  out.mapping.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) out.mapping[match[j] - 1] = j - 1;
  }
  for (std::size_t i = 0; i < n; ++i) out.objective += cost(i, out.mapping[i]);
  return out;
}

AssignmentResult solve_lap_min_cost(const CostMatrix& cost) {
  if (!cost.c.is_square()) {
    throw DimensionError("linear assignment requires a square cost matrix, got " +
                         std::to_string(cost.c.rows()) + "x" + std::to_string(cost.c.cols()));
  }
  return solve_assignment_min(cost.c);
}

AssignmentResult solve_assignment_max(const Matrix& score) {
  AssignmentResult r = solve_assignment_min(-1.0 * score);
  r.objective = 0.0;
  for (std::size_t i = 0; i < r.mapping.size(); ++i) r.objective += score(i, r.mapping[i]);
  return r;
}

AssignmentResult one_to_one_matching(const ActivationMatrix& x, const ActivationMatrix& y) {
  require_comparable(x, y);
  if (x.units() != y.units()) {
    throw DimensionError("one-to-one matching needs equal unit counts (" +
                         std::to_string(x.units()) + " vs " + std::to_string(y.units()) +
                         "); use soft_matching_distance for networks of different sizes");
  }
  return solve_lap_min_cost(squared_distance_costs(x, y));
}

double one_to_one_matching_distance(const ActivationMatrix& x, const ActivationMatrix& y) {
  return std::sqrt(std::max(0.0, one_to_one_matching(x, y).objective));
}

double semi_matching_score(const CorrelationMatrix& r) {
  const Matrix& s = r.r;
  if (s.rows() == 0 || s.cols() == 0) throw DimensionError("semi-matching: empty score matrix");
  double total = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double best = s(i, 0);
    for (std::size_t j = 1; j < s.cols(); ++j) best = std::max(best, s(i, j));
    total += best;
  }
  return total / static_cast<double>(s.rows());
}

AssignmentResult rectangular_matching(const CorrelationMatrix& r) {
  if (r.r.rows() > r.r.cols()) {
    throw InfeasibleError("rectangular matching needs N_y >= N_x (" + std::to_string(r.r.rows()) +
                          " > " + std::to_string(r.r.cols()) + "): there are no feasible matchings");
  }
  AssignmentResult out = solve_assignment_max(r.r);
  out.objective /= static_cast<double>(r.r.rows());
  return out;
}

double rectangular_matching_score(const CorrelationMatrix& r) {
  return rectangular_matching(r).objective;
}

}  // namespace rsk
