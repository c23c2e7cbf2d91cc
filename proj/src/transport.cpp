#include "rsk/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rsk/error.hpp"

namespace rsk {

namespace {

// Primal network simplex for the uncapacitated bipartite transportation
// problem, with an artificial root node joined to every node by a big-M
// arc to form the initial strongly feasible tree.
//
// Node layout: sources [0, nx), sinks [nx, nx + ny), root nx + ny.
// Arc layout: real arc i·ny + j (source i → sink j), then one artificial
// arc per source (source → root) and per sink (root → sink).
class NetworkSimplex {
 public:
  NetworkSimplex(const Matrix& cost, bool maximize)
      : nx_(static_cast<int>(cost.rows())),
        ny_(static_cast<int>(cost.cols())),
        nodes_(nx_ + ny_ + 1),
        root_(nx_ + ny_),
        real_arcs_(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)),
        arcs_(real_arcs_ + static_cast<std::size_t>(nx_ + ny_)) {
    cost_.resize(arcs_);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t e = 0; e < real_arcs_; ++e) {
      const double c = maximize ? -cost.data()[e] : cost.data()[e];
      cost_[e] = c;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    // Shifting every real arc by the same constant changes the objective by
    // that constant times the total mass and leaves reduced costs intact.
    for (std::size_t e = 0; e < real_arcs_; ++e) cost_[e] -= lo;
    cost_range_ = hi - lo;
    const double art = (cost_range_ + 1.0) * static_cast<double>(nodes_);
    for (std::size_t e = real_arcs_; e < arcs_; ++e) cost_[e] = art;
    eps_ = 1e-11 * (cost_range_ + 1.0);

    flow_.assign(arcs_, 0);
    in_tree_.assign(arcs_, 0);
    parent_.assign(nodes_, kNone);
    pred_.assign(nodes_, 0);
    pred_up_.assign(nodes_, 0);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    first_child_.assign(nodes_, kNone);
    next_sib_.assign(nodes_, kNone);
    prev_sib_.assign(nodes_, kNone);

    for (int i = 0; i < nx_; ++i) {
      const std::size_t e = real_arcs_ + static_cast<std::size_t>(i);
      flow_[e] = ny_;
      attach(i, root_, e, true);
      pi_[i] = -art;
    }
    for (int j = 0; j < ny_; ++j) {
      const int node = nx_ + j;
      const std::size_t e = real_arcs_ + static_cast<std::size_t>(nx_ + j);
      flow_[e] = nx_;
      attach(node, root_, e, false);
      pi_[node] = art;
    }
    for (int u = 0; u < root_; ++u) depth_[u] = 1;

    block_size_ = std::max<std::size_t>(
        10, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs_))));
    degenerate_limit_ = 50ull * static_cast<std::uint64_t>(nx_ + ny_);
    pivot_cap_ = std::max<std::uint64_t>(1'000'000, 200ull * arcs_);
  }

  void run() {
    // Price with incrementally maintained potentials, then certify with
    // potentials recomputed from the tree; resume if certification fails.
    for (int round = 0; round < 8; ++round) {
      pivot_loop();
      recompute_potentials();
      if (min_reduced_cost() >= -eps_) return;
    }
    throw SolverError("transport: basis failed dual certification after repeated refresh");
  }

  TransportSolution solution(const Matrix& original) const {
    for (std::size_t e = real_arcs_; e < arcs_; ++e) {
      if (flow_[e] != 0) throw SolverError("transport: artificial arc carries flow at optimum");
    }
    const double total = static_cast<double>(nx_) * static_cast<double>(ny_);
    TransportSolution out;
    out.plan.p = Matrix(static_cast<std::size_t>(nx_), static_cast<std::size_t>(ny_));
    double objective = 0.0;
    for (std::size_t e = 0; e < real_arcs_; ++e) {
      if (flow_[e] == 0) continue;
      const double mass = static_cast<double>(flow_[e]) / total;
      out.plan.p.data()[e] = mass;
      objective += mass * original.data()[e];
      ++out.positive_entries;
    }
    out.objective = objective;
    out.iterations = iterations_;
    out.degenerate_pivots = degenerate_total_;
    out.bland_pivots = bland_total_;
    out.status = out.positive_entries < static_cast<std::size_t>(nx_ + ny_ - 1)
                     ? TransportStatus::kDegenerateOptimal
                     : TransportStatus::kOptimal;
    double violation = 0.0;
    for (std::size_t e = 0; e < real_arcs_; ++e) violation = std::max(violation, -reduced(e));
    out.max_dual_violation = violation;
    return out;
  }

 private:
  static constexpr int kNone = -1;

  int source(std::size_t e) const {
    if (e < real_arcs_) return static_cast<int>(e / static_cast<std::size_t>(ny_));
    const int k = static_cast<int>(e - real_arcs_);
    return k < nx_ ? k : root_;
  }
  int target(std::size_t e) const {
    if (e < real_arcs_) return nx_ + static_cast<int>(e % static_cast<std::size_t>(ny_));
    const int k = static_cast<int>(e - real_arcs_);
    return k < nx_ ? root_ : k;
  }
  double reduced(std::size_t e) const { return cost_[e] + pi_[source(e)] - pi_[target(e)]; }

  void add_child(int p, int c) {
    prev_sib_[c] = kNone;
    next_sib_[c] = first_child_[p];
    if (first_child_[p] != kNone) prev_sib_[first_child_[p]] = c;
    first_child_[p] = c;
  }
  void remove_child(int p, int c) {
    if (prev_sib_[c] != kNone) {
      next_sib_[prev_sib_[c]] = next_sib_[c];
    } else {
      first_child_[p] = next_sib_[c];
    }
    if (next_sib_[c] != kNone) prev_sib_[next_sib_[c]] = prev_sib_[c];
    next_sib_[c] = prev_sib_[c] = kNone;
  }
  void attach(int node, int parent, std::size_t arc, bool up) {
    parent_[node] = parent;
    pred_[node] = arc;
    pred_up_[node] = up ? 1 : 0;
    in_tree_[arc] = 1;
    add_child(parent, node);
  }

  // Block search: scan blocks of arcs cyclically and take the most negative
  // reduced cost of the first block that has one. Exact ties go to the
  // lower arc index, i.e. lowest (row, col).
  bool find_entering_block(std::size_t& entering) {
    double best = -eps_;
    bool found = false;
    std::size_t scanned_in_block = 0;
    for (std::size_t count = 0; count < arcs_; ++count) {
      const std::size_t e = next_arc_;
      next_arc_ = next_arc_ + 1 == arcs_ ? 0 : next_arc_ + 1;
      if (!in_tree_[e]) {
        const double r = reduced(e);
        if (r < best || (found && r == best && e < entering)) {
          best = r;
          entering = e;
          found = true;
        }
      }
      if (++scanned_in_block == block_size_) {
        if (found) return true;
        scanned_in_block = 0;
      }
    }
    return found;
  }

  // Bland's rule: lowest-index eligible arc.
  bool find_entering_bland(std::size_t& entering) const {
    for (std::size_t e = 0; e < arcs_; ++e) {
      if (!in_tree_[e] && reduced(e) < -eps_) {
        entering = e;
        return true;
      }
    }
    return false;
  }

  int find_join(int a, int b) const {
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    return a;
  }

  void pivot_loop() {
    std::uint64_t degenerate_run = 0;
    for (;;) {
      const bool bland = degenerate_run > degenerate_limit_;
      std::size_t in_arc = 0;
      if (!(bland ? find_entering_bland(in_arc) : find_entering_block(in_arc))) return;
      if (iterations_ == pivot_cap_) {
        throw SolverError("transport: pivot cap " + std::to_string(pivot_cap_) +
                          " reached (" + std::to_string(degenerate_total_) +
                          " degenerate pivots, " + std::to_string(bland_total_) +
                          " under Bland's rule)");
      }
      ++iterations_;
      if (bland) ++bland_total_;

      const int first = source(in_arc);
      const int second = target(in_arc);
      const int join = find_join(first, second);

      // Flow enters at `first` through the cycle join → first → second →
      // join. Leaving arc: the last blocking arc in that orientation, which
      // keeps the tree strongly feasible.
      std::int64_t delta = std::numeric_limits<std::int64_t>::max();
      int u_out = kNone;
      bool out_on_first_side = true;
      for (int u = first; u != join; u = parent_[u]) {
        if (pred_up_[u] && flow_[pred_[u]] < delta) {
          delta = flow_[pred_[u]];
          u_out = u;
          out_on_first_side = true;
        }
      }
      for (int u = second; u != join; u = parent_[u]) {
        if (!pred_up_[u] && flow_[pred_[u]] <= delta) {
          delta = flow_[pred_[u]];
          u_out = u;
          out_on_first_side = false;
        }
      }
      if (u_out == kNone) throw SolverError("transport: unbounded cycle (internal error)");

      if (delta > 0) {
        flow_[in_arc] += delta;
        for (int u = first; u != join; u = parent_[u]) flow_[pred_[u]] += pred_up_[u] ? -delta : delta;
        for (int u = second; u != join; u = parent_[u]) flow_[pred_[u]] += pred_up_[u] ? delta : -delta;
        degenerate_run = 0;
      } else {
        ++degenerate_run;
        ++degenerate_total_;
      }

      const int u_in = out_on_first_side ? first : second;
      const int v_in = out_on_first_side ? second : first;
      in_tree_[pred_[u_out]] = 0;
      update_tree(in_arc, u_in, v_in, u_out);
    }
  }

  // Cuts the subtree at u_out, re-roots it at u_in and hangs it below v_in
  // through the entering arc, then shifts the subtree's potentials.
  void update_tree(std::size_t in_arc, int u_in, int v_in, int u_out) {
    remove_child(parent_[u_out], u_out);
    int prev = v_in;
    std::size_t prev_arc = in_arc;
    bool prev_up = source(in_arc) == u_in;
    int cur = u_in;
    for (;;) {
      const int next = parent_[cur];
      const std::size_t next_arc = pred_[cur];
      const bool next_up = pred_up_[cur] != 0;
      if (cur != u_out) remove_child(next, cur);
      parent_[cur] = prev;
      pred_[cur] = prev_arc;
      pred_up_[cur] = prev_up ? 1 : 0;
      add_child(prev, cur);
      if (cur == u_out) break;
      prev = cur;
      prev_arc = next_arc;
      prev_up = !next_up;
      cur = next;
    }
    in_tree_[in_arc] = 1;

    const double target_pi =
        pred_up_[u_in] ? pi_[v_in] - cost_[in_arc] : pi_[v_in] + cost_[in_arc];
    const double shift = target_pi - pi_[u_in];
    stack_.clear();
    stack_.push_back(u_in);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      pi_[u] += shift;
      depth_[u] = depth_[parent_[u]] + 1;
      for (int c = first_child_[u]; c != kNone; c = next_sib_[c]) stack_.push_back(c);
    }
  }

  void recompute_potentials() {
    pi_[root_] = 0.0;
    depth_[root_] = 0;
    stack_.clear();
    for (int c = first_child_[root_]; c != kNone; c = next_sib_[c]) stack_.push_back(c);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      const int p = parent_[u];
      const double c = cost_[pred_[u]];
      pi_[u] = pred_up_[u] ? pi_[p] - c : pi_[p] + c;
      depth_[u] = depth_[p] + 1;
      for (int ch = first_child_[u]; ch != kNone; ch = next_sib_[ch]) stack_.push_back(ch);
    }
  }

  double min_reduced_cost() const {
    double m = 0.0;
    for (std::size_t e = 0; e < arcs_; ++e) {
      if (!in_tree_[e]) m = std::min(m, reduced(e));
    }
    return m;
  }

  int nx_, ny_, nodes_, root_;
  std::size_t real_arcs_, arcs_;
  std::vector<double> cost_;
  double cost_range_ = 0.0;
  double eps_ = 0.0;
  std::vector<std::int64_t> flow_;
  std::vector<char> in_tree_;
  std::vector<int> parent_;
  std::vector<std::size_t> pred_;
  std::vector<char> pred_up_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<int> first_child_, next_sib_, prev_sib_;
  std::vector<int> stack_;
  std::size_t block_size_ = 0;
  std::size_t next_arc_ = 0;
  std::uint64_t degenerate_limit_ = 0;
  std::uint64_t pivot_cap_ = 0;
  std::uint64_t iterations_ = 0;
  std::uint64_t degenerate_total_ = 0;
  std::uint64_t bland_total_ = 0;
};

constexpr double kDualTolerance = 1e-9;

}  // namespace

std::string_view to_string(TransportStatus s) noexcept {
  switch (s) {
    case TransportStatus::kOptimal: return "optimal";
    case TransportStatus::kDegenerateOptimal: return "degenerate_optimal";
  }
  return "unknown";
}

TransportSolution solve_uniform_transport(const Matrix& cost, Objective objective) {
  if (cost.rows() == 0 || cost.cols() == 0) throw DimensionError("transport: empty cost matrix");
  if (!all_finite(cost.data())) throw NumericalError("transport: non-finite cost");
  if (cost.rows() + cost.cols() >= static_cast<std::size_t>(std::numeric_limits<int>::max() / 2)) {
    throw DimensionError("transport: problem too large");
  }
  NetworkSimplex solver(cost, objective == Objective::kMaximize);
  solver.run();
  TransportSolution out = solver.solution(cost);
  if (out.max_dual_violation > kDualTolerance) {
    throw SolverError("transport: dual infeasibility " + std::to_string(out.max_dual_violation) +
                      " exceeds tolerance");
  }
  return out;
}

TransportSolution soft_matching_distance_solution(const ActivationMatrix& x,
                                                  const ActivationMatrix& y) {
  return solve_uniform_transport(squared_distance_costs(x, y), Objective::kMinimize);
}

double soft_matching_distance(const ActivationMatrix& x, const ActivationMatrix& y) {
  return std::sqrt(std::max(0.0, soft_matching_distance_solution(x, y).objective));
}

TransportSolution soft_matching_correlation_solution(const ActivationMatrix& x,
                                                     const ActivationMatrix& y) {
  return solve_uniform_transport(correlations(x, y).r, Objective::kMaximize);
}

double soft_matching_correlation(const ActivationMatrix& x, const ActivationMatrix& y) {
  return soft_matching_correlation_solution(x, y).objective;
}

}  // namespace rsk
