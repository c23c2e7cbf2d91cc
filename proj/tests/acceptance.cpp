// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed by the criteria, not tuned to the results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "rsk/assignment.hpp"
#include "rsk/experiments.hpp"
#include "rsk/kernels.hpp"
#include "rsk/linalg.hpp"
#include "rsk/metrics.hpp"
#include "rsk/rotation.hpp"
#include "rsk/transport.hpp"

namespace {

using namespace rsk;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void check(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ActivationMatrix random_frob(std::size_t m, std::size_t n, Rng& rng) {
  return preprocess(ActivationMatrix(rng.normal_matrix(m, n)), Preprocessing::kCenteredFrobUnit);
}

// 1. Three-network score table.
Outcome fig3a_table() {
  Outcome o;
  const Fig3aNetworks f = build_fig3a_networks();
  const struct {
    const char* name;
    double got, want;
  } rows[] = {
      {"s_semi(X,Y)", semi_matching_score(correlations(f.x, f.y)), 0.0},
      {"s_semi(X,Z)", semi_matching_score(correlations(f.x, f.z)), 1.0},
      {"s_semi(Y,Z)", semi_matching_score(correlations(f.y, f.z)), 1.0},
      {"s_R(X,Z)", rectangular_matching_score(correlations(f.x, f.z)), 1.0},
      {"s_T(X,Y)", soft_matching_correlation(f.x, f.y), 0.0},
      {"s_T(X,Z)", soft_matching_correlation(f.x, f.z), 0.5},
      {"s_T(Y,Z)", soft_matching_correlation(f.y, f.z), 0.5},
  };
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, std::abs(r.got - r.want));
    check(o, std::abs(r.got - r.want) <= 1e-9, std::string(r.name) + fmt(" = %.17g, want %g", r.got, r.want));
  }
  if (o.pass) o.detail = fmt("7 scores, max error %.3g", worst);
  return o;
}

// 2. d_P = √N·d_T for equal sizes.
Outcome sqrt_n_identity() {
  Outcome o;
  Rng rng(2002);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(11), m = 5 + rng.below(36);
    const ActivationMatrix x = random_frob(m, n, rng), y = random_frob(m, n, rng);
    const double dp = one_to_one_matching_distance(x, y);
    const double dt = soft_matching_distance(x, y);
    const double rel = std::abs(dp - std::sqrt(static_cast<double>(n)) * dt) / std::max(dp, 1e-300);
    worst = std::max(worst, rel);
    check(o, rel <= 1e-8, fmt("pair %g: relative gap %.3g", t, rel));
  }
  if (o.pass) o.detail = fmt("50 pairs, max relative gap %.3g", worst);
  return o;
}

// 3. Alignment residual with Q = V·Uᵀ equals the nuclear-norm formula.
Outcome procrustes_equivalence() {
  Outcome o;
  Rng rng(3003);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(12), m = 3 + rng.below(38);
    const ActivationMatrix x = random_frob(m, n, rng), y = random_frob(m, n, rng);
    const ProcrustesAlignment a = procrustes_alignment(x, y);
    const double residual = frobenius_norm(x.data() - y.data() * a.q.matrix());
    const double gap = std::abs(residual - procrustes_distance(x, y));
    worst = std::max(worst, gap);
    check(o, gap <= 1e-8, fmt("pair %g: gap %.3g", t, gap));
  }
  if (o.pass) o.detail = fmt("50 pairs, max gap %.3g", worst);
  return o;
}

// 4. Assignment solvers against enumeration.
Outcome assignment_exactness() {
  Outcome o;
  Rng rng(4004);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(7);
    const Matrix c = rng.normal_matrix(n, n);
    const double got = solve_lap_min_cost(CostMatrix{c}).objective;
    const double want = oracle::brute_force_min_assignment(c);
    const double gap = std::abs(got - want);
    worst = std::max(worst, gap);
    check(o, gap <= 1e-12, fmt("square case %g: gap %.3g", t, gap));
  }
  for (int t = 0; t < 200; ++t) {
    const std::size_t nx = 1 + rng.below(4);
    const std::size_t ny = nx + rng.below(8 - nx);
    const Matrix r = rng.normal_matrix(nx, ny);
    const double got = rectangular_matching(CorrelationMatrix{r}).objective;
    const double want = oracle::brute_force_max_injective(r) / static_cast<double>(nx);
    const double gap = std::abs(got - want);
    worst = std::max(worst, gap);
    check(o, gap <= 1e-12, fmt("rectangular case %g: gap %.3g", t, gap));
  }
  if (o.pass) o.detail = fmt("200 square + 200 rectangular, max gap %.3g", worst);
  return o;
}

// 5. Network simplex against a dense tableau simplex.
Outcome transport_exactness() {
  Outcome o;
  Rng rng(5005);
  double worst_obj = 0.0, worst_marg = 0.0, worst_perm = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t nx = 1 + rng.below(8);
    const std::size_t ny = t % 4 == 0 ? nx : 1 + rng.below(8);
    Matrix c = rng.normal_matrix(nx, ny);
    if (t % 5 == 0) {
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) c(i, j) = static_cast<double>(rng.below(3));
    }
    const TransportSolution s = solve_uniform_transport(c, Objective::kMinimize);
    const double gap = std::abs(s.objective - oracle::dense_simplex_transport(c));
    worst_obj = std::max(worst_obj, gap);
    check(o, gap <= 1e-8, fmt("case %g: objective gap %.3g", t, gap));

    const Matrix& p = s.plan.p;
    for (std::size_t i = 0; i < nx; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < ny; ++j) {
        row += p(i, j);
        check(o, p(i, j) >= 0.0, fmt("case %g: negative entry", t));
      }
      worst_marg = std::max(worst_marg, std::abs(row - 1.0 / nx));
    }
    for (std::size_t j = 0; j < ny; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < nx; ++i) col += p(i, j);
      worst_marg = std::max(worst_marg, std::abs(col - 1.0 / ny));
    }
    check(o, worst_marg <= 1e-9, fmt("case %g: marginal error %.3g", t, worst_marg));

    if (nx == ny) {
      // N·P must be within 1e-9 of a permutation matrix.
      std::vector<int> row_ones(nx, 0), col_ones(nx, 0);
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
          const double v = static_cast<double>(nx) * p(i, j);
          const double nearest = v > 0.5 ? 1.0 : 0.0;
          worst_perm = std::max(worst_perm, std::abs(v - nearest));
          if (nearest == 1.0) ++row_ones[i], ++col_ones[j];
        }
      bool is_perm = worst_perm <= 1e-9;
      for (std::size_t k = 0; k < nx; ++k) is_perm = is_perm && row_ones[k] == 1 && col_ones[k] == 1;
      check(o, is_perm, fmt("case %g: N*P is not a permutation (%.3g)", t, worst_perm));
    }
  }
  if (o.pass) {
    o.detail = fmt("100 problems, objective gap %.3g, marginal error %.3g, permutation error %.3g", worst_obj,
                   worst_marg, worst_perm);
  }
  return o;
}

// 6. d_T is a metric on heterogeneous sizes, blind to unit order.
Outcome metric_axioms() {
  Outcome o;
  Rng rng(6006);
  double sym = 0.0, tri = 0.0, ident = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 5 + rng.below(30);
    const ActivationMatrix s[3] = {random_frob(m, 1 + rng.below(12), rng), random_frob(m, 1 + rng.below(12), rng),
                                   random_frob(m, 1 + rng.below(12), rng)};
    double d[3][3] = {};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) d[a][b] = soft_matching_distance(s[a], s[b]);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        sym = std::max(sym, std::abs(d[a][b] - d[b][a]));
        tri = std::max(tri, d[a][b] - d[a][3 - a - b] - d[3 - a - b][b]);
      }
    const std::vector<std::size_t> perm = rng.permutation(s[0].units());
    Matrix moved(m, s[0].units());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < s[0].units(); ++j) moved(i, j) = s[0].data()(i, perm[j]);
    ident = std::max(ident, soft_matching_distance(
                                s[0], preprocess(ActivationMatrix(moved), Preprocessing::kCenteredFrobUnit)));
  }
  check(o, sym <= 1e-9, fmt("symmetry violation %.3g", sym));
  check(o, tri <= 1e-8, fmt("triangle violation %.3g", tri));
  check(o, ident <= 1e-9, fmt("d(x, x*perm) = %.3g", ident));
  if (o.pass) o.detail = fmt("100 triples, symmetry %.3g, triangle %.3g, permutation %.3g", sym, tri, ident);
  return o;
}

// 7. exp/log round trip, endpoints, and half angles.
Outcome rotation_machinery() {
  Outcome o;
  Rng rng(7007);
  double round_trip = 0.0, endpoints = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(15);
    const OrthogonalMatrix q = sample_haar_special_orthogonal(n, rng);
    round_trip = std::max(round_trip, max_abs_diff(matrix_exp(so_log(q)), q.matrix()));
    endpoints = std::max(endpoints, max_abs_diff(fractional_orthogonal_power(q, 0.0).matrix(), Matrix::identity(n)));
    endpoints = std::max(endpoints, max_abs_diff(fractional_orthogonal_power(q, 1.0).matrix(), q.matrix()));
  }
  check(o, round_trip <= 1e-8, fmt("exp(log Q) error %.3g", round_trip));
  check(o, endpoints <= 1e-8, fmt("endpoint error %.3g", endpoints));

  // Block diagonal rotation by θ₁ ⊕ θ₂; the half power rotates by θ₁/2 ⊕ θ₂/2.
  double half = 0.0;
  for (double a : {0.3, 1.1, 2.0, 3.0}) {
    const double b = 0.5 * a + 0.2;
    auto block = [](double t1, double t2) {
      Matrix r(4, 4);
      r(0, 0) = std::cos(t1), r(0, 1) = -std::sin(t1), r(1, 0) = std::sin(t1), r(1, 1) = std::cos(t1);
      r(2, 2) = std::cos(t2), r(2, 3) = -std::sin(t2), r(3, 2) = std::sin(t2), r(3, 3) = std::cos(t2);
      return r;
    };
    const OrthogonalMatrix q = OrthogonalMatrix::special(block(a, b));
    half = std::max(half, max_abs_diff(fractional_orthogonal_power(q, 0.5).matrix(), block(a / 2, b / 2)));
  }
  // "Exact" read as agreement to a few ulps of unit-magnitude entries.
  check(o, half <= 1e-14, fmt("half-angle error %.3g", half));
  if (o.pass) o.detail = fmt("round trip %.3g, endpoints %.3g, half angle %.3g", round_trip, endpoints, half);
  return o;
}

// 8. Rotation sweep on self-comparison.
Outcome rotation_sweep_contrast() {
  Outcome o;
  Rng rng(8008);
  const Matrix raw = rng.normal_matrix(200, 32);
  RotationSweepConfig cfg;
  cfg.alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
  cfg.samples = 20;
  cfg.seed = 8;
  cfg.metric = MetricKind::kSoftCorrelation;
  const ActivationMatrix unit = preprocess(ActivationMatrix(raw), Preprocessing::kCenteredUnitColumns);
  const SweepResult soft = rotation_sweep(unit, unit, cfg);
  cfg.metric = MetricKind::kProcrustes;
  const ActivationMatrix frob = preprocess(ActivationMatrix(raw), Preprocessing::kCenteredFrobUnit);
  const SweepResult proc = rotation_sweep(frob, frob, cfg);

  const double start = soft.mean.front(), end = soft.mean.back();
  double spread = 0.0;
  for (const SweepSample& s : proc.samples)
    for (double v : s.values) spread = std::max(spread, std::abs(v - s.values.front()));
  check(o, std::abs(start - 1.0) <= 1e-9, fmt("s_T at alpha=0 is %.17g", start));
  check(o, start - end >= 0.2, fmt("s_T drop %.4f < 0.2", start - end));
  check(o, spread <= 1e-8, fmt("procrustes spread %.3g", spread));
  if (o.pass) {
    o.detail = fmt("s_T %.6f -> %.6f", start, end) + fmt(" (sd %.4f), procrustes spread %.3g", soft.stddev.back(), spread);
  }
  return o;
}

// 9. Linear predictivity and the ridge solver.
Outcome predictivity() {
  Outcome o;
  Rng rng(9009);
  const Matrix x = rng.normal_matrix(300, 12);
  const Matrix w = rng.normal_matrix(12, 5);
  const PredictivityResult clean = linear_predictivity(ActivationMatrix(x), ActivationMatrix(x * w), {});
  check(o, clean.mean_r >= 0.999, fmt("noiseless mean R %.6f", clean.mean_r));

  const PredictivityResult noise =
      linear_predictivity(ActivationMatrix(x), ActivationMatrix(rng.normal_matrix(300, 5)), {});
  const double bound = 3.0 / std::sqrt(static_cast<double>(noise.test_rows));
  check(o, std::abs(noise.mean_r) <= bound, fmt("noise mean R %.4f exceeds %.4f", noise.mean_r, bound));

  // Normal equations with an unpenalized intercept column, solved by Gaussian elimination.
  const Matrix y = x * w + rng.normal_matrix(300, 5);
  double coef_gap = 0.0;
  for (double penalty : ridge_penalty_grid()) {
    const RidgeModel m = ridge_fit(x, y, penalty);
    Matrix a(300, 13);
    for (std::size_t i = 0; i < 300; ++i) {
      for (std::size_t j = 0; j < 12; ++j) a(i, j) = x(i, j);
      a(i, 12) = 1.0;
    }
    Matrix gram = oracle::naive_product(a.transpose(), a);
    for (std::size_t j = 0; j < 12; ++j) gram(j, j) += penalty;
    const Matrix sol = oracle::gaussian_solve(gram, oracle::naive_product(a.transpose(), y));
    for (std::size_t t = 0; t < 5; ++t) {
      for (std::size_t j = 0; j < 12; ++j) coef_gap = std::max(coef_gap, std::abs(m.weights(j, t) - sol(j, t)));
      coef_gap = std::max(coef_gap, std::abs(m.intercepts[t] - sol(12, t)));
    }
  }
  check(o, coef_gap <= 1e-8, fmt("ridge coefficient gap %.3g", coef_gap));

  const std::vector<double> g = ridge_penalty_grid();
  bool grid_ok = g.size() == 8 && g.front() == 1e-4 && g.back() == 1e4;
  double ratio_gap = 0.0;
  for (std::size_t k = 2; grid_ok && k < g.size(); ++k) {
    ratio_gap = std::max(ratio_gap, std::abs(std::log10(g[k] / g[k - 1]) - std::log10(g[1] / g[0])));
  }
  check(o, grid_ok && ratio_gap <= 1e-12, fmt("penalty grid malformed (ratio gap %.3g)", ratio_gap));
  if (o.pass) {
    o.detail = fmt("noiseless R %.6f, noise R %.4f", clean.mean_r, noise.mean_r) +
               fmt(" (bound %.4f), ridge gap %.3g", bound, coef_gap);
  }
  return o;
}

// 10. One 500×500 soft matching solve at M = 1000.
Outcome performance() {
  Outcome o;
  Rng rng(10010);
  const ActivationMatrix x = random_frob(1000, 500, rng), y = random_frob(1000, 500, rng);
  const auto t0 = std::chrono::steady_clock::now();
  const TransportSolution s = soft_matching_distance_solution(x, y);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  check(o, secs < 30.0, fmt("took %.2f s", secs));
  o.detail = fmt("measured %.3f s, %g pivots", secs, static_cast<double>(s.iterations)) +
             fmt(", d_T = %.6f", std::sqrt(s.objective));
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {
      fig3a_table,         sqrt_n_identity,    procrustes_equivalence, assignment_exactness, transport_exactness,
      metric_axioms,       rotation_machinery, rotation_sweep_contrast, predictivity,        performance,
  };
  std::printf("kernels: %s\n", std::string(rsk::kernels::backend_name(rsk::kernels::active().backend)).c_str());
  int failures = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
