#include "rsk/metrics.hpp"

#include <cmath>
#include <string>

#include "rsk/error.hpp"
#include "rsk/linalg.hpp"
#include "rsk/parallel.hpp"

namespace rsk {

std::string_view cli_name(MetricKind k) noexcept {
  switch (k) {
    case MetricKind::kSoftDistance: return "soft";
    case MetricKind::kSoftCorrelation: return "soft-corr";
    case MetricKind::kOneToOne: return "one2one";
    case MetricKind::kSemiMatching: return "semi";
    case MetricKind::kRectangular: return "rect";
    case MetricKind::kProcrustes: return "procrustes";
  }
  return "unknown";
}

std::string_view report_name(MetricKind k) noexcept {
  switch (k) {
    case MetricKind::kSoftDistance: return "soft_matching_distance";
    case MetricKind::kSoftCorrelation: return "soft_matching_correlation";
    case MetricKind::kOneToOne: return "one_to_one_matching_distance";
    case MetricKind::kSemiMatching: return "semi_matching_score";
    case MetricKind::kRectangular: return "rectangular_matching_score";
    case MetricKind::kProcrustes: return "procrustes_distance";
  }
  return "unknown";
}

MetricKind parse_metric(std::string_view s) {
  for (MetricKind k : {MetricKind::kSoftDistance, MetricKind::kSoftCorrelation,
                       MetricKind::kOneToOne, MetricKind::kSemiMatching,
                       MetricKind::kRectangular, MetricKind::kProcrustes}) {
    if (s == cli_name(k) || s == report_name(k)) return k;
  }
  throw ContractError("unknown metric '" + std::string(s) + "'");
}

bool is_distance(MetricKind k) noexcept {
  return k == MetricKind::kSoftDistance || k == MetricKind::kOneToOne ||
         k == MetricKind::kProcrustes;
}

void require_preprocessing(MetricKind k, Preprocessing p) {
  switch (k) {
    case MetricKind::kProcrustes:
      if (p != Preprocessing::kCenteredFrobUnit) {
        throw ContractError("procrustes_distance requires centered_frob_unit preprocessing, got " +
                            std::string(to_string(p)));
      }
      return;
    case MetricKind::kSoftCorrelation:
    case MetricKind::kSemiMatching:
    case MetricKind::kRectangular:
      if (!is_unit_column(p)) {
        throw ContractError(std::string(report_name(k)) +
                            " requires unit-column preprocessing, got " +
                            std::string(to_string(p)));
      }
      return;
    case MetricKind::kSoftDistance:
    case MetricKind::kOneToOne:
      return;
  }
}

namespace {

constexpr double kRadicandFailure = 1e-9;

void require_procrustes_inputs(const ActivationMatrix& x, const ActivationMatrix& y) {
  require_comparable(x, y);
  require_preprocessing(MetricKind::kProcrustes, x.preprocessing());
}

}  // namespace

double procrustes_distance(const ActivationMatrix& x, const ActivationMatrix& y) {
  require_procrustes_inputs(x, y);
  const double txx = frobenius_norm(x.data()) * frobenius_norm(x.data());
  const double tyy = frobenius_norm(y.data()) * frobenius_norm(y.data());
  const double nuc = nuclear_norm(transpose_times(x.data(), y.data()));
  const double radicand = txx + tyy - 2.0 * nuc;
  const double scale = txx + tyy;
  if (radicand < -kRadicandFailure * scale) {
    throw NumericalError("procrustes_distance: negative radicand " + std::to_string(radicand));
  }
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

ProcrustesAlignment procrustes_alignment(const ActivationMatrix& x, const ActivationMatrix& y) {
  require_comparable(x, y);
  if (x.units() != y.units()) {
    throw DimensionError("procrustes_alignment needs equal unit counts (" +
                         std::to_string(x.units()) + " vs " + std::to_string(y.units()) + ")");
  }
  const SvdResult f = svd(transpose_times(x.data(), y.data()));
  // XᵀY = U·S·Vᵀ; tr(XᵀY·Q) is maximized by Q = V·Uᵀ.
  Matrix q = f.vt.transpose() * f.u.transpose();
  const double residual = frobenius_norm(x.data() - y.data() * q);
  return ProcrustesAlignment{OrthogonalMatrix(std::move(q)), residual};
}

MetricEvaluation evaluate_metric(MetricKind k, const ActivationMatrix& x, const ActivationMatrix& y) {
  require_comparable(x, y);
  require_preprocessing(k, x.preprocessing());
  MetricEvaluation out;
  out.kind = k;
  switch (k) {
    case MetricKind::kSoftDistance: {
      TransportSolution s = soft_matching_distance_solution(x, y);
      out.value = std::sqrt(std::max(0.0, s.objective));
      out.transport = std::move(s);
      break;
    }
    case MetricKind::kSoftCorrelation: {
      TransportSolution s = soft_matching_correlation_solution(x, y);
      out.value = s.objective;
      out.transport = std::move(s);
      break;
    }
    case MetricKind::kOneToOne: {
      AssignmentResult a = one_to_one_matching(x, y);
      out.value = std::sqrt(std::max(0.0, a.objective));
      out.assignment = std::move(a);
      break;
    }
    case MetricKind::kSemiMatching:
      out.value = semi_matching_score(correlations(x, y));
      break;
    case MetricKind::kRectangular: {
      AssignmentResult a = rectangular_matching(correlations(x, y));
      out.value = a.objective;
      out.assignment = std::move(a);
      break;
    }
    case MetricKind::kProcrustes:
      out.value = procrustes_distance(x, y);
      if (x.units() == y.units()) out.alignment = procrustes_alignment(x, y).q.matrix();
      break;
  }
  return out;
}

double metric_value(MetricKind k, const ActivationMatrix& x, const ActivationMatrix& y) {
  switch (k) {
    case MetricKind::kSoftDistance:
      require_comparable(x, y);
      return soft_matching_distance(x, y);
    case MetricKind::kSoftCorrelation:
      require_comparable(x, y);
      require_preprocessing(k, x.preprocessing());
      return soft_matching_correlation(x, y);
    case MetricKind::kProcrustes:
      return procrustes_distance(x, y);
    default:
      return evaluate_metric(k, x, y).value;
  }
}

MetricReport make_report(MetricKind k, const ActivationMatrix& x, const ActivationMatrix& y) {
  MetricReport r{std::string(report_name(k)), evaluate_metric(k, x, y), x.preprocessing()};
  r.stimuli = x.stimuli();
  r.units_x = x.units();
  r.units_y = y.units();
  return r;
}

ActivationMatrix apply_nuisance(const ActivationMatrix& x, NuisanceClass nuisance, Rng& rng) {
  const std::size_t n = x.units();
  Matrix moved(x.stimuli(), n);
  if (nuisance == NuisanceClass::kPermutation) {
    const auto perm = rng.permutation(n);
    for (std::size_t i = 0; i < x.stimuli(); ++i)
      for (std::size_t j = 0; j < n; ++j) moved(i, j) = x.data()(i, perm[j]);
  } else {
    // Haar on O(N): a rotation, reflected half the time.
    Matrix q = sample_haar_special_orthogonal(n, rng).matrix();
    if (rng.uniform() < 0.5) {
      for (std::size_t i = 0; i < n; ++i) q(i, 0) = -q(i, 0);
    }
    moved = x.data() * q;
  }
  return preprocess(ActivationMatrix(std::move(moved)), x.preprocessing());
}

AxiomReport check_metric_axioms(const DistanceFunction& metric,
                                const std::vector<ActivationTriple>& instances,
                                NuisanceClass nuisance, std::uint64_t seed,
                                const AxiomTolerances& tol) {
  struct Local {
    double symmetry = 0.0, triangle = 0.0, identity = 0.0;
    std::size_t sym_fail = 0, tri_fail = 0, id_fail = 0;
  };
  std::vector<Local> locals(instances.size());
  parallel_for(instances.size(), [&](std::size_t t) {
    const ActivationTriple& tr = instances[t];
    const ActivationMatrix* m[3] = {&tr.x, &tr.y, &tr.z};
    double d[3][3] = {};
    Local& out = locals[t];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a != b) d[a][b] = metric(*m[a], *m[b]);
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const double v = std::abs(d[a][b] - d[b][a]);
        out.symmetry = std::max(out.symmetry, v);
        if (v > tol.symmetry) ++out.sym_fail;
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const int c = 3 - a - b;
        const double v = std::max(0.0, d[a][b] - d[a][c] - d[c][b]);
        out.triangle = std::max(out.triangle, v);
        if (v > tol.triangle) ++out.tri_fail;
      }
    }
    Rng rng(seed + 0x9e3779b97f4a7c15ull * (t + 1));
    for (int a = 0; a < 3; ++a) {
      const ActivationMatrix moved = apply_nuisance(*m[a], nuisance, rng);
      const double v = std::abs(metric(*m[a], moved));
      out.identity = std::max(out.identity, v);
      if (v > tol.identity) ++out.id_fail;
    }
  });

  AxiomReport r;
  r.triples = instances.size();
  for (const Local& l : locals) {
    r.max_symmetry_violation = std::max(r.max_symmetry_violation, l.symmetry);
    r.max_triangle_violation = std::max(r.max_triangle_violation, l.triangle);
    r.max_identity_value = std::max(r.max_identity_value, l.identity);
    r.symmetry_failures += l.sym_fail;
    r.triangle_failures += l.tri_fail;
    r.identity_failures += l.id_fail;
  }
  return r;
}

}  // namespace rsk
