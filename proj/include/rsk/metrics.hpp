#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rsk/assignment.hpp"
#include "rsk/preprocess.hpp"
#include "rsk/random.hpp"
#include "rsk/rotation.hpp"
#include "rsk/transport.hpp"

namespace rsk {

enum class MetricKind {
  kSoftDistance,     // d_T, optimal transport
  kSoftCorrelation,  // s_T
  kOneToOne,         // d_P, linear assignment
  kSemiMatching,     // s_semi
  kRectangular,      // s_R
  kProcrustes,       // d_O
};

/// CLI spelling: soft, soft-corr, one2one, semi, rect, procrustes.
std::string_view cli_name(MetricKind k) noexcept;
/// Long identifier used in reports, e.g. "soft_matching_distance".
std::string_view report_name(MetricKind k) noexcept;
/// Accepts either spelling; throws ContractError.
MetricKind parse_metric(std::string_view s);
bool is_distance(MetricKind k) noexcept;
/// Throws ContractError when `p` is not a valid input convention for `k`.
void require_preprocessing(MetricKind k, Preprocessing p);

/// d_O = √(tr XᵀX + tr YᵀY − 2‖XᵀY‖_*). Valid for N_x ≠ N_y. Requires
/// centered Frobenius-unit inputs. The radicand is clamped to 0 when it is
/// negative by less than 1e-12 relative to tr XᵀX + tr YᵀY; below −1e-9
/// (relative) it throws NumericalError.
double procrustes_distance(const ActivationMatrix& x, const ActivationMatrix& y);

struct ProcrustesAlignment {
  OrthogonalMatrix q;  // minimizes ‖X − YQ‖_F, Q = V·Uᵀ from svd(XᵀY) = U·S·Vᵀ
  double residual;     // ‖X − YQ‖_F
};

/// Equal-size alignment form. Throws DimensionError when N_x ≠ N_y.
ProcrustesAlignment procrustes_alignment(const ActivationMatrix& x, const ActivationMatrix& y);

/// Value plus the optimizer that produced it.
struct MetricEvaluation {
  MetricKind kind = MetricKind::kSoftDistance;
  double value = 0.0;
  std::optional<AssignmentResult> assignment;
  std::optional<TransportSolution> transport;
  std::optional<Matrix> alignment;
};

/// Dispatches to the metric after checking its preprocessing contract.
MetricEvaluation evaluate_metric(MetricKind k, const ActivationMatrix& x, const ActivationMatrix& y);
double metric_value(MetricKind k, const ActivationMatrix& x, const ActivationMatrix& y);

/// Named metric output with the context needed to interpret it.
struct MetricReport {
  std::string metric_name;
  MetricEvaluation evaluation;
  Preprocessing preprocessing = Preprocessing::kRaw;
  std::size_t stimuli = 0;
  std::size_t units_x = 0;
  std::size_t units_y = 0;
};

MetricReport make_report(MetricKind k, const ActivationMatrix& x, const ActivationMatrix& y);

// ---------------------------------------------------------------------------
// Metric axiom harness

using DistanceFunction =
    std::function<double(const ActivationMatrix&, const ActivationMatrix&)>;

/// Transformations a metric is declared invariant to.
enum class NuisanceClass { kPermutation, kOrthogonal };

struct ActivationTriple {
  ActivationMatrix x;
  ActivationMatrix y;
  ActivationMatrix z;
};

struct AxiomReport {
  std::size_t triples = 0;
  double max_symmetry_violation = 0.0;  // max |d(a,b) − d(b,a)|
  double max_triangle_violation = 0.0;  // max d(a,b) − d(a,c) − d(c,b), floored at 0
  double max_identity_value = 0.0;      // max d(a, f(a)) for nuisance maps f
  std::size_t symmetry_failures = 0;
  std::size_t triangle_failures = 0;
  std::size_t identity_failures = 0;

  bool passed() const noexcept {
    return symmetry_failures == 0 && triangle_failures == 0 && identity_failures == 0;
  }
};

struct AxiomTolerances {
  double symmetry = 1e-9;
  double triangle = 1e-8;
  double identity = 1e-8;
};

/// Checks symmetry, all three triangle inequalities of each triple, and
/// d(a, f(a)) ≈ 0 for a random f from `nuisance` applied to every member.
/// Violations are counted, never thrown. Triples are evaluated in
/// parallel; `seed` drives the nuisance maps.
AxiomReport check_metric_axioms(const DistanceFunction& metric,
                                const std::vector<ActivationTriple>& instances,
                                NuisanceClass nuisance, std::uint64_t seed,
                                const AxiomTolerances& tol = {});

/// Applies a random element of the nuisance class to the units of `x` and
/// re-applies x's preprocessing.
ActivationMatrix apply_nuisance(const ActivationMatrix& x, NuisanceClass nuisance, Rng& rng);

}  // namespace rsk
