#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsk/error.hpp"
#include "rsk/linalg.hpp"
#include "rsk/metrics.hpp"
#include "test_util.hpp"

namespace rsk {
namespace {

TEST(Procrustes, ZeroUnderRotation) {
  Rng rng(61);
  const ActivationMatrix x = testing::random_activations(20, 6, rng);
  const Matrix q = sample_haar_special_orthogonal(6, rng).matrix();
  const ActivationMatrix y = preprocess(ActivationMatrix(x.data() * q), Preprocessing::kCenteredFrobUnit);
  EXPECT_NEAR(procrustes_distance(x, y), 0.0, 1e-7);
}

TEST(Procrustes, OrthogonalSubspacesGiveSqrtTwo) {
  // Unit-norm, centered, with XᵀY = 0.
  const double h = 0.5;
  const ActivationMatrix x = preprocess(ActivationMatrix(Matrix{{h}, {-h}, {h}, {-h}}),
                                        Preprocessing::kCenteredFrobUnit);
  const ActivationMatrix y = preprocess(ActivationMatrix(Matrix{{h}, {h}, {-h}, {-h}}),
                                        Preprocessing::kCenteredFrobUnit);
  EXPECT_NEAR(procrustes_distance(x, y), std::sqrt(2.0), 1e-12);
}

TEST(Procrustes, NuclearNormFormulaMatchesAlignmentResidual) {
  Rng rng(62);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const ActivationMatrix x = testing::random_activations(5 + rng.below(30), n, rng);
    const ActivationMatrix y = testing::random_activations(x.stimuli(), n, rng);
    const ProcrustesAlignment a = procrustes_alignment(x, y);
    EXPECT_NEAR(frobenius_norm(x.data() - y.data() * a.q.matrix()), a.residual, 1e-12);
    EXPECT_NEAR(a.residual, procrustes_distance(x, y), 1e-8);
    // Oracle: ‖X‖² + ‖Y‖² − 2·Σσ(XᵀY), σ from an independent Jacobi.
    double nuc = 0.0;
    for (double s : oracle::singular_values(transpose_times(x.data(), y.data()))) nuc += s;
    EXPECT_NEAR(procrustes_distance(x, y), std::sqrt(std::max(0.0, 2.0 - 2.0 * nuc)), 1e-8);
  }
}

TEST(Procrustes, RequiresFrobeniusPreprocessing) {
  Rng rng(63);
  const ActivationMatrix x = testing::random_activations(8, 3, rng, Preprocessing::kCenteredUnitColumns);
  EXPECT_THROW(procrustes_distance(x, x), ContractError);
}

TEST(Procrustes, NeverExceedsOneToOne) {
  Rng rng(64);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(8);
    const ActivationMatrix x = testing::random_activations(4 + rng.below(20), n, rng);
    const ActivationMatrix y = testing::random_activations(x.stimuli(), n, rng);
    EXPECT_LE(procrustes_distance(x, y), one_to_one_matching_distance(x, y) + 1e-10);
  }
}

TEST(MetricNames, RoundTrip) {
  for (MetricKind k : {MetricKind::kSoftDistance, MetricKind::kSoftCorrelation, MetricKind::kOneToOne,
                       MetricKind::kSemiMatching, MetricKind::kRectangular, MetricKind::kProcrustes}) {
    EXPECT_EQ(parse_metric(cli_name(k)), k);
    EXPECT_EQ(parse_metric(report_name(k)), k);
  }
  EXPECT_THROW(parse_metric("cka"), ContractError);
  EXPECT_TRUE(is_distance(MetricKind::kProcrustes));
  EXPECT_FALSE(is_distance(MetricKind::kSemiMatching));
}

TEST(EvaluateMetric, CarriesWitness) {
  Rng rng(65);
  const ActivationMatrix x = testing::random_activations(10, 4, rng);
  const ActivationMatrix y = testing::random_activations(10, 4, rng);
  const MetricEvaluation soft = evaluate_metric(MetricKind::kSoftDistance, x, y);
  ASSERT_TRUE(soft.transport.has_value());
  EXPECT_NEAR(soft.value, soft_matching_distance(x, y), 0.0);
  const MetricEvaluation hard = evaluate_metric(MetricKind::kOneToOne, x, y);
  ASSERT_TRUE(hard.assignment.has_value());
  const MetricEvaluation proc = evaluate_metric(MetricKind::kProcrustes, x, y);
  ASSERT_TRUE(proc.alignment.has_value());
  EXPECT_THROW(evaluate_metric(MetricKind::kSoftCorrelation, x, y), ContractError);
  const MetricReport r = make_report(MetricKind::kOneToOne, x, y);
  EXPECT_EQ(r.units_x, 4u);
  EXPECT_EQ(r.stimuli, 10u);
}

std::vector<ActivationTriple> random_triples(std::size_t count, bool equal_sizes, Rng& rng) {
  std::vector<ActivationTriple> out;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t m = 5 + rng.below(20);
    const std::size_t n = 1 + rng.below(8);
    auto size = [&] { return equal_sizes ? n : 1 + rng.below(8); };
    ActivationMatrix a = testing::random_activations(m, size(), rng);
    ActivationMatrix b = testing::random_activations(m, size(), rng);
    ActivationMatrix c = testing::random_activations(m, size(), rng);
    out.push_back({std::move(a), std::move(b), std::move(c)});
  }
  return out;
}

TEST(Axioms, SoftDistancePassesUnderPermutations) {
  Rng rng(66);
  const auto triples = random_triples(60, false, rng);
  const AxiomReport r = check_metric_axioms(
      [](const ActivationMatrix& a, const ActivationMatrix& b) { return soft_matching_distance(a, b); },
      triples, NuisanceClass::kPermutation, 7);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.triples, 60u);
  EXPECT_LE(r.max_identity_value, 1e-9);
}

TEST(Axioms, ProcrustesPassesUnderOrthogonalMaps) {
  Rng rng(67);
  const auto triples = random_triples(40, true, rng);
  // d(x, xQ) is the square root of a cancellation-level radicand (~1e-16).
  AxiomTolerances tol;
  tol.identity = 1e-7;
  const AxiomReport r = check_metric_axioms(
      [](const ActivationMatrix& a, const ActivationMatrix& b) { return procrustes_distance(a, b); },
      triples, NuisanceClass::kOrthogonal, 8, tol);
  EXPECT_TRUE(r.passed()) << r.max_symmetry_violation << " " << r.max_triangle_violation << " "
                          << r.max_identity_value;
}

TEST(Axioms, SoftDistanceNotRotationInvariant) {
  Rng rng(68);
  const auto triples = random_triples(20, true, rng);
  const AxiomReport r = check_metric_axioms(
      [](const ActivationMatrix& a, const ActivationMatrix& b) { return soft_matching_distance(a, b); },
      triples, NuisanceClass::kOrthogonal, 9);
  EXPECT_GT(r.identity_failures, 0u);
}

TEST(Axioms, HarnessFlagsAsymmetricFunction) {
  Rng rng(69);
  const auto triples = random_triples(10, false, rng);
  const AxiomReport r = check_metric_axioms(
      [](const ActivationMatrix& a, const ActivationMatrix& b) {
        return static_cast<double>(a.units()) + 0.5 * static_cast<double>(b.units());
      },
      triples, NuisanceClass::kPermutation, 10);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.symmetry_failures + r.identity_failures, 0u);
}

TEST(Axioms, NuisanceMapsPreserveShapeAndTag) {
  Rng rng(70);
  const ActivationMatrix x = testing::random_activations(9, 5, rng);
  for (NuisanceClass c : {NuisanceClass::kPermutation, NuisanceClass::kOrthogonal}) {
    const ActivationMatrix y = apply_nuisance(x, c, rng);
    EXPECT_EQ(y.stimuli(), 9u);
    EXPECT_EQ(y.units(), 5u);
    EXPECT_EQ(y.preprocessing(), x.preprocessing());
  }
}

}  // namespace
}  // namespace rsk
