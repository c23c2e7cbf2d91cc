#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsk/metrics.hpp"
#include "rsk/preprocess.hpp"

namespace rsk {

// ---------------------------------------------------------------------------
// Rotation sweeps

struct RotationSweepConfig {
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::uint64_t seed = 0;
  MetricKind metric = MetricKind::kSoftCorrelation;
  std::size_t samples = 1;  // independent Haar rotations

  /// alphas strictly increasing inside [0, 1], first 0 and last 1;
  /// samples ≥ 1. Throws ContractError.
  void validate() const;
};

struct SweepSample {
  std::uint64_t seed = 0;  // seed that produced q, after any resampling
  std::size_t resamples = 0;
  Matrix q;
  std::vector<double> values;  // one per alpha
};

struct SweepResult {
  MetricKind metric = MetricKind::kSoftCorrelation;
  Preprocessing preprocessing = Preprocessing::kRaw;
  std::vector<double> alphas;
  std::vector<SweepSample> samples;
  std::vector<double> mean;    // per alpha, across samples
  std::vector<double> stddev;  // per alpha, population standard deviation
  std::size_t stimuli = 0;
  std::size_t units_x = 0;
  std::size_t units_y = 0;
};

/// For each Haar sample Q and each alpha evaluates metric(pre(X·Q^α), Y),
/// where pre re-applies x's preprocessing. A Q whose logarithm is
/// branch-ambiguous is replaced by a draw from the next derived seed and
/// the replacement is counted. Samples run in parallel.
SweepResult rotation_sweep(const ActivationMatrix& x, const ActivationMatrix& y,
                           const RotationSweepConfig& cfg);

/// Seed for sample `index`, attempt `attempt` (SplitMix64 of the mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t attempt);

// ---------------------------------------------------------------------------
// Three-network counterexample

struct Fig3aNetworks {
  ActivationMatrix x;  // 3 units
  ActivationMatrix y;  // 3 units, orthogonal to x
  ActivationMatrix z;  // 6 units: x's and y's curves
};

/// Indicator tuning curves over 6 stimuli: X = e1..e3, Y = e4..e6,
/// Z = e1..e6, tagged unit-columns-uncentered.
Fig3aNetworks build_fig3a_networks();

// ---------------------------------------------------------------------------
// Linear predictivity

/// 8 geometrically spaced penalties from 1e-4 to 1e4, endpoints included.
std::vector<double> ridge_penalty_grid();

struct PredictivityConfig {
  double train_fraction = 0.70;
  double validation_fraction = 0.10;
  double test_fraction = 0.20;
  std::vector<double> penalties = ridge_penalty_grid();
  std::uint64_t seed = 0;

  void validate() const;
};

struct RidgeModel {
  Matrix weights;                  // features × targets
  std::vector<double> intercepts;  // one per target
};

/// Ridge regression with unpenalized intercept: centers features and
/// targets, then solves (AᵀA + λI)W = AᵀB by Cholesky. Throws
/// NumericalError when the system is numerically singular.
RidgeModel ridge_fit(const Matrix& features, const Matrix& targets, double penalty);
Matrix ridge_predict(const RidgeModel& model, const Matrix& features);

/// Pearson correlation; 0 when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

struct PredictivityResult {
  std::vector<double> per_target_r;  // on test rows
  double mean_r = 0.0;
  double chosen_penalty = 0.0;
  std::vector<double> penalties;
  std::vector<double> validation_mean_r;  // NaN for skipped penalties
  std::size_t train_rows = 0;
  std::size_t validation_rows = 0;
  std::size_t test_rows = 0;
  std::vector<std::string> warnings;
};

/// Splits rows by a seeded shuffle, fits ridge on training rows for each
/// penalty, keeps the penalty with the highest mean validation Pearson R
/// across target columns, and reports test R per target column. A penalty
/// whose normal equations are ill-conditioned is skipped with a warning.
/// Requires equal row counts and at least 10 rows.
PredictivityResult linear_predictivity(const ActivationMatrix& model,
                                       const ActivationMatrix& target,
                                       const PredictivityConfig& cfg);

}  // namespace rsk
