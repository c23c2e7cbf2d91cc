#include "rsk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rsk/error.hpp"
#include "rsk/linalg.hpp"
#include "rsk/parallel.hpp"
#include "rsk/rotation.hpp"

namespace rsk {

void RotationSweepConfig::validate() const {
  if (alphas.size() < 2) throw ContractError("sweep: need at least the alphas 0 and 1");
  if (alphas.front() != 0.0 || alphas.back() != 1.0) {
    throw ContractError("sweep: alphas must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) throw ContractError("sweep: alphas must be strictly increasing");
  }
  if (samples == 0) throw ContractError("sweep: samples must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t attempt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1) + 0xbf58476d1ce4e5b9ull * attempt;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

constexpr std::size_t kMaxResamples = 32;

}  // namespace

SweepResult rotation_sweep(const ActivationMatrix& x, const ActivationMatrix& y,
                           const RotationSweepConfig& cfg) {
  cfg.validate();
  require_comparable(x, y);
  require_preprocessing(cfg.metric, x.preprocessing());
  const std::size_t n = x.units();

  SweepResult out;
  out.metric = cfg.metric;
  out.preprocessing = x.preprocessing();
  out.alphas = cfg.alphas;
  out.stimuli = x.stimuli();
  out.units_x = x.units();
  out.units_y = y.units();
  out.samples.resize(cfg.samples);

  parallel_for(cfg.samples, [&](std::size_t s) {
    SweepSample& sample = out.samples[s];
    Matrix log_q;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxResamples) {
        throw BranchError("sweep: no Haar sample with a unique logarithm after " +
                          std::to_string(kMaxResamples) + " draws");
      }
      sample.seed = derive_seed(cfg.seed, s, attempt);
      OrthogonalMatrix q = sample_haar_special_orthogonal(n, sample.seed);
      try {
        log_q = so_log(q);
      } catch (const BranchError&) {
        ++sample.resamples;
        continue;
      }
      sample.q = q.matrix();
      break;
    }
    sample.values.reserve(cfg.alphas.size());
    for (double alpha : cfg.alphas) {
      const OrthogonalMatrix qa = OrthogonalMatrix::special(matrix_exp(alpha * log_q));
      const ActivationMatrix rotated =
          preprocess(ActivationMatrix(x.data() * qa.matrix()), x.preprocessing());
      sample.values.push_back(metric_value(cfg.metric, rotated, y));
    }
  });

  const std::size_t a = cfg.alphas.size();
  out.mean.assign(a, 0.0);
  out.stddev.assign(a, 0.0);
  const double count = static_cast<double>(cfg.samples);
  for (std::size_t k = 0; k < a; ++k) {
    double sum = 0.0;
    for (const auto& s : out.samples) sum += s.values[k];
    const double mean = sum / count;
    double var = 0.0;
    for (const auto& s : out.samples) var += (s.values[k] - mean) * (s.values[k] - mean);
    out.mean[k] = mean;
    out.stddev[k] = std::sqrt(var / count);
  }
  return out;
}

Fig3aNetworks build_fig3a_networks() {
  constexpr std::size_t kStimuli = 6;
  auto indicator = [&](std::size_t first, std::size_t count) {
    Matrix m(kStimuli, count);
    for (std::size_t j = 0; j < count; ++j) m(first + j, j) = 1.0;
    return preprocess(ActivationMatrix(std::move(m)), Preprocessing::kUnitColumnsUncentered);
  };
  return Fig3aNetworks{indicator(0, 3), indicator(3, 3), indicator(0, 6)};
}

std::vector<double> ridge_penalty_grid() {
  constexpr int kCount = 8;
  std::vector<double> grid(kCount);
  for (int k = 0; k < kCount; ++k) grid[k] = std::pow(10.0, -4.0 + 8.0 * k / (kCount - 1));
  grid.front() = 1e-4;
  grid.back() = 1e4;
  return grid;
}

void PredictivityConfig::validate() const {
  for (double f : {train_fraction, validation_fraction, test_fraction}) {
    if (!(f > 0.0 && f < 1.0)) throw ContractError("predictivity: split fractions must be in (0, 1)");
  }
  if (std::abs(train_fraction + validation_fraction + test_fraction - 1.0) > 1e-12) {
    throw ContractError("predictivity: split fractions must sum to 1");
  }
  if (penalties.empty()) throw ContractError("predictivity: empty penalty grid");
  for (double p : penalties) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ContractError("predictivity: penalties must be positive");
  }
}

namespace {

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> mean(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mean[j] += m(i, j);
  for (double& v : mean) v /= static_cast<double>(m.rows());
  return mean;
}

Matrix centered(const Matrix& m, const std::vector<double>& mean) {
  Matrix c = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) -= mean[j];
  return c;
}

Matrix take_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(m.row(rows[r]).begin(), m.row(rows[r]).end(), out.row(r).begin());
  }
  return out;
}

std::vector<double> columnwise_pearson(const Matrix& a, const Matrix& b) {
  const Matrix at = a.transpose();
  const Matrix bt = b.transpose();
  std::vector<double> r(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) r[j] = pearson(at.row(j), bt.row(j));
  return r;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

constexpr double kMinReciprocalCondition = 1e-13;

}  // namespace

RidgeModel ridge_fit(const Matrix& features, const Matrix& targets, double penalty) {
  if (features.rows() != targets.rows()) throw DimensionError("ridge_fit: row count mismatch");
  if (features.rows() < 2) throw DimensionError("ridge_fit: need at least two rows");
  const auto fmean = column_means(features);
  const auto tmean = column_means(targets);
  const Matrix a = centered(features, fmean);
  const Matrix b = centered(targets, tmean);
  Matrix gram = transpose_times(a, a);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += penalty;
  RidgeModel model;
  model.weights = cholesky_solve(gram, transpose_times(a, b), kMinReciprocalCondition);
  model.intercepts = tmean;
  for (std::size_t t = 0; t < targets.cols(); ++t) {
    for (std::size_t f = 0; f < features.cols(); ++f) model.intercepts[t] -= fmean[f] * model.weights(f, t);
  }
  return model;
}

Matrix ridge_predict(const RidgeModel& model, const Matrix& features) {
  Matrix out = features * model.weights;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t t = 0; t < out.cols(); ++t) out(i, t) += model.intercepts[t];
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("pearson: length mismatch");
  const double n = static_cast<double>(a.size());
  if (a.empty()) return 0.0;
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

PredictivityResult linear_predictivity(const ActivationMatrix& model,
                                       const ActivationMatrix& target,
                                       const PredictivityConfig& cfg) {
  cfg.validate();
  const std::size_t n = model.stimuli();
  if (target.stimuli() != n) {
    throw DimensionError("predictivity: stimulus count mismatch (" + std::to_string(n) + " vs " +
                         std::to_string(target.stimuli()) + ")");
  }
  if (n < 10) throw DimensionError("predictivity: need at least 10 stimuli");

  PredictivityResult out;
  out.train_rows = static_cast<std::size_t>(std::llround(cfg.train_fraction * n));
  out.validation_rows = static_cast<std::size_t>(std::llround(cfg.validation_fraction * n));
  if (out.train_rows + out.validation_rows + 2 > n || out.validation_rows < 2) {
    throw DimensionError("predictivity: too few stimuli for the requested split");
  }
  out.test_rows = n - out.train_rows - out.validation_rows;

  Rng rng(cfg.seed);
  const std::vector<std::size_t> order = rng.permutation(n);
  const std::span<const std::size_t> all(order);
  const auto train_idx = all.subspan(0, out.train_rows);
  const auto val_idx = all.subspan(out.train_rows, out.validation_rows);
  const auto test_idx = all.subspan(out.train_rows + out.validation_rows);

  const Matrix xtr = take_rows(model.data(), train_idx);
  const Matrix ytr = take_rows(target.data(), train_idx);
  const Matrix xva = take_rows(model.data(), val_idx);
  const Matrix yva = take_rows(target.data(), val_idx);

  out.penalties = cfg.penalties;
  out.validation_mean_r.assign(cfg.penalties.size(), std::numeric_limits<double>::quiet_NaN());
  std::size_t best = cfg.penalties.size();
  for (std::size_t p = 0; p < cfg.penalties.size(); ++p) {
    try {
      const RidgeModel m = ridge_fit(xtr, ytr, cfg.penalties[p]);
      out.validation_mean_r[p] = mean_of(columnwise_pearson(ridge_predict(m, xva), yva));
    } catch (const NumericalError& e) {
      out.warnings.push_back("penalty " + std::to_string(cfg.penalties[p]) +
                             " skipped: " + e.what());
      continue;
    }
    if (best == cfg.penalties.size() || out.validation_mean_r[p] > out.validation_mean_r[best]) {
      best = p;
    }
  }
  if (best == cfg.penalties.size()) {
    throw NumericalError("predictivity: every penalty produced an ill-conditioned system");
  }
  out.chosen_penalty = cfg.penalties[best];

  const RidgeModel fit = ridge_fit(xtr, ytr, out.chosen_penalty);
  const Matrix pred = ridge_predict(fit, take_rows(model.data(), test_idx));
  out.per_target_r = columnwise_pearson(pred, take_rows(target.data(), test_idx));
  out.mean_r = mean_of(out.per_target_r);
  return out;
}

}  // namespace rsk
