#include "rsk/preprocess.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rsk/error.hpp"
#include "rsk/kernels.hpp"

namespace rsk {

std::string_view to_string(Preprocessing p) noexcept {
  switch (p) {
    case Preprocessing::kRaw: return "raw";
    case Preprocessing::kCenteredFrobUnit: return "centered_frob_unit";
    case Preprocessing::kCenteredUnitColumns: return "centered_unit_columns";
    case Preprocessing::kUnitColumnsUncentered: return "unit_columns_uncentered";
  }
  return "unknown";
}

Preprocessing parse_preprocessing(std::string_view s) {
  if (s == "raw") return Preprocessing::kRaw;
  if (s == "frob" || s == "centered_frob_unit") return Preprocessing::kCenteredFrobUnit;
  if (s == "unit-cols" || s == "centered_unit_columns") return Preprocessing::kCenteredUnitColumns;
  if (s == "unit-cols-uncentered" || s == "unit_columns_uncentered") {
    return Preprocessing::kUnitColumnsUncentered;
  }
  throw ContractError("unknown preprocessing mode '" + std::string(s) + "'");
}

bool is_unit_column(Preprocessing p) noexcept {
  return p == Preprocessing::kCenteredUnitColumns || p == Preprocessing::kUnitColumnsUncentered;
}

ActivationMatrix::ActivationMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.cols() == 0) {
    throw DimensionError("activation matrix must have at least one stimulus and one unit");
  }
  if (!all_finite(data_.data())) throw ParseError("activation matrix has non-finite entries");
}

ActivationMatrix preprocess(const ActivationMatrix& x, Preprocessing mode) {
  if (mode == Preprocessing::kRaw) return ActivationMatrix(x.data(), Preprocessing::kRaw);

  // Columns as contiguous rows.
  Matrix t = x.data().transpose();
  const std::size_t n = t.rows();
  const std::size_t m = t.cols();
  const auto& k = kernels::active();

  const bool center = mode != Preprocessing::kUnitColumnsUncentered;
  std::vector<double> scale(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = t.row(j);
    for (double v : col) scale[j] = std::max(scale[j], std::abs(v));
    if (center) {
      double mean = 0.0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(m);
      for (double& v : col) v -= mean;
    }
  }

  if (mode == Preprocessing::kCenteredFrobUnit) {
    const double norm = std::sqrt(k.dot(t.data().data(), t.data().data(), t.size()));
    if (!(norm > 0.0)) {
      throw DegenerateColumnError(std::numeric_limits<std::size_t>::max(),
                                  "centered_frob_unit: every column is constant");
    }
    for (double& v : t.data()) v /= norm;
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      auto col = t.row(j);
      const double norm = std::sqrt(k.dot(col.data(), col.data(), m));
      const double floor = center ? 1e-12 * std::max(1.0, scale[j]) * std::sqrt(double(m)) : 0.0;
      if (!(norm > floor)) {
        throw DegenerateColumnError(
            j, std::string(to_string(mode)) + ": column " + std::to_string(j) +
                   (center ? " has zero variance" : " is all zeros"));
      }
      for (double& v : col) v /= norm;
    }
  }
  return ActivationMatrix(t.transpose(), mode);
}

void require_comparable(const ActivationMatrix& x, const ActivationMatrix& y) {
  if (x.stimuli() != y.stimuli()) {
    throw DimensionError("stimulus count mismatch: " + std::to_string(x.stimuli()) + " vs " +
                         std::to_string(y.stimuli()));
  }
  if (x.preprocessing() != y.preprocessing()) {
    throw ContractError("preprocessing mismatch: " + std::string(to_string(x.preprocessing())) +
                        " vs " + std::string(to_string(y.preprocessing())));
  }
}

CostMatrix squared_distance_costs(const ActivationMatrix& x, const ActivationMatrix& y) {
  require_comparable(x, y);
  const Matrix xt = x.data().transpose();
  const Matrix yt = y.data().transpose();
  const auto& k = kernels::active();
  const std::size_t m = x.stimuli();
  CostMatrix out{Matrix(x.units(), y.units())};
  for (std::size_t i = 0; i < x.units(); ++i) {
    for (std::size_t j = 0; j < y.units(); ++j) {
      out.c(i, j) = std::max(0.0, k.squared_distance(xt.row(i).data(), yt.row(j).data(), m));
    }
  }
  return out;
}

CorrelationMatrix correlations(const ActivationMatrix& x, const ActivationMatrix& y) {
  require_comparable(x, y);
  if (!is_unit_column(x.preprocessing())) {
    throw ContractError("correlations require unit-column preprocessing, got " +
                        std::string(to_string(x.preprocessing())));
  }
  const Matrix xt = x.data().transpose();
  const Matrix yt = y.data().transpose();
  const auto& k = kernels::active();
  const std::size_t m = x.stimuli();
  CorrelationMatrix out{Matrix(x.units(), y.units())};
  for (std::size_t i = 0; i < x.units(); ++i) {
    for (std::size_t j = 0; j < y.units(); ++j) {
      out.r(i, j) = k.dot(xt.row(i).data(), yt.row(j).data(), m);
    }
  }
  return out;
}

}  // namespace rsk
