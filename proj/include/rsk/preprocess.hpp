#pragma once

#include <string_view>

#include "rsk/matrix.hpp"

namespace rsk {

enum class Preprocessing {
  kRaw,
  kCenteredFrobUnit,       // columns sum to zero, ‖X‖_F = 1
  kCenteredUnitColumns,    // columns sum to zero, each column unit length
  kUnitColumnsUncentered,  // each column unit length, no centering
};

std::string_view to_string(Preprocessing p) noexcept;
/// Accepts the CLI spellings (raw, frob, unit-cols, unit-cols-uncentered)
/// and the long names returned by to_string. Throws ContractError.
Preprocessing parse_preprocessing(std::string_view s);

/// True for the two unit-column modes, where xᵢᵀyⱼ is a correlation-like
/// cosine.
bool is_unit_column(Preprocessing p) noexcept;

/// M stimuli × N units response matrix tagged with the normalization it
/// satisfies. Only `preprocess` can produce a non-raw tag.
class ActivationMatrix {
 public:
  /// Raw activations; throws ParseError on non-finite entries and
  /// DimensionError on an empty matrix.
  explicit ActivationMatrix(Matrix data);

  const Matrix& data() const noexcept { return data_; }
  Preprocessing preprocessing() const noexcept { return tag_; }
  std::size_t stimuli() const noexcept { return data_.rows(); }
  std::size_t units() const noexcept { return data_.cols(); }

 private:
  friend ActivationMatrix preprocess(const ActivationMatrix&, Preprocessing);
  ActivationMatrix(Matrix data, Preprocessing tag) : data_(std::move(data)), tag_(tag) {}

  Matrix data_;
  Preprocessing tag_ = Preprocessing::kRaw;
};

/// Applies `mode` to the underlying data (any input tag is accepted; the
/// operation is idempotent). Unit-column modes reject columns whose norm
/// after optional centering is ≤ 1e-12·(1 + column scale) with
/// DegenerateColumnError; the Frobenius mode rejects an all-zero matrix.
ActivationMatrix preprocess(const ActivationMatrix& x, Preprocessing mode);

/// N_x × N_y squared Euclidean distances between columns.
struct CostMatrix {
  Matrix c;
};

/// N_x × N_y inner products xᵢᵀyⱼ of unit-length columns.
struct CorrelationMatrix {
  Matrix r;
};

/// Throws DimensionError if stimulus counts differ and ContractError if
/// the preprocessing tags differ.
void require_comparable(const ActivationMatrix& x, const ActivationMatrix& y);

CostMatrix squared_distance_costs(const ActivationMatrix& x, const ActivationMatrix& y);

/// Requires both inputs in the same unit-column mode.
CorrelationMatrix correlations(const ActivationMatrix& x, const ActivationMatrix& y);

}  // namespace rsk
