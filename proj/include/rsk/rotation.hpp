#pragma once

#include <cstdint>

#include "rsk/matrix.hpp"
#include "rsk/random.hpp"

namespace rsk {

/// A square matrix with qᵀq = I (checked to 1e-10 on construction).
class OrthogonalMatrix {
 public:
  /// Validates orthogonality; throws ContractError otherwise.
  explicit OrthogonalMatrix(Matrix q);
  /// Additionally requires det = +1 within 1e-8.
  static OrthogonalMatrix special(Matrix q);

  const Matrix& matrix() const noexcept { return q_; }
  std::size_t dim() const noexcept { return q_.rows(); }
  double determinant() const noexcept { return det_; }
  bool is_special() const noexcept { return det_ > 0.0; }

 private:
  Matrix q_;
  double det_ = 1.0;
};

/// Haar-distributed rotation in SO(n): QR of an i.i.d. standard normal
/// matrix, signs of diag(R) absorbed into Q, then the last column negated
/// when det(Q) = −1.
OrthogonalMatrix sample_haar_special_orthogonal(std::size_t n, Rng& rng);
OrthogonalMatrix sample_haar_special_orthogonal(std::size_t n, std::uint64_t seed);

/// Scaling and squaring with a degree-18 Taylor core (‖A/2ˢ‖₁ ≤ 1/2).
Matrix matrix_exp(const Matrix& a);

/// Principal real logarithm of a rotation: a skew-symmetric A with
/// exp(A) = q, every rotation angle in (−π, π). Rotations with an angle
/// within 1e-9 of π throw BranchError.
Matrix so_log(const OrthogonalMatrix& q);

/// q^alpha = exp(alpha·log q) for alpha in [0, 1].
OrthogonalMatrix fractional_orthogonal_power(const OrthogonalMatrix& q, double alpha);

/// Angular tolerance at π used by so_log.
inline constexpr double kBranchTolerance = 1e-9;

}  // namespace rsk
