#include "rsk/rotation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rsk/error.hpp"
#include "rsk/linalg.hpp"

namespace rsk {

namespace {

constexpr double kOrthogonalityTolerance = 1e-10;
constexpr double kDeterminantTolerance = 1e-8;

double one_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

OrthogonalMatrix::OrthogonalMatrix(Matrix q) : q_(std::move(q)) {
  if (!q_.is_square()) throw ContractError("orthogonal matrix must be square");
  const double err = max_abs_diff(transpose_times(q_, q_), Matrix::identity(q_.rows()));
  if (err > kOrthogonalityTolerance) {
    throw ContractError("matrix is not orthogonal (max |QᵀQ - I| = " + std::to_string(err) + ")");
  }
  det_ = rsk::determinant(q_);
}

OrthogonalMatrix OrthogonalMatrix::special(Matrix q) {
  OrthogonalMatrix out(std::move(q));
  if (std::abs(out.det_ - 1.0) > kDeterminantTolerance) {
    throw ContractError("orthogonal matrix has determinant " + std::to_string(out.det_) +
                        ", expected +1");
  }
  return out;
}

OrthogonalMatrix sample_haar_special_orthogonal(std::size_t n, Rng& rng) {
  if (n == 0) throw ContractError("sample_haar_special_orthogonal: n must be >= 1");
  const Matrix g = rng.normal_matrix(n, n);
  QrResult f = qr(g);
  Matrix q = std::move(f.q);
  for (std::size_t j = 0; j < n; ++j) {
    if (f.r(j, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    }
  }
  if (determinant(q) < 0.0) {
    for (std::size_t i = 0; i < n; ++i) q(i, n - 1) = -q(i, n - 1);
  }
  return OrthogonalMatrix::special(std::move(q));
}

OrthogonalMatrix sample_haar_special_orthogonal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_haar_special_orthogonal(n, rng);
}

Matrix matrix_exp(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("matrix_exp: matrix is not square");
  if (!all_finite(a.data())) throw NumericalError("matrix_exp: non-finite input");
  const std::size_t n = a.rows();
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix b = std::ldexp(1.0, -squarings) * a;

  // Horner form of Σ_{k≤18} Bᵏ/k!; truncation error < 0.5¹⁹/19! relative.
  constexpr int kDegree = 18;
  const Matrix eye = Matrix::identity(n);
  Matrix e = eye;
  for (int k = kDegree; k >= 1; --k) {
    e = eye + (1.0 / k) * (b * e);
  }
  for (int i = 0; i < squarings; ++i) e = e * e;
  return e;
}

// The symmetric part S = (Q + Qᵀ)/2 and skew part K = (Q − Qᵀ)/2 of a
// rotation commute. On each eigenspace of S with eigenvalue cos θ, K acts
// as sin θ times a complex structure, so log Q = K·g(S) with
// g(cos θ) = θ / sin θ. Eigenvectors of S give the real Schur basis; the
// angle of each is recovered as atan2(‖K v‖, vᵀSv), which stays well
// conditioned near 0 and π.
Matrix so_log(const OrthogonalMatrix& rotation) {
  if (!rotation.is_special()) throw ContractError("so_log: matrix has determinant -1");
  const Matrix& q = rotation.matrix();
  const std::size_t n = q.rows();
  const Matrix qt = q.transpose();
  const Matrix sym = 0.5 * (q + qt);
  const Matrix skew = 0.5 * (q - qt);

  const SymmetricEigen eig = symmetric_eigen(sym);
  Matrix weighted(n, n);  // V·diag(g)
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> v = eig.vectors.column(k);
    double kv2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += skew(i, j) * v[j];
      kv2 += s * s;
    }
    const double sin_theta = std::sqrt(kv2);
    const double theta = std::atan2(sin_theta, eig.values[k]);
    if (std::numbers::pi - theta < kBranchTolerance) {
      throw BranchError("so_log: rotation angle " + std::to_string(theta) +
                        " is at pi; the real logarithm is not unique");
    }
    const double g = sin_theta > 1e-300 ? theta / sin_theta : 1.0;
    for (std::size_t i = 0; i < n; ++i) weighted(i, k) = v[i] * g;
  }
  const Matrix projector = weighted * eig.vectors.transpose();
  const Matrix l = skew * projector;
  return 0.5 * (l - l.transpose());
}

OrthogonalMatrix fractional_orthogonal_power(const OrthogonalMatrix& q, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ContractError("fractional_orthogonal_power: alpha must lie in [0, 1]");
  }
  if (!q.is_special()) throw ContractError("fractional_orthogonal_power: q must be in SO(N)");
  const Matrix log_q = so_log(q);
  return OrthogonalMatrix::special(matrix_exp(alpha * log_q));
}

}  // namespace rsk
