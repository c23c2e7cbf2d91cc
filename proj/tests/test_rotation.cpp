#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsk/error.hpp"
#include "rsk/linalg.hpp"
#include "rsk/rotation.hpp"

namespace rsk {
namespace {

Matrix rotation2(double theta) {
  return Matrix{{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

Matrix random_skew(std::size_t n, Rng& rng, double scale) {
  Matrix g = rng.normal_matrix(n, n);
  return (0.5 * scale) * (g - g.transpose());
}

TEST(Haar, DimensionOne) {
  const OrthogonalMatrix q = sample_haar_special_orthogonal(1, std::uint64_t{42});
  EXPECT_EQ(q.matrix(), Matrix{{1.0}});
}

TEST(Haar, GroupMembership) {
  const OrthogonalMatrix q = sample_haar_special_orthogonal(5, std::uint64_t{1234});
  EXPECT_LE(max_abs_diff(transpose_times(q.matrix(), q.matrix()), Matrix::identity(5)), 1e-10);
  EXPECT_NEAR(q.determinant(), 1.0, 1e-8);
}

TEST(Haar, DeterminantPlusOneForAllSmallDimensions) {
  Rng rng(77);
  for (std::size_t n = 1; n <= 16; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const OrthogonalMatrix q = sample_haar_special_orthogonal(n, rng);
      EXPECT_NEAR(determinant(q.matrix()), 1.0, 1e-8) << "n=" << n;
    }
  }
}

TEST(Haar, DeterministicGivenSeed) {
  EXPECT_EQ(sample_haar_special_orthogonal(6, std::uint64_t{5}).matrix(),
            sample_haar_special_orthogonal(6, std::uint64_t{5}).matrix());
}

// Haar entries have mean 0 and variance 1/n; traces on SO(3) have mean 0
// and unit second moment. Left-multiplying by a fixed rotation R leaves all
// of these unchanged.
TEST(Haar, MonteCarloMoments) {
  constexpr int kSamples = 10000;
  Rng rng(99);
  const Matrix r = Matrix{{1, 0, 0}, {0, std::cos(1.1), -std::sin(1.1)}, {0, std::sin(1.1), std::cos(1.1)}} *
                   Matrix{{std::cos(0.4), 0, std::sin(0.4)}, {0, 1, 0}, {-std::sin(0.4), 0, std::cos(0.4)}};
  double m00 = 0, s00 = 0, tr = 0, tr2 = 0, rm00 = 0, rs00 = 0, rtr = 0;
  for (int k = 0; k < kSamples; ++k) {
    const Matrix q = sample_haar_special_orthogonal(3, rng).matrix();
    const Matrix rq = r * q;
    m00 += q(0, 0);
    s00 += q(0, 0) * q(0, 0);
    tr += trace(q);
    tr2 += trace(q) * trace(q);
    rm00 += rq(0, 0);
    rs00 += rq(0, 0) * rq(0, 0);
    rtr += trace(rq);
  }
  const double n = kSamples;
  const double entry_band = 3.0 * std::sqrt(1.0 / 3.0) / std::sqrt(n);
  EXPECT_LT(std::abs(m00 / n), entry_band);
  EXPECT_LT(std::abs(rm00 / n), entry_band);
  EXPECT_NEAR(s00 / n, 1.0 / 3.0, 0.02);
  EXPECT_NEAR(rs00 / n, 1.0 / 3.0, 0.02);
  EXPECT_LT(std::abs(tr / n), 3.0 / std::sqrt(n));
  EXPECT_LT(std::abs(rtr / n), 3.0 / std::sqrt(n));
  EXPECT_NEAR(tr2 / n, 1.0, 0.06);
}

TEST(MatrixExp, ZeroIsIdentity) {
  EXPECT_EQ(matrix_exp(Matrix(4, 4)), Matrix::identity(4));
}

TEST(MatrixExp, QuarterRotation) {
  const double t = std::numbers::pi / 2;
  const Matrix e = matrix_exp(Matrix{{0, -t}, {t, 0}});
  EXPECT_LE(max_abs_diff(e, Matrix{{0, -1}, {1, 0}}), 1e-10);
}

TEST(MatrixExp, DiagonalAndLargeAngle) {
  const Matrix e = matrix_exp(Matrix{{1.5, 0}, {0, -2.0}});
  EXPECT_NEAR(e(0, 0), std::exp(1.5), 1e-13 * std::exp(1.5));
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-14);
  EXPECT_LE(max_abs_diff(matrix_exp(Matrix{{0, -5.0}, {5.0, 0}}), rotation2(5.0)), 1e-12);
}

TEST(MatrixExp, SkewExponentialIsOrthogonal) {
  Rng rng(3);
  const Matrix a = random_skew(4, rng, 2.0);
  const Matrix e = matrix_exp(a);
  EXPECT_LE(max_abs_diff(transpose_times(e, e), Matrix::identity(4)), 1e-8);
}

TEST(SoLog, IdentityAndPlanarRotation) {
  EXPECT_LE(max_abs(so_log(OrthogonalMatrix::special(Matrix::identity(5)))), 1e-15);
  const Matrix l = so_log(OrthogonalMatrix::special(rotation2(0.7)));
  EXPECT_LE(max_abs_diff(l, Matrix{{0, -0.7}, {0.7, 0}}), 1e-14);
}

TEST(SoLog, RoundTripAndSkewSymmetry) {
  Rng rng(8);
  for (std::size_t n : {2u, 3u, 6u, 11u, 16u}) {
    const OrthogonalMatrix q = sample_haar_special_orthogonal(n, rng);
    const Matrix l = so_log(q);
    EXPECT_LE(max_abs_diff(l, -1.0 * l.transpose()), 1e-14) << n;
    EXPECT_LE(max_abs_diff(matrix_exp(l), q.matrix()), 1e-8) << n;
  }
}

TEST(SoLog, RepeatedAnglesAndNearPi) {
  // Two planes with the same angle, plus an angle close to (not at) pi.
  Matrix q = Matrix::identity(7);
  const Matrix a = rotation2(1.3), b = rotation2(std::numbers::pi - 1e-4);
  for (std::size_t blk : {0u, 2u}) {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) q(blk + i, blk + j) = a(i, j);
  }
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) q(4 + i, 4 + j) = b(i, j);
  Rng rng(4);
  const Matrix basis = sample_haar_special_orthogonal(7, rng).matrix();
  const Matrix conj = basis * q * basis.transpose();
  const Matrix l = so_log(OrthogonalMatrix::special(conj));
  EXPECT_LE(max_abs_diff(matrix_exp(l), conj), 1e-8);
}

TEST(SoLog, RejectsAngleAtPi) {
  EXPECT_THROW(so_log(OrthogonalMatrix::special(rotation2(std::numbers::pi))), BranchError);
  const Matrix half_turn{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}};
  EXPECT_THROW(so_log(OrthogonalMatrix::special(half_turn)), BranchError);
}

TEST(SoLog, RejectsReflection) {
  const OrthogonalMatrix reflection(Matrix{{1, 0}, {0, -1}});
  EXPECT_FALSE(reflection.is_special());
  EXPECT_THROW(so_log(reflection), ContractError);
  EXPECT_THROW(OrthogonalMatrix::special(Matrix{{1, 0}, {0, -1}}), ContractError);
  EXPECT_THROW(OrthogonalMatrix(Matrix{{1, 1}, {0, 1}}), ContractError);
}

TEST(FractionalPower, Endpoints) {
  Rng rng(21);
  const OrthogonalMatrix q = sample_haar_special_orthogonal(9, rng);
  EXPECT_LE(max_abs_diff(fractional_orthogonal_power(q, 0.0).matrix(), Matrix::identity(9)), 1e-15);
  EXPECT_LE(max_abs_diff(fractional_orthogonal_power(q, 1.0).matrix(), q.matrix()), 1e-8);
}

TEST(FractionalPower, HalfAngle) {
  const OrthogonalMatrix q = OrthogonalMatrix::special(rotation2(1.9));
  EXPECT_LE(max_abs_diff(fractional_orthogonal_power(q, 0.5).matrix(), rotation2(0.95)), 1e-14);
}

TEST(FractionalPower, SemigroupProperty) {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    const OrthogonalMatrix q = sample_haar_special_orthogonal(n, rng);
    const double alpha = 0.5 * rng.uniform();
    const double beta = (1.0 - alpha) * rng.uniform();
    const Matrix lhs = fractional_orthogonal_power(q, alpha).matrix() *
                       fractional_orthogonal_power(q, beta).matrix();
    EXPECT_LE(max_abs_diff(lhs, fractional_orthogonal_power(q, alpha + beta).matrix()), 1e-7);
  }
}

TEST(FractionalPower, RejectsOutOfRangeAlpha) {
  const OrthogonalMatrix q = OrthogonalMatrix::special(rotation2(0.3));
  EXPECT_THROW(fractional_orthogonal_power(q, -0.1), ContractError);
  EXPECT_THROW(fractional_orthogonal_power(q, 1.5), ContractError);
}

}  // namespace
}  // namespace rsk
