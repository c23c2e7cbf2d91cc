#pragma once

#include <vector>

#include "rsk/matrix.hpp"

namespace rsk {

/// Thin SVD a = u·diag(s)·vt with k = min(rows, cols) singular triples.
struct SvdResult {
  Matrix u;               // rows × k, orthonormal columns
  std::vector<double> s;  // nonincreasing, nonnegative
  Matrix vt;              // k × cols, orthonormal rows
  int sweeps = 0;
};

/// One-sided (Hestenes) Jacobi SVD. Converges when every column pair has
/// |aᵢ·aⱼ| ≤ 1e-12·‖aᵢ‖‖aⱼ‖; throws NumericalError after 60 sweeps.
/// Singular vectors for zero singular values are completed to an
/// orthonormal set.
SvdResult svd(const Matrix& a);

/// Sum of singular values.
double nuclear_norm(const Matrix& a);

struct QrResult {
  Matrix q;  // rows × rows, orthogonal
  Matrix r;  // rows × cols, upper triangular
};

/// Householder QR of a (rows ≥ cols required).
QrResult qr(const Matrix& a);

/// LU with partial pivoting. Returns 0 for exactly singular input.
double determinant(const Matrix& a);

/// Solves a·x = b for symmetric positive definite a via Cholesky.
/// Throws NumericalError when a pivot is not positive or when the
/// reciprocal condition estimate from the factor falls below `min_rcond`.
Matrix cholesky_solve(const Matrix& a, const Matrix& b, double min_rcond = 0.0);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen symmetric_eigen(const Matrix& a);

}  // namespace rsk
