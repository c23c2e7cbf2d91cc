#include "rsk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rsk/error.hpp"
#include "rsk/kernels.hpp"

namespace rsk {

namespace {

constexpr int kMaxSvdSweeps = 60;
constexpr double kSvdTolerance = 1e-12;

// Jacobi SVD for rows ≥ cols. Works on the transpose so that each column of
// `a` is a contiguous row for the kernels.
SvdResult svd_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const auto& k = kernels::active();

  Matrix w = a.transpose();  // n × m
  Matrix vt = Matrix::identity(n);  // rows are columns of V

  int sweep = 0;
  bool converged = n < 2;
  while (!converged) {
    if (sweep == kMaxSvdSweeps) {
      throw NumericalError("svd: no convergence after " + std::to_string(kMaxSvdSweeps) +
                           " Jacobi sweeps");
    }
    ++sweep;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const kernels::Gram2 g = k.gram2(w.row(p).data(), w.row(q).data(), m);
        if (g.ab == 0.0 || std::abs(g.ab) <= kSvdTolerance * std::sqrt(g.aa) * std::sqrt(g.bb)) {
          continue;
        }
        rotated = true;
        const double zeta = (g.bb - g.aa) / (2.0 * g.ab);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        k.rotate(w.row(p).data(), w.row(q).data(), c, s, m);
        k.rotate(vt.row(p).data(), vt.row(q).data(), c, s, n);
      }
    }
    converged = !rotated;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(k.dot(w.row(j).data(), w.row(j).data(), m));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  SvdResult out;
  out.sweeps = sweep;
  out.s.resize(n);
  out.vt = Matrix(n, n);
  Matrix ut(n, m);  // rows are left singular vectors
  std::vector<bool> filled(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = order[r];
    out.s[r] = norms[j];
    std::copy(vt.row(j).begin(), vt.row(j).end(), out.vt.row(r).begin());
    if (norms[j] > 0.0) {
      const double inv = 1.0 / norms[j];
      auto dst = ut.row(r);
      auto src = w.row(j);
      for (std::size_t i = 0; i < m; ++i) dst[i] = src[i] * inv;
      filled[r] = true;
    }
  }

  // Complete left vectors of exactly-zero singular values by Gram-Schmidt
  // over the standard basis.
  std::size_t candidate = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (filled[r]) continue;
    for (; candidate < m; ++candidate) {
      std::vector<double> e(m, 0.0);
      e[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t o = 0; o < n; ++o) {
          if (!filled[o]) continue;
          const double proj = k.dot(ut.row(o).data(), e.data(), m);
          k.axpy(-proj, ut.row(o).data(), e.data(), m);
        }
      }
      const double nrm = std::sqrt(k.dot(e.data(), e.data(), m));
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) ut(r, i) = e[i] / nrm;
        filled[r] = true;
        ++candidate;
        break;
      }
    }
    if (!filled[r]) throw NumericalError("svd: could not complete left singular basis");
  }
  out.u = ut.transpose();
  return out;
}

}  // namespace

SvdResult svd(const Matrix& a) {
  if (!all_finite(a.data())) throw NumericalError("svd: input has non-finite entries");
  if (a.rows() >= a.cols()) return svd_tall(a);
  SvdResult t = svd_tall(a.transpose());
  SvdResult out;
  out.sweeps = t.sweeps;
  out.s = std::move(t.s);
  out.u = t.vt.transpose();
  out.vt = t.u.transpose();
  return out;
}

double nuclear_norm(const Matrix& a) {
  const SvdResult r = svd(a);
  return std::accumulate(r.s.begin(), r.s.end(), 0.0);
}

QrResult qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw DimensionError("qr: requires rows >= cols");
  Matrix r = a;
  std::vector<std::vector<double>> reflectors;
  const std::size_t steps = std::min(n, m - 1);
  reflectors.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<double> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0) {
      reflectors.emplace_back();
      continue;
    }
    const double alpha = v[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vnorm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    if (vnorm2 == 0.0) {
      reflectors.emplace_back();
      continue;
    }
    for (std::size_t j = k; j < n; ++j) {
      double d = 0.0;
      for (std::size_t i = k; i < m; ++i) d += v[i - k] * r(i, j);
      const double f = 2.0 * d / vnorm2;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= f * v[i - k];
    }
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    r(k, k) = alpha;
    for (double& x : v) x /= std::sqrt(vnorm2);
    reflectors.push_back(std::move(v));
  }
  Matrix q = Matrix::identity(m);
  for (std::size_t kk = reflectors.size(); kk-- > 0;) {
    const auto& v = reflectors[kk];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      double d = 0.0;
      for (std::size_t i = kk; i < m; ++i) d += v[i - kk] * q(i, j);
      for (std::size_t i = kk; i < m; ++i) q(i, j) -= 2.0 * d * v[i - kk];
    }
  }
  return {std::move(q), std::move(r)};
}

double determinant(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("determinant: matrix is not square");
  const std::size_t n = a.rows();
  Matrix lu = a;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return det;
}

Matrix cholesky_solve(const Matrix& a, const Matrix& b, double min_rcond) {
  if (!a.is_square() || a.rows() != b.rows()) throw DimensionError("cholesky_solve: shape mismatch");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
    if (!(d > 0.0)) {
      throw NumericalError("cholesky_solve: matrix is not positive definite (pivot " +
                           std::to_string(j) + ")");
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      l(i, j) = s / l(j, j);
    }
  }
  if (n > 0 && min_rcond > 0.0) {
    double lo = l(0, 0), hi = l(0, 0);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, l(i, i));
      hi = std::max(hi, l(i, i));
    }
    const double rcond = (lo / hi) * (lo / hi);
    if (rcond < min_rcond) {
      throw NumericalError("cholesky_solve: ill-conditioned system (rcond estimate " +
                           std::to_string(rcond) + ")");
    }
  }
  Matrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, c);
      for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * x(p, c);
      x(i, c) = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x(i, c);
      for (std::size_t p = i + 1; p < n; ++p) s -= l(p, i) * x(p, c);
      x(i, c) = s / l(i, i);
    }
  }
  return x;
}

SymmetricEigen symmetric_eigen(const Matrix& input) {
  if (!input.is_square()) throw DimensionError("symmetric_eigen: matrix is not square");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double scale2 = std::max(frobenius_norm(a) * frobenius_norm(a), 1e-300);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0;; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (off <= 1e-32 * scale2) break;
    if (sweep == kMaxSweeps) throw NumericalError("symmetric_eigen: no convergence");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    out.values[r] = a(order[r], order[r]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, r) = v(k, order[r]);
  }
  return out;
}

}  // namespace rsk
