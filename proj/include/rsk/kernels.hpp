#pragma once

// Inner-loop arithmetic shared by the dense routines. Each kernel has a
// scalar reference implementation and, where the target supports it, an
// AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is chosen once
// at first use from CPU capabilities; setting RSK_KERNELS=scalar in the
// environment forces the reference path.
//
// Preconditions for every kernel: the spans passed together have equal
// length. Vector variants reassociate sums, so results agree with the
// scalar reference to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace rsk::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b) noexcept;

struct Gram2 {
  double aa;
  double bb;
  double ab;
};

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // (‖a‖², ‖b‖², a·b) in one pass.
  Gram2 (*gram2)(const double* a, const double* b, std::size_t n);
  // Plane rotation: a ← c·a − s·b, b ← s·a + c·b.
  void (*rotate)(double* a, double* b, double c, double s, std::size_t n);
  // y ← y + alpha·x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// Table for `b`, or nullptr when the variant is not compiled in or the
/// running CPU lacks the instructions.
const KernelTable* table_for(Backend b) noexcept;

/// Process-wide selection, fixed after the first call.
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}
inline Gram2 gram2(std::span<const double> a, std::span<const double> b) {
  return active().gram2(a.data(), b.data(), a.size());
}
inline void rotate(std::span<double> a, std::span<double> b, double c, double s) {
  active().rotate(a.data(), b.data(), c, s, a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable& avx2_table() noexcept;
const KernelTable& neon_table() noexcept;
}  // namespace detail

}  // namespace rsk::kernels
