#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rsk/matrix.hpp"

namespace rsk {

/// Seeded generator used by every stochastic routine.
///
/// Bits come from std::mt19937_64 (MT19937-64, fully specified by the C++
/// standard). Uniform doubles take the top 53 bits: u = (x >> 11)·2⁻⁵³.
/// Normal variates use the Marsaglia polar method on 2u − 1 pairs, caching
/// the second variate. Neither step uses a std:: distribution, so streams
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double normal();
  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  Matrix normal_matrix(std::size_t rows, std::size_t cols);
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rsk
