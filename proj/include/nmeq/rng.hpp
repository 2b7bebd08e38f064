#pragma once

#include <cstdint>
#include <random>

#include "nmeq/matrix.hpp"

namespace nmeq {

/// Seedable uniform generator with a platform-independent stream: the
/// mt19937_64 sequence is pinned by the standard and the [0,1) mapping uses
/// the top 53 bits directly, so identical seeds give bit-identical matrices
/// everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Matrix uniform_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = uniform01();
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nmeq
