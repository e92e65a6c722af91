#pragma once

#include <cstdint>

#include "rankzo/types.hpp"

namespace rankzo::core {

/// The N perturbation directions of one iteration, stored column-wise (d x N).
class DirectionSet {
 public:
  /// Throws IntegrityError if any entry is non-finite or the set is empty.
  DirectionSet(Matrix directions, std::int64_t iteration = 0);

  int dim() const { return static_cast<int>(directions_.rows()); }
  int size() const { return static_cast<int>(directions_.cols()); }
  std::int64_t iteration() const { return iteration_; }

  auto operator[](int i) const { return directions_.col(i); }
  const Matrix& matrix() const { return directions_; }

 private:
  Matrix directions_;
  std::int64_t iteration_;
};

}  // namespace rankzo::core
