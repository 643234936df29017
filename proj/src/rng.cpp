#include "mig/rng.hpp"

#include <cmath>
#include <numbers>

namespace mig {

Complex Rng::unit_phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

CVector Rng::complex_normal_vector(Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

CMatrix Rng::complex_normal_matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  }
  return m;
}

}  // namespace mig
