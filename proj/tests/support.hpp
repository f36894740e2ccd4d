#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "accelkit/linalg.hpp"
#include "accelkit/rng.hpp"

namespace support {

using accel::Matrix;
using accel::Vector;

inline Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  accel::CounterRng rng(seed);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  return M;
}

inline Vector gaussian(Eigen::Index n, std::uint64_t seed) { return gaussian(n, 1, seed).col(0); }

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Central differences, step scaled to the point.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double eps = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = eps * std::max(1.0, std::abs(x(i)));
    Vector a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

}  // namespace support
