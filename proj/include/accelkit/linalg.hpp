#pragma once

// Small dense kernels behind the acceleration step: Gram matrices of the
// residual block, their largest eigenvalue, and SPD solves. Everything is
// double precision; windows are at most a few dozen columns wide while the
// columns themselves may be long.

#include <Eigen/Dense>

#include "accelkit/errors.hpp"

namespace accel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Replaces G by (G + Gᵀ)/2.
inline void symmetrize(Matrix& G) {
  G = (0.5 * (G + G.transpose())).eval();
}

/// RᵀR for a nonempty column block.
template <typename Derived>
Matrix gram_from_columns(const Eigen::MatrixBase<Derived>& R) {
  if (R.cols() == 0 || R.rows() == 0) {
    throw StructuralError("gram_from_columns: empty column block");
  }
  Matrix G = R.transpose() * R;
  symmetrize(G);
  return G;
}

/// Gram of [R, new_col] given G = RᵀR. Only the new row and column are
/// computed, i.e. R.cols() + 1 inner products of length d.
template <typename DerivedR, typename DerivedC>
Matrix gram_append_column(const Matrix& G, const Eigen::MatrixBase<DerivedR>& R,
                          const Eigen::MatrixBase<DerivedC>& new_col) {
  const Eigen::Index k = R.cols();
  if (G.rows() != k || G.cols() != k) {
    throw StructuralError("gram_append_column: Gram order does not match block");
  }
  if (new_col.size() != R.rows() && k > 0) {
    throw StructuralError("gram_append_column: column dimension mismatch");
  }
  Matrix out(k + 1, k + 1);
  out.topLeftCorner(k, k) = G;
  if (k > 0) {
    const Vector cross = R.transpose() * new_col;
    out.col(k).head(k) = cross;
    out.row(k).head(k) = cross.transpose();
  }
  out(k, k) = new_col.squaredNorm();
  return out;
}

/// Largest eigenvalue of a PSD matrix, i.e. ‖R‖₂² when G = RᵀR.
double spectral_norm_sq(const Matrix& G);

/// Solves A z = b by Cholesky with one round of iterative refinement.
/// Throws SingularMatrixError when a pivot is not positive.
Vector solve_spd(const Matrix& A, const Vector& b);

}  // namespace accel
